// Batch front end: run a bias sweep from a JSON config and write CSV results.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tfet/config.hpp"
#include "tfet/errors.hpp"
#include "tfet/io.hpp"
#include "tfet/parallel.hpp"
#include "tfet/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { ok = 0, usage = 1, config = 2, numerical = 3 };

struct Args {
    std::string config_path;
    std::string out_dir = "tfetsim_out";
    std::vector<std::string> overrides;
    double mesh_spacing = 0;
    std::string backend;
    bool dump_fields = false;
    bool continue_on_divergence = false;
    int threads = 0;
    std::vector<std::string> plots{"iv", "bands"};
    bool refinement_check = false;
    bool echo = false;
};

int run(const Args & a) {
    std::vector<std::string> overrides = a.overrides;
    if (a.mesh_spacing > 0) overrides.push_back(fmt::format("solver.mesh_spacing_nm={}", a.mesh_spacing));
    if (!a.backend.empty()) overrides.push_back("solver.backend=" + a.backend);
    tfet::SimulationConfig cfg = tfet::load_config_file(a.config_path, overrides);
    for (auto & k : a.plots) {
        if (std::find(tfet::plot_kinds().begin(), tfet::plot_kinds().end(), k) == tfet::plot_kinds().end()) {
            throw tfet::ConfigError("--plot", fmt::format("unknown plot kind '{}'", k));
        }
    }
    const std::string resolved = tfet::echo_config(cfg);
    if (a.echo) {
        std::fputs(resolved.c_str(), stdout);
        return ok;
    }
    const std::string hash = tfet::sha256_hex(resolved);
    const int threads = a.threads > 0 ? a.threads : tfet::default_threads();

    fs::path out(a.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw tfet::IoError(fmt::format("cannot create output directory {}", out.string()));

    tfet::SweepOptions so;
    so.threads = threads;
    so.refinement_check = a.refinement_check;
    so.keep_samples = std::find(a.plots.begin(), a.plots.end(), "transmission") != a.plots.end();
    so.progress = [](const tfet::BiasPoint & p) {
        std::fprintf(stderr, "vg %.4f V  vd %.4f V  %-9s %3d it  I/Lz %.6e A/nm  %.1f s\n", p.bias.vg, p.bias.vd,
                     tfet::to_string(p.loop.trace.status), p.loop.trace.iterations(),
                     p.current_computed ? p.current.current : 0.0, p.seconds);
        for (auto & w : p.loop.warnings) std::fprintf(stderr, "  warning: %s\n", w.c_str());
    };
    tfet::SweepResult result = tfet::run_sweep(cfg, so);

    // every file goes through here so the manifest can list it
    std::vector<fs::path> files;
    auto emit = [&](const fs::path & p, const std::string & text) {
        tfet::write_text_file(p, text);
        files.push_back(p);
    };
    emit(out / "config_resolved.json", resolved);
    emit(out / "iv_curve.csv", tfet::to_csv(tfet::iv_table(result, hash)));
    for (auto & p : result.points) {
        const std::string tag = tfet::point_tag(p.bias);
        emit(out / fmt::format("trace_{}.csv", tag), tfet::to_csv(tfet::trace_table(p.loop.trace)));
        if (a.dump_fields) {
            auto t = tfet::field_table({&p.loop.v, &p.loop.bands.ec, &p.loop.bands.ev, &p.loop.n, &p.loop.p});
            t.meta = {"converged fields", "config_sha256: " + hash};
            emit(out / fmt::format("fields_{}.csv", tag), tfet::to_csv(t));
        }
    }
    tfet::PlotOptions po;
    po.config_hash = hash;
    for (auto & k : a.plots) {
        for (auto & p : tfet::emit_plots(result, k, out, po)) files.push_back(p);
    }

    json manifest;
    manifest["tool"] = "tfetsim";
    manifest["tool_version"] = tfet::tool_version();
    manifest["config_sha256"] = hash;
    manifest["threads"] = threads;
    manifest["points"] = json::array();
    for (auto & p : result.points) {
        json j{{"vg_V", p.bias.vg},
               {"vd_V", p.bias.vd},
               {"status", tfet::to_string(p.loop.trace.status)},
               {"iterations", p.loop.trace.iterations()},
               {"seconds", p.seconds},
               {"warnings", p.loop.warnings}};
        if (p.current_computed) {
            j["current_A_per_nm"] = p.current.current;
            j["current_status"] = tfet::to_string(p.current.status);
            j["slice_retries"] = p.current.retried;
            if (p.current.refined) {
                j["refinement_change"] = p.current.refinement_change;
                j["refinement_ok"] = p.current.refinement_ok;
            }
        }
        manifest["points"].push_back(j);
    }
    manifest["files"] = json::array();
    for (auto & f : files) {
        manifest["files"].push_back({{"name", f.filename().string()}, {"sha256", tfet::sha256_hex(tfet::read_text_file(f))}});
    }
    tfet::write_text_file(out / "manifest.json", manifest.dump(2) + "\n");

    if (!result.all_converged() && !a.continue_on_divergence) {
        std::fprintf(stderr, "error: at least one bias point did not converge\n");
        return numerical;
    }
    return ok;
}

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"tfetsim: 2D ballistic NEGF simulator for band-to-band tunnelling FETs"};
    Args a;
    app.add_option("-c,--config", a.config_path, "JSON configuration file")->required();
    app.add_option("-o,--out", a.out_dir, "output directory")->capture_default_str();
    app.add_option("--set", a.overrides, "override a config entry, e.g. --set solver.alpha=0.5 (repeatable)");
    app.add_option("--mesh-spacing", a.mesh_spacing, "mesh spacing in nm (overrides solver.mesh_spacing_nm)");
    app.add_option("--backend", a.backend, "carrier backend inside the loop")->check(CLI::IsMember({"closed", "negf"}));
    app.add_flag("--dump-fields", a.dump_fields, "write V, Ec, Ev, n, p grids per bias point");
    app.add_flag("--continue-on-divergence", a.continue_on_divergence, "exit 0 even if some bias points fail to converge");
    app.add_option("--threads", a.threads, "worker threads (default: $TFETSIM_THREADS or 1)")->check(CLI::NonNegativeNumber);
    app.add_option("--plot", a.plots, "plot data to emit: iv, bands, barrier, transmission")->capture_default_str();
    app.add_flag("--refinement-check", a.refinement_check, "rerun each current on a grid refined 2x and report the change");
    app.add_flag("--echo-config", a.echo, "print the resolved configuration and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }
    try {
        return run(a);
    } catch (const tfet::ConfigError & e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return config;
    } catch (const tfet::IoError & e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return config;
    } catch (const tfet::NumericalError & e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return numerical;
    } catch (const std::exception & e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return numerical;
    }
}
