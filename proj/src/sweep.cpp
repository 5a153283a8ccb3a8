#include "tfet/sweep.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "tfet/band_structure.hpp"
#include "tfet/errors.hpp"

namespace tfet {

bool SweepResult::all_converged() const {
    for (auto & p : points) {
        if (p.loop.trace.status != LoopStatus::converged) return false;
    }
    return true;
}

BandEdges transport_bands(const LoopResult & loop, bool pockets) {
    return pockets ? remove_pockets(loop.bands).bands : loop.bands;
}

SweepResult run_sweep(const SimulationConfig & cfg, const SweepOptions & opt) {
    SweepResult res;
    res.model = build_model(cfg.device, cfg.solver.mesh_spacing);
    LoopConfig lc = loop_config(cfg.solver, opt.threads);
    CurrentOptions co = current_options(cfg.solver, opt.threads);
    co.keep_samples = opt.keep_samples;
    co.refinement_check = opt.refinement_check;
    const double kt = res.model.kt();

    for (double vd : cfg.sweep.vd) {
        const FieldMap * warm = nullptr;
        for (double vg : cfg.sweep.vg) {
            auto t0 = std::chrono::steady_clock::now();
            BiasPoint bp;
            bp.bias = {vg, vd, cfg.device.source_voltage};
            bp.loop = run_loop(res.model, bp.bias, lc, warm);
            if (cfg.solver.compute_current && bp.loop.trace.status != LoopStatus::diverged) {
                BandEdges bands = transport_bands(bp.loop, cfg.solver.pockets);
                bp.current = integrate_current(bands, res.model.mats, fermi_levels(bp.bias.vs, bp.bias.vd), kt, co);
                bp.current_computed = true;
            }
            bp.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            res.points.push_back(std::move(bp));
            if (opt.progress) opt.progress(res.points.back());
            // a diverged point is a poor seed for its neighbour
            bool usable = res.points.back().loop.trace.status != LoopStatus::diverged;
            warm = cfg.sweep.warm_start && usable ? &res.points.back().loop.v : nullptr;
        }
    }
    return res;
}

const char * tool_version() { return "0.1.0"; }

std::string point_tag(const Bias & b) { return fmt::format("vg{:.4f}_vd{:.4f}", b.vg, b.vd); }

Table iv_table(const SweepResult & result, const std::string & config_hash) {
    Table t;
    t.meta = {"tfetsim current-voltage sweep", "config_sha256: " + config_hash,
              "current is per unit width Lz: A/nm; voltages in V"};
    t.columns = {"vg_V", "vd_V", "current_A_per_nm", "log10_current", "loop_status", "current_status", "iterations"};
    for (auto & p : result.points) {
        double i = p.current_computed ? p.current.current : std::nan("");
        double lg = i > 0 ? std::log10(i) : std::nan("");
        t.add_row({format_number(p.bias.vg), format_number(p.bias.vd), format_number(i), format_number(lg),
                   to_string(p.loop.trace.status), p.current_computed ? to_string(p.current.status) : "skipped",
                   std::to_string(p.loop.trace.iterations())});
    }
    return t;
}

Table trace_table(const ConvergenceTrace & trace) {
    Table t;
    t.meta = {"self-consistent loop trace", std::string("status: ") + to_string(trace.status)};
    t.columns = {"iteration", "max_dv_V", "max_dn_rel", "alpha", "seconds"};
    for (auto & r : trace.records) {
        t.add_row({std::to_string(r.iteration), format_number(r.max_dv), format_number(r.max_dn_rel),
                   format_number(r.alpha), format_number(r.seconds)});
    }
    return t;
}

const std::vector<std::string> & plot_kinds() {
    static const std::vector<std::string> kinds{"iv", "bands", "barrier", "transmission"};
    return kinds;
}

namespace {

int row_at(const Mesh2D & m, double y) {
    if (y < 0) y = 0.5 * m.ly();
    if (m.ny == 0) return 0;
    return std::clamp(static_cast<int>(std::lround(y / m.ay)), 0, m.ny);
}

// Energy at which to sample the effective barrier: centre of the tunnelling
// window, or midway between the source valence top and drain conduction bottom.
double barrier_energy(const BandEdges & b, const NodeMaterials & mats) {
    TunnelWindow w = tunnel_window(subbands(b, 0.0, mats), mats);
    if (!w.empty()) return 0.5 * (w.e_min + w.e_max);
    return 0.5 * (b.ev.max() + b.ec.min());
}

} // namespace

std::vector<std::filesystem::path> emit_plots(const SweepResult & result, const std::string & kind,
                                              const std::filesystem::path & dir, const PlotOptions & opt) {
    std::vector<std::filesystem::path> written;
    const std::string hash_line = "config_sha256: " + opt.config_hash;
    if (kind == "iv") {
        auto path = dir / "plot_iv.csv";
        write_csv(path, iv_table(result, opt.config_hash));
        written.push_back(path);
    } else if (kind == "bands") {
        const Mesh2D & m = result.model.mesh;
        const int j = row_at(m, opt.y_cut);
        for (auto & p : result.points) {
            BandEdges b = p.loop.bands;
            Subbands sub = subbands(b, opt.band_kz, result.model.mats);
            Table t;
            t.meta = {"band edges along x", hash_line, fmt::format("vg {} V, vd {} V", p.bias.vg, p.bias.vd),
                      fmt::format("row y = {} nm; sub-bands at kz = {} 1/nm", m.y(j), opt.band_kz)};
            t.columns = {"x_nm", "ec_eV", "ev_eV", "ec_sub_eV", "ev_sub_eV", "n_cm3", "p_cm3"};
            for (int i = 0; i <= m.nx; ++i) {
                t.add_row({format_number(m.x(i)), format_number(b.ec(i, j)), format_number(b.ev(i, j)),
                           format_number(sub.ec_sub(i, j)), format_number(sub.ev_sub(i, j)),
                           format_number(p.loop.n(i, j)), format_number(p.loop.p(i, j))});
            }
            auto path = dir / fmt::format("bands_{}.csv", point_tag(p.bias));
            write_csv(path, t);
            written.push_back(path);
        }
    } else if (kind == "barrier") {
        for (auto & p : result.points) {
            BandEdges b = transport_bands(p.loop, true);
            double e = barrier_energy(b, result.model.mats);
            EffectiveFields f = effective_fields(e, subbands(b, 0.0, result.model.mats), result.model.mats);
            Table t = field_table({&f.u, &f.mass});
            t.meta = {"effective tunnelling barrier at kz = 0", hash_line,
                      fmt::format("vg {} V, vd {} V, E = {} eV", p.bias.vg, p.bias.vd, e)};
            auto path = dir / fmt::format("barrier_{}.csv", point_tag(p.bias));
            write_csv(path, t);
            written.push_back(path);
        }
    } else if (kind == "transmission") {
        for (auto & p : result.points) {
            if (!p.current_computed) continue;
            Table t;
            t.meta = {"transmission per (E, kz)", hash_line,
                      fmt::format("vg {} V, vd {} V", p.bias.vg, p.bias.vd)};
            t.columns = {"kz_per_nm", "energy_eV", "transmission"};
            for (auto & s : p.current.samples) {
                t.add_row({format_number(s.kz), format_number(s.e), format_number(s.t)});
            }
            auto path = dir / fmt::format("transmission_{}.csv", point_tag(p.bias));
            write_csv(path, t);
            written.push_back(path);
        }
    } else {
        std::string list;
        for (auto & k : plot_kinds()) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("plot", fmt::format("unknown plot kind '{}'; available: {}", kind, list));
    }
    return written;
}

} // namespace tfet
