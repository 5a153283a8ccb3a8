#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tfet/config.hpp"
#include "tfet/io.hpp"
#include "tfet/scf.hpp"
#include "tfet/transport.hpp"

namespace tfet {

struct BiasPoint {
    Bias bias;
    LoopResult loop;
    CurrentResult current;
    bool current_computed = false;
    double seconds = 0;
};

struct SweepOptions {
    int threads = 0;
    bool keep_samples = false;  // keep T(E, kz) for the transmission plot
    bool refinement_check = false;
    std::function<void(const BiasPoint &)> progress;
};

struct SweepResult {
    DeviceModel model;
    std::vector<BiasPoint> points;  // vd outer, vg inner, in config order
    bool all_converged() const;
};

// Runs every (vg, vd) pair. With warm start each point begins from the previous
// converged potential at the same drain bias.
SweepResult run_sweep(const SimulationConfig & cfg, const SweepOptions & opt = {});

// Band edges with pockets filled when the loop used pocket removal.
BandEdges transport_bands(const LoopResult & loop, bool pockets);

// iv_curve.csv contents: no timings, so identical inputs give identical bytes.
Table iv_table(const SweepResult & result, const std::string & config_hash);
Table trace_table(const ConvergenceTrace & trace);

struct PlotOptions {
    double y_cut = -1;        // nm; negative selects Ly / 2
    double band_kz = 0.5;     // 1/nm, for the sub-band columns of the band plot
    std::string config_hash;
};

// Plot-ready data files. Kinds: iv, bands, barrier, transmission. Returns the
// written paths; unknown kinds raise ConfigError listing the valid ones.
std::vector<std::filesystem::path> emit_plots(const SweepResult & result, const std::string & kind,
                                              const std::filesystem::path & dir, const PlotOptions & opt = {});
const std::vector<std::string> & plot_kinds();

std::string point_tag(const Bias & b);

const char * tool_version();

} // namespace tfet
