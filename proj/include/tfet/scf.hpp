#pragma once

#include <string>
#include <vector>

#include "tfet/carriers.hpp"
#include "tfet/config.hpp"
#include "tfet/poisson.hpp"

namespace tfet {

// Everything derived from a DeviceSpec on a given mesh.
struct DeviceModel {
    DeviceSpec spec;
    Mesh2D mesh;
    SampledFields fields;
    NodeMaterials mats;

    double kt() const { return spec.thermal_energy(); }
};

DeviceModel build_model(const DeviceSpec & spec, double target_spacing);

struct LoopConfig {
    RelaxationMode relaxation = RelaxationMode::carrier;
    ChargeResponse response = ChargeResponse::linearized;
    double alpha = 0.7;
    // Anderson mixing over the last `anderson_depth` potential updates. When on, the
    // carriers are never relaxed and 1 - alpha becomes the mixing weight.
    int anderson_depth = 5;
    double tolerance = 1e-5;  // V
    int max_iterations = 200;
    bool pockets = true;
    bool adaptive = true;  // halve (1 - alpha) when the update oscillates
    CarrierSettings carriers;
};

LoopConfig loop_config(const SolverSettings & s, int threads = 0);

enum class LoopStatus { converged, max_iterations, diverged };
const char * to_string(LoopStatus s);

struct IterationRecord {
    int iteration = 0;
    double max_dv = 0;        // V
    double max_dn_rel = 0;    // max |n_new - n_old| / max n
    double alpha = 0;
    double seconds = 0;
};

struct ConvergenceTrace {
    std::vector<IterationRecord> records;
    LoopStatus status = LoopStatus::max_iterations;
    int iterations() const { return static_cast<int>(records.size()); }
};

// Depletion-approximation junction profile along x from neutral bulk
// potentials, replicated in y, plus a gate term under gated segments.
FieldMap initial_guess(const DeviceModel & model, const Bias & bias);

// (1 - alpha) * calculated + alpha * old
FieldMap relax(const FieldMap & calculated, const FieldMap & old, double alpha);

struct LoopResult {
    FieldMap v;
    BandEdges bands;
    FieldMap n, p;
    ConvergenceTrace trace;
    std::vector<Pocket> conduction_pockets, valence_pockets;
    std::vector<std::string> warnings;
};

LoopResult run_loop(const DeviceModel & model, const Bias & bias, const LoopConfig & cfg,
                    const FieldMap * start = nullptr);

} // namespace tfet
