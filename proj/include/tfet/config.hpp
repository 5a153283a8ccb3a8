#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfet/device.hpp"

namespace tfet {

enum class CarrierBackend { closed_boundary, negf };
enum class RelaxationMode { carrier, band, combined };
enum class ChargeResponse { none, linearized };
enum class TransmissionEngine { negf, wkb_unconfined, wkb_confined };
enum class LeadPolicy { both_leads, single_lead };

struct KaneParams {
    double a = 4e14;   // cm^-3 s^-1 (V/cm)^-gamma eV^1/2
    double b = 1.9e7;  // V/cm eV^-3/2
    double gamma = 2.0;
    bool operator==(const KaneParams &) const = default;
};

struct SolverSettings {
    double mesh_spacing = 1.0;  // nm
    CarrierBackend backend = CarrierBackend::closed_boundary;
    RelaxationMode relaxation = RelaxationMode::carrier;
    ChargeResponse response = ChargeResponse::linearized;
    double alpha = 0.7;
    int anderson_depth = 5;  // 0 keeps plain relaxation
    double tolerance = 1e-5;  // V
    int max_iterations = 200;
    bool pockets = true;
    double eta = 1e-6;        // eV
    double extension = 10.0;  // nm, closed-boundary lead extension
    double energy_step_kt = 0.2;
    int kz_points = 8;
    TransmissionEngine transmission = TransmissionEngine::negf;
    LeadPolicy lead_policy = LeadPolicy::both_leads;
    bool compute_current = true;
    KaneParams kane;
    bool operator==(const SolverSettings &) const = default;
};

struct SweepSettings {
    std::vector<double> vg{0.0};
    std::vector<double> vd{0.1};
    bool warm_start = true;
    bool operator==(const SweepSettings &) const = default;
};

struct SimulationConfig {
    DeviceSpec device;
    SolverSettings solver;
    SweepSettings sweep;
    bool operator==(const SimulationConfig &) const = default;
};

// Directory holding materials.json: $TFETSIM_DATA_DIR, else the build-time default.
std::filesystem::path default_data_dir();

// Parses and validates a JSON config. Unknown keys, type errors and geometric
// violations raise ConfigError naming the offending key or regions.
SimulationConfig load_config(const std::string & text, const std::optional<std::filesystem::path> & data_dir = {});
DeviceSpec load_device(const std::string & text, const std::optional<std::filesystem::path> & data_dir = {});
SimulationConfig load_config_file(const std::filesystem::path & path);
// Reads `path`, applies "dotted.key=value" overrides in order, then validates.
SimulationConfig load_config_file(const std::filesystem::path & path, const std::vector<std::string> & overrides);

// One entry of materials.json; ConfigError when absent.
MaterialParams library_material(const std::string & name, const std::optional<std::filesystem::path> & data_dir = {});

// Fully resolved config (all defaults and material constants inlined).
nlohmann::json to_json(const SimulationConfig & cfg);
std::string echo_config(const SimulationConfig & cfg);

// Applies a dotted override such as "solver.alpha=0.5" or "sweep.vd=0.2" to raw config JSON.
void apply_override(nlohmann::json & doc, const std::string & assignment);

// Expands a scalar, list, or {start, stop, step} range.
std::vector<double> expand_range(const nlohmann::json & value, const std::string & key);

const char * to_string(CarrierBackend b);
const char * to_string(RelaxationMode m);
const char * to_string(TransmissionEngine e);

} // namespace tfet
