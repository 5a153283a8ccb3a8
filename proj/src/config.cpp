#include "tfet/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "tfet/errors.hpp"

namespace tfet {

using nlohmann::json;

namespace {

// Reads keys from one JSON object and rejects anything it was not asked about.
class Section {
public:
    Section(const json & obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
    }

    bool has(const std::string & key) const { return obj_.contains(key); }

    const json & raw(const std::string & key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string & key, std::optional<double> fallback = {}) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(key_of(key), "missing required key");
        }
        const auto & v = raw(key);
        if (!v.is_number()) throw ConfigError(key_of(key), "expected a number");
        double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(key_of(key), "must be finite");
        return d;
    }

    int integer(const std::string & key, int fallback) {
        if (!has(key)) return fallback;
        const auto & v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(key_of(key), "expected an integer");
        return v.get<int>();
    }

    bool boolean(const std::string & key, bool fallback) {
        if (!has(key)) return fallback;
        const auto & v = raw(key);
        if (!v.is_boolean()) throw ConfigError(key_of(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string & key, std::optional<std::string> fallback = {}) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(key_of(key), "missing required key");
        }
        const auto & v = raw(key);
        if (!v.is_string()) throw ConfigError(key_of(key), "expected a string");
        return v.get<std::string>();
    }

    std::pair<double, double> interval(const std::string & key, std::optional<std::pair<double, double>> fallback = {}) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(key_of(key), "missing required key");
        }
        const auto & v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ConfigError(key_of(key), "expected [lo, hi]");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

    template <typename E>
    E choice(const std::string & key, E fallback, std::initializer_list<std::pair<const char *, E>> options) {
        if (!has(key)) return fallback;
        auto s = string(key);
        std::string names;
        for (const auto & [name, value] : options) {
            if (s == name) return value;
            names += (names.empty() ? "" : ", ") + std::string(name);
        }
        throw ConfigError(key_of(key), fmt::format("'{}' is not one of: {}", s, names));
    }

    std::string key_of(const std::string & key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(key_of(it.key()), "unknown config key");
        }
    }

private:
    const json & obj_;
    std::string path_;
    std::set<std::string> seen_;
};

MaterialParams parse_material(const std::string & name, const json & obj, const std::string & path,
                              const MaterialParams * base) {
    Section s(obj, path);
    MaterialParams m;
    m.name = name;
    auto get = [&](const char * key, double MaterialParams::*field) {
        m.*field = s.number(key, base ? std::optional<double>(base->*field) : std::nullopt);
    };
    get("bandgap_eV", &MaterialParams::bandgap);
    get("electron_mass", &MaterialParams::electron_mass);
    get("hole_mass", &MaterialParams::hole_mass);
    get("eps_r", &MaterialParams::eps_r);
    get("affinity_eV", &MaterialParams::affinity);
    s.finish();
    return m;
}

std::vector<MaterialParams> load_material_library(const std::filesystem::path & dir) {
    auto file = dir / "materials.json";
    std::ifstream in(file);
    if (!in) throw ConfigError("materials", fmt::format("cannot read material data file {}", file.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception & e) {
        throw ConfigError("materials", fmt::format("{}: {}", file.string(), e.what()));
    }
    std::vector<MaterialParams> out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.key().empty() && it.key()[0] == '_') continue;
        out.push_back(parse_material(it.key(), it.value(), "materials." + it.key(), nullptr));
    }
    return out;
}

DeviceSpec parse_device(const json & doc, const std::filesystem::path & data_dir) {
    DeviceSpec spec;
    {
        Section s(doc.at("device"), "device");
        spec.length = s.number("length_nm");
        spec.thickness = s.number("thickness_nm");
        spec.width = s.number("width_nm", 1000.0);
        spec.temperature = s.number("temperature_K", 300.0);
        spec.reference_material = s.string("reference_material", std::string{});
        s.finish();
    }

    std::vector<MaterialParams> library = load_material_library(data_dir);
    if (doc.contains("materials")) {
        Section s(doc.at("materials"), "materials");
        for (auto it = doc.at("materials").begin(); it != doc.at("materials").end(); ++it) {
            s.raw(it.key());
            auto found = std::find_if(library.begin(), library.end(), [&](const auto & m) { return m.name == it.key(); });
            auto m = parse_material(it.key(), it.value(), "materials." + it.key(), found == library.end() ? nullptr : &*found);
            if (found == library.end()) library.push_back(m);
            else *found = m;
        }
        s.finish();
    }

    if (!doc.contains("regions") || !doc.at("regions").is_array()) throw ConfigError("regions", "expected a list of regions");
    const auto & regions = doc.at("regions");
    for (std::size_t k = 0; k < regions.size(); ++k) {
        auto path = fmt::format("regions[{}]", k);
        Section s(regions[k], path);
        Region r;
        r.name = s.string("name");
        auto [x0, x1] = s.interval("x_nm");
        auto [y0, y1] = s.interval("y_nm", std::pair{0.0, spec.thickness});
        r.box = Rect{x0, x1, y0, y1};
        r.material = s.string("material", std::string("Si"));
        r.net_doping = s.number("doping_cm3");
        s.finish();
        spec.regions.push_back(r);
    }

    if (doc.contains("gates")) {
        const auto & gates = doc.at("gates");
        if (!gates.is_array()) throw ConfigError("gates", "expected a list of gates");
        for (std::size_t k = 0; k < gates.size(); ++k) {
            Section s(gates[k], fmt::format("gates[{}]", k));
            Gate g;
            g.name = s.string("name", fmt::format("gate{}", k));
            g.side = s.choice("side", GateSide::top, {{"top", GateSide::top}, {"bottom", GateSide::bottom}});
            auto [x0, x1] = s.interval("x_nm");
            g.x0 = x0;
            g.x1 = x1;
            g.work_function = s.number("work_function_eV", 4.5);
            g.oxide_thickness = s.number("oxide_thickness_nm", 1.0);
            g.oxide_eps_r = s.number("oxide_eps_r", 3.9);
            s.finish();
            spec.gates.push_back(g);
        }
    }

    if (doc.contains("contacts")) {
        Section s(doc.at("contacts"), "contacts");
        spec.source_voltage = s.number("source_voltage_V", 0.0);
        s.finish();
    }

    // keep only referenced materials, in first-use order
    for (const auto & r : spec.regions) {
        bool have = std::any_of(spec.materials.begin(), spec.materials.end(), [&](const auto & m) { return m.name == r.material; });
        if (have) continue;
        auto found = std::find_if(library.begin(), library.end(), [&](const auto & m) { return m.name == r.material; });
        if (found == library.end()) throw ConfigError("regions", fmt::format("region '{}' uses unknown material '{}'", r.name, r.material));
        spec.materials.push_back(*found);
    }
    if (spec.reference_material.empty()) spec.reference_material = spec.regions.front().material;

    validate(spec);
    return spec;
}

SolverSettings parse_solver(const json & obj) {
    SolverSettings out;
    Section s(obj, "solver");
    out.mesh_spacing = s.number("mesh_spacing_nm", out.mesh_spacing);
    out.backend = s.choice("backend", out.backend, {{"closed", CarrierBackend::closed_boundary}, {"negf", CarrierBackend::negf}});
    out.relaxation = s.choice("relaxation", out.relaxation,
                              {{"carrier", RelaxationMode::carrier}, {"band", RelaxationMode::band}, {"combined", RelaxationMode::combined}});
    out.response = s.choice("response", out.response, {{"linearized", ChargeResponse::linearized}, {"none", ChargeResponse::none}});
    out.alpha = s.number("alpha", out.alpha);
    out.anderson_depth = s.integer("anderson_depth", out.anderson_depth);
    out.tolerance = s.number("tolerance_V", out.tolerance);
    out.max_iterations = s.integer("max_iterations", out.max_iterations);
    out.pockets = s.boolean("pockets", out.pockets);
    out.eta = s.number("eta_eV", out.eta);
    out.extension = s.number("extension_nm", out.extension);
    out.energy_step_kt = s.number("energy_step_kT", out.energy_step_kt);
    out.kz_points = s.integer("kz_points", out.kz_points);
    out.transmission = s.choice("transmission", out.transmission,
                                {{"negf", TransmissionEngine::negf},
                                 {"wkb_unconfined", TransmissionEngine::wkb_unconfined},
                                 {"wkb_confined", TransmissionEngine::wkb_confined}});
    out.lead_policy = s.choice("lead_policy", out.lead_policy, {{"both", LeadPolicy::both_leads}, {"single", LeadPolicy::single_lead}});
    out.compute_current = s.boolean("compute_current", out.compute_current);
    if (s.has("kane")) {
        Section k(s.raw("kane"), "solver.kane");
        out.kane.a = k.number("A", out.kane.a);
        out.kane.b = k.number("B", out.kane.b);
        out.kane.gamma = k.number("gamma", out.kane.gamma);
        k.finish();
    }
    s.finish();

    if (!(out.mesh_spacing > 0)) throw ConfigError("solver.mesh_spacing_nm", "must be positive");
    if (!(out.alpha >= 0 && out.alpha < 1)) throw ConfigError("solver.alpha", "forgetting factor must lie in [0, 1)");
    if (!(out.tolerance > 0)) throw ConfigError("solver.tolerance_V", "must be positive");
    if (out.anderson_depth < 0) throw ConfigError("solver.anderson_depth", "must be non-negative");
    if (out.max_iterations < 1) throw ConfigError("solver.max_iterations", "must be at least 1");
    if (!(out.eta > 0)) throw ConfigError("solver.eta_eV", "must be positive");
    if (!(out.extension >= 0)) throw ConfigError("solver.extension_nm", "must be non-negative");
    if (!(out.energy_step_kt > 0)) throw ConfigError("solver.energy_step_kT", "must be positive");
    if (out.kz_points < 1) throw ConfigError("solver.kz_points", "must be at least 1");
    return out;
}

SweepSettings parse_sweep(const json & obj) {
    SweepSettings out;
    Section s(obj, "sweep");
    if (s.has("vg")) out.vg = expand_range(s.raw("vg"), "sweep.vg");
    if (s.has("vd")) out.vd = expand_range(s.raw("vd"), "sweep.vd");
    out.warm_start = s.boolean("warm_start", out.warm_start);
    s.finish();
    return out;
}

json parse_text(const std::string & text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error & e) {
        throw ConfigError("", fmt::format("config is not valid JSON: {}", e.what()));
    }
}

void check_top_level(const json & doc) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    static const std::set<std::string> known{"device", "regions", "gates", "contacts", "materials", "solver", "sweep"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!known.count(it.key())) throw ConfigError(it.key(), "unknown config key");
    }
    if (!doc.contains("device")) throw ConfigError("device", "missing required section");
}

} // namespace

MaterialParams library_material(const std::string & name, const std::optional<std::filesystem::path> & data_dir) {
    for (auto & m : load_material_library(data_dir ? *data_dir : default_data_dir())) {
        if (m.name == name) return m;
    }
    throw ConfigError("materials." + name, "not in the material library");
}

std::filesystem::path default_data_dir() {
    if (const char * env = std::getenv("TFETSIM_DATA_DIR"); env && *env) return env;
    return TFET_DEFAULT_DATA_DIR;
}

std::vector<double> expand_range(const json & value, const std::string & key) {
    if (value.is_number()) return {value.get<double>()};
    if (value.is_array()) {
        std::vector<double> out;
        for (const auto & v : value) {
            if (!v.is_number()) throw ConfigError(key, "list entries must be numbers");
            out.push_back(v.get<double>());
        }
        if (out.empty()) throw ConfigError(key, "empty list");
        return out;
    }
    if (value.is_object()) {
        Section s(value, key);
        double start = s.number("start"), stop = s.number("stop"), step = s.number("step");
        s.finish();
        if (!(step > 0) || stop < start) throw ConfigError(key, "range needs step > 0 and stop >= start");
        auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out;
        for (long k = 0; k < count; ++k) {
            double v = start + k * step;
            out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
        }
        return out;
    }
    throw ConfigError(key, "expected a number, a list, or {start, stop, step}");
}

SimulationConfig load_config(const std::string & text, const std::optional<std::filesystem::path> & data_dir) {
    json doc = parse_text(text);
    check_top_level(doc);
    SimulationConfig cfg;
    try {
        cfg.device = parse_device(doc, data_dir.value_or(default_data_dir()));
        cfg.solver = doc.contains("solver") ? parse_solver(doc.at("solver")) : SolverSettings{};
        cfg.sweep = doc.contains("sweep") ? parse_sweep(doc.at("sweep")) : SweepSettings{};
    } catch (const json::exception & e) {
        throw ConfigError("", e.what());
    }
    return cfg;
}

DeviceSpec load_device(const std::string & text, const std::optional<std::filesystem::path> & data_dir) {
    return load_config(text, data_dir).device;
}

SimulationConfig load_config_file(const std::filesystem::path & path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", fmt::format("cannot read {}", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

SimulationConfig load_config_file(const std::filesystem::path & path, const std::vector<std::string> & overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", fmt::format("cannot read {}", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    json doc = parse_text(buf.str());
    for (auto & o : overrides) apply_override(doc, o);
    return load_config(doc.dump());
}

const char * to_string(CarrierBackend b) { return b == CarrierBackend::negf ? "negf" : "closed"; }

const char * to_string(RelaxationMode m) {
    switch (m) {
    case RelaxationMode::carrier: return "carrier";
    case RelaxationMode::band: return "band";
    case RelaxationMode::combined: return "combined";
    }
    return "carrier";
}

const char * to_string(TransmissionEngine e) {
    switch (e) {
    case TransmissionEngine::negf: return "negf";
    case TransmissionEngine::wkb_unconfined: return "wkb_unconfined";
    case TransmissionEngine::wkb_confined: return "wkb_confined";
    }
    return "negf";
}

json to_json(const SimulationConfig & cfg) {
    const auto & d = cfg.device;
    json doc;
    doc["device"] = {{"length_nm", d.length},       {"thickness_nm", d.thickness},
                     {"width_nm", d.width},         {"temperature_K", d.temperature},
                     {"reference_material", d.reference_material}};
    json mats = json::object();
    for (const auto & m : d.materials) {
        mats[m.name] = {{"bandgap_eV", m.bandgap}, {"electron_mass", m.electron_mass}, {"hole_mass", m.hole_mass},
                        {"eps_r", m.eps_r}, {"affinity_eV", m.affinity}};
    }
    doc["materials"] = mats;
    json regions = json::array();
    for (const auto & r : d.regions) {
        regions.push_back({{"name", r.name}, {"x_nm", {r.box.x0, r.box.x1}}, {"y_nm", {r.box.y0, r.box.y1}},
                           {"material", r.material}, {"doping_cm3", r.net_doping}});
    }
    doc["regions"] = regions;
    json gates = json::array();
    for (const auto & g : d.gates) {
        gates.push_back({{"name", g.name}, {"side", g.side == GateSide::top ? "top" : "bottom"}, {"x_nm", {g.x0, g.x1}},
                         {"work_function_eV", g.work_function}, {"oxide_thickness_nm", g.oxide_thickness},
                         {"oxide_eps_r", g.oxide_eps_r}});
    }
    doc["gates"] = gates;
    doc["contacts"] = {{"source_voltage_V", d.source_voltage}};

    const auto & s = cfg.solver;
    doc["solver"] = {
        {"mesh_spacing_nm", s.mesh_spacing},
        {"backend", to_string(s.backend)},
        {"relaxation", to_string(s.relaxation)},
        {"response", s.response == ChargeResponse::linearized ? "linearized" : "none"},
        {"alpha", s.alpha},
        {"anderson_depth", s.anderson_depth},
        {"tolerance_V", s.tolerance},
        {"max_iterations", s.max_iterations},
        {"pockets", s.pockets},
        {"eta_eV", s.eta},
        {"extension_nm", s.extension},
        {"energy_step_kT", s.energy_step_kt},
        {"kz_points", s.kz_points},
        {"transmission", to_string(s.transmission)},
        {"lead_policy", s.lead_policy == LeadPolicy::both_leads ? "both" : "single"},
        {"compute_current", s.compute_current},
        {"kane", {{"A", s.kane.a}, {"B", s.kane.b}, {"gamma", s.kane.gamma}}},
    };
    doc["sweep"] = {{"vg", cfg.sweep.vg}, {"vd", cfg.sweep.vd}, {"warm_start", cfg.sweep.warm_start}};
    return doc;
}

std::string echo_config(const SimulationConfig & cfg) { return to_json(cfg).dump(2) + "\n"; }

void apply_override(json & doc, const std::string & assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set", fmt::format("expected key=value, got '{}'", assignment));
    std::string path = assignment.substr(0, eq);
    std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error &) {
        value = text;  // bare strings
    }
    json * node = &doc;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
        if (!node->is_object()) throw ConfigError(path, "cannot descend into a non-object");
        node = &(*node)[parts[k]];
        if (node->is_null()) *node = json::object();
    }
    (*node)[parts.back()] = value;
}

} // namespace tfet
