#include "tfet/device.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/units.hpp"

namespace tfet {

const char * quantity_name(Quantity q) {
    switch (q) {
    case Quantity::potential: return "V";
    case Quantity::conduction_band: return "Ec";
    case Quantity::valence_band: return "Ev";
    case Quantity::electron_density: return "n";
    case Quantity::hole_density: return "p";
    case Quantity::charge_density: return "rho";
    case Quantity::net_doping: return "net_doping";
    case Quantity::permittivity: return "eps_r";
    case Quantity::effective_potential: return "U";
    case Quantity::effective_mass: return "m_star";
    case Quantity::generation_rate: return "G";
    case Quantity::electric_field: return "F";
    case Quantity::generic: return "value";
    }
    return "value";
}

const char * quantity_unit(Quantity q) {
    switch (q) {
    case Quantity::potential: return "V";
    case Quantity::conduction_band:
    case Quantity::valence_band:
    case Quantity::effective_potential: return "eV";
    case Quantity::electron_density:
    case Quantity::hole_density:
    case Quantity::net_doping: return "cm^-3";
    case Quantity::charge_density: return "C/cm^3";
    case Quantity::effective_mass: return "m0";
    case Quantity::generation_rate: return "cm^-3 s^-1";
    case Quantity::electric_field: return "V/cm";
    case Quantity::permittivity:
    case Quantity::generic: return "1";
    }
    return "1";
}

FieldMap::FieldMap(const Mesh2D & m, Quantity q, std::vector<double> v) : mesh(m), quantity(q), values(std::move(v)) {
    if (values.size() != mesh.size()) {
        throw NumericalError(fmt::format("field {} has {} values, mesh needs {}", quantity_name(q), values.size(), mesh.size()));
    }
}

double FieldMap::min() const { return *std::min_element(values.begin(), values.end()); }
double FieldMap::max() const { return *std::max_element(values.begin(), values.end()); }

bool FieldMap::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_same_mesh(const FieldMap & a, const FieldMap & b, const char * context) {
    if (!a.mesh.same_grid(b.mesh) || a.size() != b.size()) {
        throw NumericalError(fmt::format("{}: fields {} and {} are on different meshes", context,
                                         quantity_name(a.quantity), quantity_name(b.quantity)));
    }
}

const MaterialParams & DeviceSpec::material(const std::string & name) const {
    return materials.at(material_index(name));
}

int DeviceSpec::material_index(const std::string & name) const {
    for (std::size_t k = 0; k < materials.size(); ++k) {
        if (materials[k].name == name) return static_cast<int>(k);
    }
    throw ConfigError("materials", fmt::format("unknown material '{}'", name));
}

double DeviceSpec::thermal_energy() const { return units::thermal_energy(temperature); }

namespace {

constexpr double geom_tol = 1e-9;

double overlap_area(const Rect & a, const Rect & b) {
    double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    return (w > geom_tol && h > geom_tol) ? w * h : 0.0;
}

} // namespace

void validate(const DeviceSpec & spec) {
    if (!(spec.length > 0)) throw ConfigError("device.length_nm", "length must be positive");
    if (!(spec.thickness > 0)) throw ConfigError("device.thickness_nm", "thickness must be positive");
    if (!(spec.width > 0)) throw ConfigError("device.width_nm", "width must be positive");
    if (!(spec.temperature > 0)) throw ConfigError("device.temperature_K", "temperature must be positive");
    if (spec.regions.empty()) throw ConfigError("regions", "no regions");

    for (const auto & m : spec.materials) {
        auto key = "materials." + m.name;
        if (!(m.bandgap > 0)) throw ConfigError(key + ".bandgap_eV", "bandgap must be positive");
        if (!(m.electron_mass > 0)) throw ConfigError(key + ".electron_mass", "electron mass must be positive");
        if (!(m.hole_mass > 0)) throw ConfigError(key + ".hole_mass", "hole mass must be positive");
        if (!(m.eps_r >= 1)) throw ConfigError(key + ".eps_r", "relative permittivity must be >= 1");
    }
    spec.material_index(spec.reference_material);

    double covered = 0;
    for (std::size_t k = 0; k < spec.regions.size(); ++k) {
        const auto & r = spec.regions[k];
        auto key = fmt::format("regions[{}]", k);
        if (r.name.empty()) throw ConfigError(key + ".name", "region needs a name");
        if (!(r.box.x1 > r.box.x0 + geom_tol) || !(r.box.y1 > r.box.y0 + geom_tol)) {
            throw ConfigError(key, fmt::format("region '{}' has empty extent", r.name));
        }
        if (r.box.x0 < -geom_tol || r.box.x1 > spec.length + geom_tol || r.box.y0 < -geom_tol ||
            r.box.y1 > spec.thickness + geom_tol) {
            throw ConfigError(key, fmt::format("region '{}' extends outside the body", r.name));
        }
        spec.material_index(r.material);
        for (std::size_t l = 0; l < k; ++l) {
            if (overlap_area(r.box, spec.regions[l].box) > 0) {
                throw ConfigError("regions", fmt::format("regions '{}' and '{}' overlap", spec.regions[l].name, r.name));
            }
        }
        covered += r.box.area();
    }
    double body = spec.length * spec.thickness;
    if (std::abs(covered - body) > 1e-9 * body) {
        throw ConfigError("regions", fmt::format("regions cover {} nm^2 of a {} nm^2 body; they must tile it", covered, body));
    }

    for (std::size_t k = 0; k < spec.gates.size(); ++k) {
        const auto & g = spec.gates[k];
        auto key = fmt::format("gates[{}]", k);
        if (!(g.oxide_thickness > 0)) throw ConfigError(key + ".oxide_thickness_nm", "oxide thickness must be positive");
        if (!(g.oxide_eps_r >= 1)) throw ConfigError(key + ".oxide_eps_r", "oxide permittivity must be >= 1");
        if (!(g.x1 > g.x0) || g.x0 < -geom_tol || g.x1 > spec.length + geom_tol) {
            throw ConfigError(key + ".x_nm", fmt::format("gate '{}' must span a positive range inside the body", g.name));
        }
    }
}

int aligned_section_count(double length, double target, const std::vector<double> & boundaries) {
    int n = std::max(1, static_cast<int>(std::ceil(length / target - 1e-12)));
    constexpr int max_sections = 200000;
    for (; n <= max_sections; ++n) {
        bool aligned = std::all_of(boundaries.begin(), boundaries.end(), [&](double b) {
            double s = b * n / length;
            return std::abs(s - std::round(s)) < 1e-7;
        });
        if (aligned) return n;
    }
    throw ConfigError("solver.mesh_spacing_nm",
                      fmt::format("no uniform spacing <= {} nm aligns with all boundaries of a {} nm axis", target, length));
}

Mesh2D build_mesh(const DeviceSpec & spec, double target_spacing) {
    if (!(target_spacing > 0)) throw ConfigError("solver.mesh_spacing_nm", "spacing must be positive");
    if (!(spec.thickness > 0)) throw ConfigError("device.thickness_nm", "thickness must be positive");
    if (!(spec.length > 0)) throw ConfigError("device.length_nm", "length must be positive");

    std::vector<double> bx, by;
    for (const auto & r : spec.regions) {
        bx.insert(bx.end(), {r.box.x0, r.box.x1});
        by.insert(by.end(), {r.box.y0, r.box.y1});
    }
    for (const auto & g : spec.gates) bx.insert(bx.end(), {g.x0, g.x1});

    Mesh2D mesh;
    mesh.nx = aligned_section_count(spec.length, target_spacing, bx);
    mesh.ny = aligned_section_count(spec.thickness, target_spacing, by);
    mesh.ax = spec.length / mesh.nx;
    mesh.ay = spec.thickness / mesh.ny;

    std::string note;
    auto check = [&](const char * axis, double length, int n, double a) {
        if (std::abs(length / target_spacing - n) > 1e-9) {
            note += fmt::format("{}spacing along {} snapped to {}/{} = {:.6g} nm (target {} nm)",
                                note.empty() ? "" : "; ", axis, length, n, a, target_spacing);
        }
    };
    check("x", spec.length, mesh.nx, mesh.ax);
    check("y", spec.thickness, mesh.ny, mesh.ay);
    mesh.adjustment = note;
    return mesh;
}

SampledFields sample_fields(const DeviceSpec & spec, const Mesh2D & mesh) {
    SampledFields out{FieldMap(mesh, Quantity::net_doping), FieldMap(mesh, Quantity::permittivity),
                      std::vector<int>(mesh.size(), -1), std::vector<int>(mesh.size(), -1)};
    for (int i = 0; i < mesh.nodes_x(); ++i) {
        for (int j = 0; j < mesh.nodes_y(); ++j) {
            double x = mesh.x(i), y = mesh.y(j);
            auto p = mesh.index(i, j);
            for (std::size_t k = 0; k < spec.regions.size(); ++k) {
                const auto & r = spec.regions[k];
                if (r.box.contains(x, y, 1e-7 * std::max(mesh.ax, mesh.ay))) {
                    int m = spec.material_index(r.material);
                    out.net_doping[p] = r.net_doping;
                    out.permittivity[p] = spec.materials[m].eps_r;
                    out.material_index[p] = m;
                    out.region_index[p] = static_cast<int>(k);
                    break;
                }
            }
            if (out.region_index[p] < 0) {
                throw NumericalError(fmt::format("node ({}, {}) at ({} nm, {} nm) lies outside every region", i, j, x, y));
            }
        }
    }
    return out;
}

double vacuum_reference(const DeviceSpec & spec) {
    const auto & ref = spec.material(spec.reference_material);
    return ref.affinity + 0.5 * ref.bandgap;
}

NodeMaterials node_materials(const DeviceSpec & spec, const SampledFields & fields) {
    NodeMaterials out;
    auto n = fields.material_index.size();
    out.bandgap.resize(n);
    out.electron_mass.resize(n);
    out.hole_mass.resize(n);
    out.affinity.resize(n);
    out.ec_offset.resize(n);
    double ref = vacuum_reference(spec);
    for (std::size_t p = 0; p < n; ++p) {
        const auto & m = spec.materials[fields.material_index[p]];
        out.bandgap[p] = m.bandgap;
        out.electron_mass[p] = m.electron_mass;
        out.hole_mass[p] = m.hole_mass;
        out.affinity[p] = m.affinity;
        out.ec_offset[p] = ref - m.affinity;
    }
    return out;
}

} // namespace tfet
