#include "tfet/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "tfet/errors.hpp"
#include "tfet/units.hpp"

namespace tfet {

FieldStrip rectangular_barrier_strip(int lead_sites, int barrier_sites, double u0, double mass, double spacing) {
    if (lead_sites < 1 || barrier_sites < 0) throw ConfigError("scenario", "strip needs leads and a non-negative barrier");
    Mesh2D m;
    m.nx = 2 * lead_sites + barrier_sites - 1;
    m.ny = 0;
    m.ax = m.ay = spacing;
    FieldStrip s{FieldMap(m, Quantity::effective_potential), FieldMap(m, Quantity::effective_mass), lead_sites,
                 lead_sites + barrier_sites};
    for (int i = 0; i <= m.nx; ++i) {
        s.u(i, 0) = (i >= s.barrier_begin && i < s.barrier_end) ? u0 : 0.0;
        s.mass(i, 0) = mass;
    }
    return s;
}

NodeMaterials uniform_materials(const Mesh2D & mesh, const MaterialParams & material) {
    NodeMaterials nm;
    nm.bandgap.assign(mesh.size(), material.bandgap);
    nm.electron_mass.assign(mesh.size(), material.electron_mass);
    nm.hole_mass.assign(mesh.size(), material.hole_mass);
    nm.affinity.assign(mesh.size(), material.affinity);
    nm.ec_offset.assign(mesh.size(), material.bandgap / 2);
    return nm;
}

BandScenario junction_scenario(const std::string & name, const MaterialParams & material, const JunctionShape & shape) {
    if (!(shape.field > 0) || !(shape.width > 0) || !(shape.spacing > 0)) {
        throw ConfigError("scenario", "field, width and spacing must be positive");
    }
    const double eg = material.bandgap;
    const double drop = eg + shape.overlap;
    const double ramp = drop / shape.field;  // along the junction normal
    const double theta = shape.tilt_deg * units::pi / 180.0;
    const double c = std::cos(theta), s = std::sin(theta);
    // x extent of the ramp across the whole width, plus flat leads
    const double span = ramp / c + shape.width * std::abs(std::tan(theta));
    const double length = span + 2 * shape.lead_length;

    Mesh2D m;
    m.nx = static_cast<int>(std::ceil(length / shape.spacing));
    m.ny = static_cast<int>(std::ceil(shape.width / shape.spacing));
    m.ax = length / m.nx;
    m.ay = shape.width / m.ny;

    BandScenario out;
    out.name = name;
    out.mats = uniform_materials(m, material);
    out.bands.ec = FieldMap(m, Quantity::conduction_band);
    out.bands.ev = FieldMap(m, Quantity::valence_band);
    const double xc = 0.5 * m.lx(), yc = 0.5 * m.ly();
    const double ec_source = shape.overlap / 2 + eg;
    for (int i = 0; i <= m.nx; ++i) {
        for (int j = 0; j <= m.ny; ++j) {
            double p = (m.x(i) - xc) * c + (m.y(j) - yc) * s;  // distance along the normal
            double along = std::clamp(p + ramp / 2, 0.0, ramp);
            out.bands.ec(i, j) = ec_source - shape.field * along;
            out.bands.ev(i, j) = out.bands.ec(i, j) - eg;
        }
    }
    out.e_lo = -shape.overlap / 2;
    out.e_hi = shape.overlap / 2;
    return out;
}

std::vector<BandScenario> taxonomy_scenarios(const MaterialParams & material) {
    JunctionShape wide;
    wide.width = 20;
    JunctionShape narrow;
    narrow.width = 3;
    JunctionShape skew;
    skew.width = 10;
    skew.tilt_deg = 45;
    return {junction_scenario("linear", material, wide), junction_scenario("confined", material, narrow),
            junction_scenario("skewed", material, skew)};
}

} // namespace tfet
