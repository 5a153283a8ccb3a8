#pragma once

#include <string>
#include <vector>

#include "tfet/device.hpp"
#include "tfet/field.hpp"
#include "tfet/poisson.hpp"

namespace tfet {

// Effective potential and mass on a single-row strip: flat leads of `lead_sites`
// nodes on each side of a barrier of `barrier_sites` nodes at height u0.
struct FieldStrip {
    FieldMap u, mass;
    int barrier_begin = 0, barrier_end = 0;  // node range [begin, end)
};
FieldStrip rectangular_barrier_strip(int lead_sites, int barrier_sites, double u0, double mass, double spacing);

// Band edges of an abrupt tunnel junction under a uniform field. The source
// valence edge sits at +overlap/2 and the drain conduction edge at -overlap/2,
// so the tunnelling window is (-overlap/2, overlap/2). A non-zero tilt rotates
// the junction plane away from the y axis, making the straight-x paths longer
// than the field lines.
struct JunctionShape {
    double width = 10;      // strip thickness, nm
    double field = 0.25;    // V/nm, along the junction normal
    double overlap = 0.3;   // eV
    double tilt_deg = 0;
    double lead_length = 3; // flat band on each side, nm
    double spacing = 0.5;   // nm
};

struct BandScenario {
    std::string name;
    BandEdges bands;
    NodeMaterials mats;
    double e_lo = 0, e_hi = 0;  // tunnelling window at kz = 0
};

BandScenario junction_scenario(const std::string & name, const MaterialParams & material, const JunctionShape & shape);

// Linear wide strip, 3 nm confined strip and a 45 degree skewed junction.
std::vector<BandScenario> taxonomy_scenarios(const MaterialParams & material);

// Uniform per-node constants for one material on `mesh`.
NodeMaterials uniform_materials(const Mesh2D & mesh, const MaterialParams & material);

} // namespace tfet
