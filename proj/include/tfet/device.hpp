#pragma once

#include <string>
#include <vector>

#include "tfet/field.hpp"

namespace tfet {

struct MaterialParams {
    std::string name;
    double bandgap = 0;        // eV
    double electron_mass = 0;  // m0
    double hole_mass = 0;      // m0
    double eps_r = 1;
    double affinity = 0;       // eV

    bool operator==(const MaterialParams &) const = default;
};

// Axis-aligned rectangle in nm, closed on all sides.
struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool contains(double x, double y, double tol = 1e-9) const {
        return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
    }
    double area() const { return (x1 - x0) * (y1 - y0); }
    bool operator==(const Rect &) const = default;
};

struct Region {
    std::string name;
    Rect box;
    std::string material;
    double net_doping = 0;  // N_D - N_A in cm^-3 (negative for p-type)
    bool operator==(const Region &) const = default;
};

enum class GateSide { bottom, top };

struct Gate {
    std::string name;
    GateSide side = GateSide::top;
    double x0 = 0, x1 = 0;       // nm, along the surface
    double work_function = 4.5;  // eV
    double oxide_thickness = 1;  // nm
    double oxide_eps_r = 3.9;
    bool operator==(const Gate &) const = default;

    // eps_ox / t_ox in units of eps0 / nm
    double capacitance() const { return oxide_eps_r / oxide_thickness; }
};

// Declarative device. Ohmic contacts sit on x = 0 (source) and x = length (drain).
struct DeviceSpec {
    double length = 0;     // Lx, nm
    double thickness = 0;  // Ly, nm
    double width = 1000;   // Lz, nm; only used to convert per-width quantities
    double temperature = 300;
    std::string reference_material;  // vacuum-level reference for the affinity rule
    double source_voltage = 0;       // V

    std::vector<MaterialParams> materials;  // only those referenced by regions
    std::vector<Region> regions;            // first listed wins on shared boundaries
    std::vector<Gate> gates;

    bool operator==(const DeviceSpec &) const = default;

    const MaterialParams & material(const std::string & name) const;
    int material_index(const std::string & name) const;
    double thermal_energy() const;
};

// Checks every invariant of DeviceSpec; throws ConfigError on the first violation.
void validate(const DeviceSpec & spec);

// Uniform mesh with spacing <= target on each axis whose node lines include every
// region boundary and gate edge. Mesh2D::adjustment reports any snapping.
Mesh2D build_mesh(const DeviceSpec & spec, double target_spacing);

// Smallest section count n with length / n <= target and every boundary on a node line.
int aligned_section_count(double length, double target, const std::vector<double> & boundaries);

struct SampledFields {
    FieldMap net_doping;             // cm^-3
    FieldMap permittivity;           // relative
    std::vector<int> material_index; // into DeviceSpec::materials
    std::vector<int> region_index;   // into DeviceSpec::regions
};

// Piecewise-constant doping and permittivity; full ionization.
SampledFields sample_fields(const DeviceSpec & spec, const Mesh2D & mesh);

// Per-node material constants used by the band and transport modules.
struct NodeMaterials {
    std::vector<double> bandgap, electron_mass, hole_mass, affinity;
    // Ec = ec_offset - V (eV, V in volts) from the affinity rule with midgap reference
    std::vector<double> ec_offset;
};

NodeMaterials node_materials(const DeviceSpec & spec, const SampledFields & fields);

// Midgap-referenced offset of the reference material: chi_ref + Eg_ref / 2.
double vacuum_reference(const DeviceSpec & spec);

} // namespace tfet
