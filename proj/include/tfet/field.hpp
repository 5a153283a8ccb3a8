#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tfet {

// Uniform rectangular tensor mesh over [0, lx] x [0, ly].
// Node (i, j), i = 0..nx, j = 0..ny, is stored at flat index i * (ny + 1) + j
// (y index fastest), which is also the Hamiltonian row ordering.
struct Mesh2D {
    int nx = 0;     // sections along x
    int ny = 0;     // sections along y
    double ax = 0;  // nm
    double ay = 0;  // nm
    std::string adjustment;  // non-empty when the requested spacing had to be changed

    int nodes_x() const { return nx + 1; }
    int nodes_y() const { return ny + 1; }
    std::size_t size() const { return static_cast<std::size_t>(nodes_x()) * nodes_y(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nodes_y() + j; }
    double x(int i) const { return i * ax; }
    double y(int j) const { return j * ay; }
    double lx() const { return nx * ax; }
    double ly() const { return ny * ay; }

    bool same_grid(const Mesh2D & o) const { return nx == o.nx && ny == o.ny && ax == o.ax && ay == o.ay; }
};

enum class Quantity {
    potential,        // V
    conduction_band,  // eV
    valence_band,     // eV
    electron_density, // cm^-3
    hole_density,     // cm^-3
    charge_density,   // C cm^-3
    net_doping,       // cm^-3, N_D - N_A
    permittivity,     // relative
    effective_potential, // eV
    effective_mass,   // m0
    generation_rate,  // cm^-3 s^-1
    electric_field,   // V/cm
    generic,
};

const char * quantity_name(Quantity q);
const char * quantity_unit(Quantity q);

// One real value per mesh node.
struct FieldMap {
    Mesh2D mesh;
    Quantity quantity = Quantity::generic;
    std::vector<double> values;

    FieldMap() = default;
    FieldMap(const Mesh2D & m, Quantity q, double fill = 0.0) : mesh(m), quantity(q), values(m.size(), fill) {}
    FieldMap(const Mesh2D & m, Quantity q, std::vector<double> v);

    double & operator()(int i, int j) { return values[mesh.index(i, j)]; }
    double operator()(int i, int j) const { return values[mesh.index(i, j)]; }
    double & operator[](std::size_t p) { return values[p]; }
    double operator[](std::size_t p) const { return values[p]; }
    std::size_t size() const { return values.size(); }
    std::span<const double> view() const { return values; }

    double min() const;
    double max() const;
    bool all_finite() const;
};

// Throws NumericalError unless both fields live on the same grid.
void require_same_mesh(const FieldMap & a, const FieldMap & b, const char * context);

} // namespace tfet
