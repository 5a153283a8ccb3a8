#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfet/device.hpp"
#include "tfet/field.hpp"

namespace tfet {

// Per-node boundary data. Nodes that are neither Dirichlet nor carry a Robin
// term get the natural zero-flux condition on any boundary face they own.
struct PoissonBC {
    Mesh2D mesh;
    std::vector<char> dirichlet;          // 1 = value fixed
    std::vector<double> dirichlet_value;  // V
    // Robin contribution sum_faces c * len * (V - Vg): c = eps_ox/t_ox (eps0/nm), len in nm
    std::vector<double> robin_coeff;      // eps0
    std::vector<double> robin_source;     // eps0 V, i.e. sum c * len * Vg

    explicit PoissonBC(const Mesh2D & m = {});

    void set_dirichlet(int i, int j, double v);
    void add_robin(int i, int j, double coeff_len, double gate_potential);
    bool anchored() const;
};

// Gate bias and contact voltages for one operating point.
struct Bias {
    double vg = 0;  // applied to every gate
    double vd = 0;  // drain, relative to ground
    double vs = 0;  // source
};

// Effective gate potential V_G - (Phi_m - chi_ref - Eg_ref/2) in the midgap-referenced potential.
double gate_effective_potential(const DeviceSpec & spec, const Gate & gate, double vg);

// Potential of a flat-band neutral contact with net doping N (cm^-3) and Fermi level -v_contact.
double neutral_contact_potential(double net_doping_cm3, double v_contact, double bandgap, double ec_offset,
                                 double electron_mass, double hole_mass, double kt);

// Dirichlet columns at x = 0 and x = Lx from contact neutrality, Robin on gated faces.
PoissonBC device_bc(const DeviceSpec & spec, const Mesh2D & mesh, const SampledFields & fields,
                    const NodeMaterials & mats, const Bias & bias);

// rho = q (p - n + N), returned in C cm^-3. Densities in cm^-3.
FieldMap assemble_charge(const FieldMap & n, const FieldMap & p, const FieldMap & doping);

// Finite-volume 5-point operator with harmonic-mean face permittivity.
// Solves -div(eps_r grad V) = rho / eps0 plus an optional linear response term
// response[p] * (V[p] - reference[p]) on the left (units of V / nm^2 per V).
class PoissonSolver {
public:
    PoissonSolver(const FieldMap & eps, PoissonBC bc, double rel_tolerance = 1e-10);

    FieldMap solve(const FieldMap & rho) const;
    FieldMap solve(const FieldMap & rho, const std::vector<double> & response, const FieldMap & reference) const;

    const PoissonBC & bc() const { return bc_; }
    // Relative residual of the last solve.
    double last_residual() const { return last_residual_; }

private:
    FieldMap eps_;
    PoissonBC bc_;
    double tolerance_;
    mutable double last_residual_ = 0;
};

FieldMap solve_poisson(const FieldMap & rho, const FieldMap & eps, const PoissonBC & bc, double rel_tolerance = 1e-10);

struct BandEdges {
    FieldMap ec, ev;
};

// Ec = ec_offset - V, Ev = Ec - Eg.
BandEdges bands_from_potential(const FieldMap & v, const NodeMaterials & mats);

} // namespace tfet
