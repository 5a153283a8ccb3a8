#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tfet/hamiltonian.hpp"

namespace tfet {

using cplx = std::complex<double>;

enum class Lead { source, drain };

// Energy-independent part of a lead: the transverse eigenproblem of its column
// block H_1D = Q diag(eps) Q^T (eps ascending) and the uniform hopping t.
struct LeadModes {
    Eigen::MatrixXd q;
    Eigen::VectorXd eps;
    double t = 0;
};

// Throws NumericalError if the column is not symmetric or the hopping is not uniform.
LeadModes lead_modes(const Eigen::MatrixXd & column, const Eigen::VectorXd & coupling);
LeadModes lead_modes(const DeviceHamiltonian & h, Lead lead);

struct LeadSelfEnergy {
    Lead lead = Lead::source;
    double t = 0;
    Eigen::MatrixXd q;       // transverse basis
    Eigen::VectorXcd x;      // E + i eta - eps_m
    Eigen::VectorXcd g;      // surface Green's function per mode
    Eigen::MatrixXcd sigma;  // t^2 Q diag(g) Q^T

    // max over modes of |-t^2 g^2 + x g - 1|
    double residual() const;
    // Broadening weight per mode, -2 t^2 Im g >= 0.
    Eigen::VectorXd mode_broadening() const;
    // Y with Gamma = Y Y^H; column m belongs to mode m (ascending transverse energy).
    Eigen::MatrixXcd gamma_factor() const;
};

LeadSelfEnergy lead_self_energy(const LeadModes & modes, double e, double eta, Lead lead);
LeadSelfEnergy lead_self_energy(const Eigen::MatrixXd & column, double t, double e, double eta, Lead lead);

// Surface root of t^2 g^2 - x g + 1 = 0 for the retarded lead.
cplx surface_g(cplx x, double t);

// Gamma = i (Sigma - Sigma^H).
Eigen::MatrixXcd broadening(const Eigen::MatrixXcd & sigma);

enum class SolverMode { recursive, dense };

struct GreensRequest {
    bool first_column = true;  // G_{i,0}: source-injected states, D1
    bool last_column = true;   // G_{i,N}: drain-injected states, D2, transmission
    bool diagonal = false;     // G_{i,i}
};

// Column blocks of G = [(E + i eta) - H - Sigma_1 - Sigma_2]^-1 over the x-columns of the mesh.
struct GreensFunction {
    Mesh2D mesh;
    double e = 0, eta = 0;
    std::vector<Eigen::MatrixXcd> first, last, diag;

    bool finite() const;
};

GreensFunction greens_function(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2,
                               double e, double eta, SolverMode mode = SolverMode::recursive,
                               const GreensRequest & request = {});

// max |M G - I| over the probed (first and last) block columns.
double greens_residual(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2,
                       const GreensFunction & g);

// Tr[Gamma1 G Gamma2 G^H] from G_{0,N}.
double transmission(const GreensFunction & g, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2);
// Tr[Gamma2 G Gamma1 G^H] from G_{N,0}; equals transmission() by reciprocity.
double transmission_reverse(const GreensFunction & g, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2);

// Lead-resolved LDOS D_a[p] = (G Gamma_a G^H)_pp / (pi a_x a_y), 1/(eV nm^2).
struct Ldos {
    Eigen::VectorXd d1, d2;
};
Ldos spectral_and_ldos(const GreensFunction & g, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2);
// i (G - G^H)_pp / (pi a_x a_y); needs request.diagonal.
Eigen::VectorXd total_ldos(const GreensFunction & g);

// Low-rank path: solve M Ytilde = Y_r on the r lowest-energy source modes with one sparse LU.
struct TruncatedResult {
    int modes = 0;
    double transmission = 0;
    Eigen::VectorXd d1;
};
TruncatedResult truncated_spectral(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2,
                                   double e, double eta, int r);

// One (E, k_z) evaluation.
struct NegfSlice {
    double e = 0, kz = 0;
    double transmission = 0;
    Eigen::VectorXd d1, d2;
    bool retried = false;       // re-evaluated at E + delta after a singular solve
    double lead_residual = 0;   // worst surface-equation residual of both leads
};

struct SliceOptions {
    double eta = 1e-6;
    SolverMode mode = SolverMode::recursive;
    bool ldos = true;
    bool transmission = true;
    double retry_shift = 1e-6;  // eV
};

// Computes one slice for a Hamiltonian built by `make(E)`. Leads use the
// boundary columns of that Hamiltonian unless fixed modes are passed in.
template <typename MakeH>
NegfSlice compute_slice(double e, double kz, MakeH && make, const SliceOptions & opt,
                        const LeadModes * left = nullptr, const LeadModes * right = nullptr);

NegfSlice compute_slice_at(const DeviceHamiltonian & h, double e, double kz, const SliceOptions & opt,
                           const LeadModes * left = nullptr, const LeadModes * right = nullptr);

template <typename MakeH>
NegfSlice compute_slice(double e, double kz, MakeH && make, const SliceOptions & opt, const LeadModes * left,
                        const LeadModes * right) {
    NegfSlice s = compute_slice_at(make(e), e, kz, opt, left, right);
    bool ok = std::isfinite(s.transmission) && s.d1.allFinite() && s.d2.allFinite();
    if (ok) return s;
    double shifted = e + opt.retry_shift;
    s = compute_slice_at(make(shifted), shifted, kz, opt, left, right);
    s.e = e;
    s.retried = true;
    return s;
}

} // namespace tfet
