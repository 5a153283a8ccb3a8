#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfet/band_structure.hpp"
#include "tfet/config.hpp"
#include "tfet/negf.hpp"

namespace tfet {

struct FermiLevels {
    double mu1 = 0;  // source, eV
    double mu2 = 0;  // drain, eV
};

// Electron energies of the contacts: mu = -V_contact.
FermiLevels fermi_levels(double vs, double vd);

// Quadrature nodes over [lo, hi]. Each interval between breakpoints uses
// E = a + (b - a)(1 - cos th)/2 with midpoint nodes in th, so 1/sqrt
// singularities at lead band edges integrate cleanly and are never sampled.
struct EnergyGrid {
    std::vector<double> energy;
    std::vector<double> weight;
    std::size_t size() const { return energy.size(); }
};

EnergyGrid make_energy_grid(double lo, double hi, std::vector<double> breakpoints, double max_step);
// Plain trapezoid with uniform spacing <= step.
EnergyGrid uniform_grid(double lo, double hi, double step);

enum class CarrierKind { electron, hole };

// Single-band problem for one carrier kind in its own energy picture:
// electrons H = T(m_c) + Ec at E; holes H = T(m_v) - Ev at hole energy -E,
// with Fermi levels negated.
struct CarrierProblem {
    CarrierKind kind = CarrierKind::electron;
    FieldMap u, mass;
    FermiLevels levels;
};

CarrierProblem carrier_problem(CarrierKind kind, const BandEdges & bands, const NodeMaterials & mats,
                               const FermiLevels & levels);

// LDOS of both leads on an energy grid (k_z -> infinity limit: the other band is absent).
struct LdosSpectrum {
    EnergyGrid grid;
    std::vector<Eigen::VectorXd> d1, d2;  // per grid energy, per node, 1/(eV nm^2)
    int retried = 0;
};

struct SpectrumOptions {
    double eta = 1e-6;
    double step = 0.005;        // eV, largest grid spacing
    double tail = 20.0;         // grid runs to max(mu) + tail kT
    SolverMode mode = SolverMode::recursive;
    int threads = 0;
};

LdosSpectrum carrier_spectrum(const CarrierProblem & problem, double kt, const SpectrumOptions & opt);

// n (or p in the hole picture) in cm^-3 from the transverse-integrated occupancy.
// both_leads: D1 f(mu1) + D2 f(mu2); single_lead: electrons use D2 with mu2, holes D1 with mu1.
FieldMap density_from_spectrum(const LdosSpectrum & spectrum, const CarrierProblem & problem, double kt,
                               LeadPolicy policy);

FieldMap electron_density(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels, double kt,
                          LeadPolicy policy, const SpectrumOptions & opt);
FieldMap hole_density(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels, double kt,
                      LeadPolicy policy, const SpectrumOptions & opt);

// Direct (E, k_z) quadrature of the two-lead densities using the piecewise
// effective fields at each (E, k_z). Electrons are counted above the local
// sub-band midgap, holes below it. Slow; meant for small meshes.
struct OracleOptions {
    double eta = 1e-6;
    double step = 0.004;
    int kz_points = 24;
    double tail = 30.0;  // kT beyond the Fermi levels
    int threads = 0;
};

struct DensityPair {
    FieldMap n, p;  // cm^-3
};

DensityPair full_density_oracle(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels,
                                double kt, const OracleOptions & opt);

// Pocket filling along a 1D profile: every interior point below both of its
// enclosing maxima is raised to the lower of the two. Endpoints are never raised.
struct Pocket {
    int begin = 0, end = 0;  // inclusive node range
    double depth = 0;        // eV
};

struct PocketFill {
    std::vector<double> profile;
    std::vector<Pocket> pockets;
};

PocketFill fill_pockets(const std::vector<double> & profile);

// Applies the 1D fill to the y-minimum of Ec (and y-maximum of Ev) per column,
// shifting whole columns so untouched columns keep their exact values.
struct BandPockets {
    BandEdges bands;
    std::vector<Pocket> conduction, valence;
};
BandPockets remove_pockets(const BandEdges & bands);

// Closed-boundary densities: leads extended by `extension` nm with hard walls,
// eigenstates occupied from the contact holding most of their weight.
struct ClosedOptions {
    double extension = 10.0;
    double tail = 20.0;
    int threads = 0;
};

struct ClosedResult {
    FieldMap density;
    int states = 0;
    std::vector<std::string> warnings;
};

ClosedResult closed_boundary_density(const CarrierProblem & problem, double kt, const ClosedOptions & opt);

// Densities from the configured backend.
struct CarrierSettings {
    CarrierBackend backend = CarrierBackend::closed_boundary;
    LeadPolicy policy = LeadPolicy::both_leads;
    SpectrumOptions spectrum;
    ClosedOptions closed;
};

struct CarrierDensities {
    FieldMap n, p;
    std::vector<std::string> warnings;
};

CarrierDensities compute_carriers(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels,
                                  double kt, const CarrierSettings & settings);

} // namespace tfet
