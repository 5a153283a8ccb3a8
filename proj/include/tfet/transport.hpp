#pragma once

#include <string>
#include <vector>

#include "tfet/band_structure.hpp"
#include "tfet/carriers.hpp"
#include "tfet/config.hpp"
#include "tfet/negf.hpp"

namespace tfet {

enum class CurrentStatus { ok, no_overlap, equal_fermi_levels };
const char * to_string(CurrentStatus s);

struct TransmissionSample {
    double kz = 0, e = 0, t = 0;
};

struct CurrentResult {
    double current = 0;                // I / Lz in A/nm
    CurrentStatus status = CurrentStatus::ok;
    TunnelWindow window;
    std::vector<double> kz, kz_weight; // Gauss-Legendre nodes on [0, kz_max]
    std::vector<double> partial;       // dI/dkz per node, A
    std::vector<TransmissionSample> samples;
    int retried = 0;
    double lead_residual = 0;
    bool refined = false;              // grid-refinement check ran
    double refinement_change = 0;      // relative change under refinement
    bool refinement_ok = true;
};

struct CurrentOptions {
    TransmissionEngine engine = TransmissionEngine::negf;
    int kz_points = 8;
    double energy_step_kt = 0.2;  // E spacing = min(step kT, window / 200)
    double eta = 1e-6;
    double tail = 30.0;           // E range clipped to [min mu - tail kT, max mu + tail kT]
    bool keep_samples = false;
    bool refinement_check = false;
    int threads = 0;
};

CurrentOptions current_options(const SolverSettings & s, int threads = 0);

// I/Lz = q^2 / (pi^2 hbar) * int int T(E, kz) [f(mu1, E) - f(mu2, E)] dE dkz
// over the overlap window, with per-(E, kz) effective fields.
CurrentResult integrate_current(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels,
                                double kt, const CurrentOptions & opt);

// NEGF transmission of one (E, kz) slice from the two-band effective fields.
struct SliceTransmission {
    double t = 0;
    double lead_residual = 0;
    bool retried = false;
};
SliceTransmission negf_transmission(const Subbands & sub, const NodeMaterials & mats, double e, double eta);

// WKB along straight x paths on each row.
struct WkbResult {
    std::vector<double> row;  // exp(-2 int kappa dx) per row; 1 when nothing is forbidden
    double row_sum = 0;       // sum over rows
    double row_mean = 0;
};

WkbResult wkb_transmission(const FieldMap & u, const FieldMap & mass, double e);

// Channel-counted WKB: (W / pi) int_0^inf <T_row(E, k)>_rows dky with W = (Ny + 2) a_y,
// the hard-wall width seen by the lattice, and k^2 = kz^2 + ky^2 entering the
// sub-bands. Comparable with the NEGF trace at the same kz.
double wkb_channel_transmission(const BandEdges & bands, const NodeMaterials & mats, double e, double kz);

// Bands with the lowest transverse bound state of each column folded in:
// Ec -> lowest eigenvalue of T_y(m_c) + Ec(x, .), Ev -> highest of -T_y(m_v) + Ev(x, .).
// Returned uniform in y.
BandEdges confined_bands(const BandEdges & bands, const NodeMaterials & mats);

// Kane local generation G = A F^gamma / sqrt(Eg) exp(-B Eg^1.5 / F), F = |grad V| in V/cm.
FieldMap electric_field(const FieldMap & v);
FieldMap kane_generation(const FieldMap & field, const std::vector<double> & bandgap, const KaneParams & k);

// Subthreshold swing between consecutive points, mV/decade; NaN where undefined.
std::vector<double> subthreshold_swing(const std::vector<double> & vg, const std::vector<double> & current);

} // namespace tfet
