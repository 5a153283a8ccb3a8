#pragma once

#include <cstdint>
#include <vector>

#include "tfet/device.hpp"
#include "tfet/field.hpp"
#include "tfet/poisson.hpp"

namespace tfet {

// Band edges shifted by the transverse kinetic energy C k_z^2 / m, C = hbar^2 / 2m0.
struct Subbands {
    double kz = 0;  // 1/nm
    FieldMap ec_sub, ev_sub;
};

Subbands subbands(const BandEdges & bands, double kz, const NodeMaterials & mats);

// Squared in-plane wave vector of the two-band dispersion inside the gap:
// 1/k^2 = 1/k_v^2 + 1/k_c^2. Negative (evanescent). Requires ev_sub < e < ec_sub.
double two_band_kxy_sq(double e, double ec_sub, double ev_sub, double mc, double mv);

// Position of e inside the local gap; 0.5 when the gap is degenerate (< 1e-9 eV).
double gap_fraction(double e, double ec_sub, double ev_sub);

// C^1 cubic interpolation between the hole mass at Ev_sub and the electron mass at Ec_sub.
double tunneling_mass(double e, double ec_sub, double ev_sub, double mc, double mv);

enum class BandRegion : std::uint8_t { valence, gap, conduction };

// e <= Ev_sub is valence, e >= Ec_sub conduction, strictly between is gap.
BandRegion classify(double e, double ec_sub, double ev_sub);

struct EffectiveFields {
    FieldMap u;     // eV
    FieldMap mass;  // m0
    std::vector<BandRegion> region;
};

// Piecewise effective potential and mass seen by an electron at energy e:
// valence 2E - Ev_sub with m_v, gap E - C k_xy^2 / m_t with m_t, conduction Ec_sub with m_c.
EffectiveFields effective_fields(double e, const Subbands & sub, const NodeMaterials & mats);
void effective_fields(double e, const Subbands & sub, const NodeMaterials & mats, EffectiveFields & out);

// Energy window in which bands overlap, and the largest k_z for which it stays open.
struct TunnelWindow {
    double e_min = 0;         // min Ec_sub at k_z = 0
    double e_max = 0;         // max Ev_sub at k_z = 0
    double kz_max = 0;        // 1/nm
    double reduced_mass = 0;  // m0
    double mc = 0, mv = 0;    // masses at the extremal nodes

    bool empty() const { return !(e_max > e_min); }
    // Window at finite k_z; closes at kz_max.
    double e_min_at(double kz) const;
    double e_max_at(double kz) const;
};

TunnelWindow tunnel_window(const Subbands & k0, const NodeMaterials & mats);

} // namespace tfet
