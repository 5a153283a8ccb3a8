#include "tfet/band_structure.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/units.hpp"

namespace tfet {

namespace {
constexpr double C = units::hbar2_over_2m0;
}

Subbands subbands(const BandEdges & bands, double kz, const NodeMaterials & mats) {
    if (kz < 0) throw NumericalError("subbands: k_z must be non-negative");
    Subbands out{kz, bands.ec, bands.ev};
    double k2 = C * kz * kz;
    for (std::size_t p = 0; p < out.ec_sub.size(); ++p) {
        out.ec_sub[p] += k2 / mats.electron_mass[p];
        out.ev_sub[p] -= k2 / mats.hole_mass[p];
    }
    return out;
}

double two_band_kxy_sq(double e, double ec_sub, double ev_sub, double mc, double mv) {
    if (!(e > ev_sub && e < ec_sub)) {
        throw NumericalError(fmt::format("two_band_kxy_sq: E = {} is outside the gap ({}, {})", e, ev_sub, ec_sub));
    }
    double kv2 = mv * (ev_sub - e) / C;
    double kc2 = mc * (e - ec_sub) / C;
    return kv2 * kc2 / (kv2 + kc2);
}

double gap_fraction(double e, double ec_sub, double ev_sub) {
    double width = ec_sub - ev_sub;
    if (width < 1e-9) return 0.5;
    return std::clamp((e - ev_sub) / width, 0.0, 1.0);
}

double tunneling_mass(double e, double ec_sub, double ev_sub, double mc, double mv) {
    double f = gap_fraction(e, ec_sub, ev_sub);
    return mv + (mc - mv) * f * f * (3.0 - 2.0 * f);
}

BandRegion classify(double e, double ec_sub, double ev_sub) {
    if (e <= ev_sub) return BandRegion::valence;
    if (e >= ec_sub) return BandRegion::conduction;
    return BandRegion::gap;
}

void effective_fields(double e, const Subbands & sub, const NodeMaterials & mats, EffectiveFields & out) {
    const auto & mesh = sub.ec_sub.mesh;
    if (out.u.size() != mesh.size()) {
        out.u = FieldMap(mesh, Quantity::effective_potential);
        out.mass = FieldMap(mesh, Quantity::effective_mass);
        out.region.assign(mesh.size(), BandRegion::gap);
    }
    for (std::size_t p = 0; p < mesh.size(); ++p) {
        double ec = sub.ec_sub[p], ev = sub.ev_sub[p];
        double mc = mats.electron_mass[p], mv = mats.hole_mass[p];
        auto region = classify(e, ec, ev);
        out.region[p] = region;
        switch (region) {
        case BandRegion::valence:
            out.u[p] = 2.0 * e - ev;
            out.mass[p] = mv;
            break;
        case BandRegion::conduction:
            out.u[p] = ec;
            out.mass[p] = mc;
            break;
        case BandRegion::gap: {
            double mt = tunneling_mass(e, ec, ev, mc, mv);
            out.u[p] = e - C * two_band_kxy_sq(e, ec, ev, mc, mv) / mt;
            out.mass[p] = mt;
            break;
        }
        }
    }
}

EffectiveFields effective_fields(double e, const Subbands & sub, const NodeMaterials & mats) {
    EffectiveFields out;
    effective_fields(e, sub, mats, out);
    return out;
}

double TunnelWindow::e_min_at(double kz) const { return e_min + C * kz * kz / mc; }
double TunnelWindow::e_max_at(double kz) const { return e_max - C * kz * kz / mv; }

TunnelWindow tunnel_window(const Subbands & k0, const NodeMaterials & mats) {
    const auto & ec = k0.ec_sub.values;
    const auto & ev = k0.ev_sub.values;
    auto pc = std::min_element(ec.begin(), ec.end()) - ec.begin();
    auto pv = std::max_element(ev.begin(), ev.end()) - ev.begin();
    TunnelWindow w;
    w.e_min = ec[pc];
    w.e_max = ev[pv];
    w.mc = mats.electron_mass[pc];
    w.mv = mats.hole_mass[pv];
    w.reduced_mass = w.mc * w.mv / (w.mc + w.mv);
    w.kz_max = w.empty() ? 0.0 : std::sqrt(w.reduced_mass * (w.e_max - w.e_min) / C);
    return w;
}

} // namespace tfet
