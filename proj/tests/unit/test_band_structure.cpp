#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "tfet/band_structure.hpp"
#include "tfet/errors.hpp"
#include "tfet/scenarios.hpp"
#include "tfet/units.hpp"

using namespace tfet;

namespace {
constexpr double C = units::hbar2_over_2m0;
constexpr double mc = 0.26, mv = 0.386;

MaterialParams silicon() {
    MaterialParams m;
    m.name = "Si";
    m.bandgap = 1.12;
    m.electron_mass = mc;
    m.hole_mass = mv;
    m.eps_r = 11.9;
    m.affinity = 4.05;
    return m;
}

// Ec ramps linearly from 0.8 to -0.6 eV across 12 columns, Eg = 1.12
BandEdges ramp(const Mesh2D & m) {
    BandEdges b{FieldMap(m, Quantity::conduction_band), FieldMap(m, Quantity::valence_band)};
    for (int i = 0; i <= m.nx; ++i)
        for (int j = 0; j <= m.ny; ++j) {
            b.ec(i, j) = 0.8 - 1.4 * i / m.nx;
            b.ev(i, j) = b.ec(i, j) - 1.12;
        }
    return b;
}
} // namespace

TEST_CASE("sub-bands at zero kz are the band edges") {
    Mesh2D m = testing::mesh(12, 3, 1.0);
    BandEdges b = ramp(m);
    Subbands s = subbands(b, 0.0, uniform_materials(m, silicon()));
    CHECK(s.ec_sub.values == b.ec.values);
    CHECK(s.ev_sub.values == b.ev.values);
}

TEST_CASE("sub-band gap widens by C kz^2 (1/mc + 1/mv)") {
    Mesh2D m = testing::mesh(12, 3, 1.0);
    BandEdges b = ramp(m);
    auto nm = uniform_materials(m, silicon());
    const double kz = 0.7;
    Subbands s = subbands(b, kz, nm);
    for (std::size_t p = 0; p < m.size(); ++p) {
        double widen = (s.ec_sub[p] - s.ev_sub[p]) - (b.ec[p] - b.ev[p]);
        CHECK(widen == doctest::Approx(C * kz * kz * (1 / mc + 1 / mv)).epsilon(1e-12));
        CHECK(s.ec_sub[p] > b.ec[p]);
        CHECK(s.ev_sub[p] < b.ev[p]);
    }
    CHECK_THROWS_AS(subbands(b, -0.1, nm), NumericalError);
}

TEST_CASE("two-band k^2 is half of equal terms") {
    // pick E where mc (Ec - E) = mv (E - Ev)
    double ec = 0.5, ev = -0.6;
    double e = (mc * ec + mv * ev) / (mc + mv);
    double kc2 = mc * (e - ec) / C;
    CHECK(two_band_kxy_sq(e, ec, ev, mc, mv) == doctest::Approx(kc2 / 2).epsilon(1e-12));
}

TEST_CASE("two-band k^2 is electron-like near the conduction edge") {
    double ec = 0.5, ev = -0.6;
    for (double d : {1e-3, 1e-5, 1e-7}) {
        double e = ec - d;
        double kc2 = mc * (e - ec) / C;
        double ratio = two_band_kxy_sq(e, ec, ev, mc, mv) / kc2;
        CHECK(std::abs(ratio - 1) < 2 * d * mc / (mv * (e - ev)));
    }
}

TEST_CASE("two-band k^2 grows with kz at fixed E") {
    Mesh2D m = testing::mesh(0, 0, 1.0);
    m.nx = 1;
    auto nm = uniform_materials(m, silicon());
    BandEdges b{FieldMap(m, Quantity::conduction_band, 0.5), FieldMap(m, Quantity::valence_band, -0.62)};
    double last = 0;
    for (double kz : {0.0, 0.2, 0.4, 0.8}) {
        Subbands s = subbands(b, kz, nm);
        double k2 = std::abs(two_band_kxy_sq(0.0, s.ec_sub[0], s.ev_sub[0], mc, mv));
        CHECK(k2 > last);
        last = k2;
    }
}

TEST_CASE("two-band k^2 outside the gap is a contract violation") {
    CHECK_THROWS_AS(two_band_kxy_sq(0.6, 0.5, -0.6, mc, mv), NumericalError);
    CHECK_THROWS_AS(two_band_kxy_sq(-0.6, 0.5, -0.6, mc, mv), NumericalError);
}

TEST_CASE("harmonic-mean bound inside the gap") {
    double ec = 0.5, ev = -0.6;
    for (int k = 1; k < 100; ++k) {
        double e = ev + (ec - ev) * k / 100.0;
        double kc2 = std::abs(mc * (e - ec) / C), kv2 = std::abs(mv * (ev - e) / C);
        CHECK(std::abs(two_band_kxy_sq(e, ec, ev, mc, mv)) <= std::min(kc2, kv2) * (1 + 1e-12));
    }
}

TEST_CASE("tunnelling mass spline end points and midpoint") {
    double ec = 0.5, ev = -0.6;
    CHECK(tunneling_mass(ev, ec, ev, mc, mv) == doctest::Approx(mv));
    CHECK(tunneling_mass(ec, ec, ev, mc, mv) == doctest::Approx(mc));
    CHECK(tunneling_mass(0.5 * (ec + ev), ec, ev, mc, mv) == doctest::Approx(0.5 * (mc + mv)));
}

TEST_CASE("tunnelling mass is C1 at both gap edges") {
    double ec = 0.5, ev = -0.6, h = 1e-7;
    double left = (tunneling_mass(ev + h, ec, ev, mc, mv) - tunneling_mass(ev, ec, ev, mc, mv)) / h;
    double right = (tunneling_mass(ec, ec, ev, mc, mv) - tunneling_mass(ec - h, ec, ev, mc, mv)) / h;
    CHECK(std::abs(left) < 1e-6);
    CHECK(std::abs(right) < 1e-6);
}

TEST_CASE("degenerate gap short-circuits the fraction") {
    CHECK(gap_fraction(0.1, 0.1 + 1e-12, 0.1) == 0.5);
}

TEST_CASE("effective potential branches") {
    Mesh2D m = testing::mesh(12, 2, 1.0);
    auto nm = uniform_materials(m, silicon());
    Subbands s = subbands(ramp(m), 0.0, nm);
    const double e = -0.45;
    EffectiveFields f = effective_fields(e, s, nm);
    bool saw[3] = {false, false, false};
    for (std::size_t p = 0; p < m.size(); ++p) {
        double ec = s.ec_sub[p], ev = s.ev_sub[p];
        switch (f.region[p]) {
        case BandRegion::valence:
            saw[0] = true;
            CHECK(f.u[p] == doctest::Approx(2 * e - ev));
            CHECK(f.u[p] - e == doctest::Approx(e - ev));
            CHECK(f.mass[p] == mv);
            break;
        case BandRegion::gap:
            saw[1] = true;
            CHECK(f.u[p] > e);
            break;
        case BandRegion::conduction:
            saw[2] = true;
            CHECK(f.u[p] == ec);
            CHECK(f.mass[p] == mc);
            break;
        }
        CHECK(f.mass[p] >= std::min(mc, mv));
        CHECK(f.mass[p] <= std::max(mc, mv));
    }
    CHECK(saw[0]);
    CHECK(saw[1]);
    CHECK(saw[2]);
}

TEST_CASE("effective potential is continuous across region edges") {
    const double ec = 0.5, ev = -0.6;
    auto gap_u = [&](double e) {
        return e - C * two_band_kxy_sq(e, ec, ev, mc, mv) / tunneling_mass(e, ec, ev, mc, mv);
    };
    // valence branch at E = Ev is Ev; conduction branch at E = Ec is Ec
    CHECK(std::abs(gap_u(ev + 1e-12) - (2 * (ev + 1e-12) - ev)) < 1e-10);
    CHECK(std::abs(gap_u(ec - 1e-12) - ec) < 1e-10);
}

TEST_CASE("barrier height never drops as kz grows") {
    Mesh2D m = testing::mesh(12, 2, 1.0);
    auto nm = uniform_materials(m, silicon());
    BandEdges b = ramp(m);
    double last = -1e9;
    for (double kz : {0.0, 0.1, 0.3, 0.5, 0.9}) {
        EffectiveFields f = effective_fields(0.0, subbands(b, kz, nm), nm);
        double top = f.u.max();
        CHECK(top >= last - 1e-12);
        last = top;
    }
}

TEST_CASE("tunnel window limits") {
    Mesh2D m = testing::mesh(12, 2, 1.0);
    auto nm = uniform_materials(m, silicon());
    TunnelWindow w = tunnel_window(subbands(ramp(m), 0.0, nm), nm);
    CHECK(w.e_min == doctest::Approx(-0.6));
    CHECK(w.e_max == doctest::Approx(0.8 - 1.12));
    CHECK_FALSE(w.empty());
    CHECK(w.reduced_mass == doctest::Approx(mc * mv / (mc + mv)));
    CHECK(C * w.kz_max * w.kz_max / w.reduced_mass == doctest::Approx(w.e_max - w.e_min));
    // the window closes exactly at kz_max
    CHECK(w.e_min_at(w.kz_max) == doctest::Approx(w.e_max_at(w.kz_max)));
}

TEST_CASE("tunnel window degenerate and empty cases") {
    Mesh2D m = testing::mesh(1, 0, 1.0);
    MaterialParams sym = silicon();
    sym.hole_mass = sym.electron_mass;
    auto nm = uniform_materials(m, sym);
    BandEdges touch{FieldMap(m, Quantity::conduction_band), FieldMap(m, Quantity::valence_band)};
    touch.ec(0, 0) = 1.12;
    touch.ev(0, 0) = 0.0;
    touch.ec(1, 0) = 0.0;
    touch.ev(1, 0) = -1.12;
    TunnelWindow w = tunnel_window(subbands(touch, 0.0, nm), nm);
    CHECK(w.kz_max == 0.0);
    CHECK(w.empty());
    CHECK(w.reduced_mass == doctest::Approx(sym.electron_mass / 2));

    touch.ec(1, 0) = 0.2;
    touch.ev(1, 0) = -0.92;
    TunnelWindow off = tunnel_window(subbands(touch, 0.0, nm), nm);
    CHECK(off.empty());
    CHECK(off.kz_max == 0.0);
}
