#include <doctest.h>

#include <cmath>
#include <initializer_list>

#ifdef TFET_HAVE_GSL
#include <gsl/gsl_sf_fermi_dirac.h>
#endif

#include "tfet/fermi.hpp"
#include "tfet/units.hpp"

using namespace tfet;

TEST_CASE("Fermi function basics") {
    const double kt = 0.025852;
    CHECK(fermi(0.1, 0.1, kt) == 0.5);
    CHECK(fermi(0.0, 0.1, kt) + fermi(0.0, -0.1, kt) == doctest::Approx(1.0).epsilon(1e-15));
    // far tails saturate without overflow
    CHECK(fermi(0.0, 100.0, kt) == 0.0);
    CHECK(fermi(0.0, -100.0, kt) == 1.0);
    CHECK(fermi(0.0, 0.5, kt) == doctest::Approx(std::exp(-0.5 / kt)).epsilon(1e-6));
}

TEST_CASE("F_{-1/2} table agrees with direct quadrature") {
    for (double x = -45.0; x <= 95.0; x += 1.37) {
        CHECK(fd_half_neg(x) == doctest::Approx(fd_half_neg_quadrature(x)).epsilon(1e-7));
    }
}

TEST_CASE("Fermi integrals in their limits") {
    // non-degenerate: F_j(x) -> e^x
    for (double x : {-40.0, -25.0, -15.0}) {
        CHECK(fd_half_neg(x) == doctest::Approx(std::exp(x)).epsilon(1e-6));
        CHECK(fd_half(x) == doctest::Approx(std::exp(x)).epsilon(1e-6));
    }
    // degenerate: F_j(x) -> x^{j+1} / Gamma(j+2), with Sommerfeld correction
    const double x = 200.0;
    double f_neg = 2 * std::sqrt(x / units::pi) * (1 - units::pi * units::pi / (24 * x * x));
    CHECK(fd_half_neg(x) == doctest::Approx(f_neg).epsilon(1e-6));
    double f_half = 4 / (3 * std::sqrt(units::pi)) * std::pow(x, 1.5) * (1 + units::pi * units::pi / (8 * x * x));
    CHECK(fd_half(x) == doctest::Approx(f_half).epsilon(1e-6));
}

TEST_CASE("dF_{1/2}/dx equals F_{-1/2}") {
    for (double x : {-10.0, -2.0, 0.0, 1.5, 7.0, 30.0}) {
        double h = 1e-4;
        double d = (fd_half(x + h) - fd_half(x - h)) / (2 * h);
        CHECK(d == doctest::Approx(fd_half_neg(x)).epsilon(1e-6));
    }
}

#ifdef TFET_HAVE_GSL
TEST_CASE("Fermi integrals match an independent library") {
    for (double x = -30.0; x <= 90.0; x += 0.73) {
        CHECK(fd_half_neg(x) == doctest::Approx(gsl_sf_fermi_dirac_mhalf(x)).epsilon(1e-8));
        CHECK(fd_half(x) == doctest::Approx(gsl_sf_fermi_dirac_half(x)).epsilon(1e-8));
    }
}
#endif

TEST_CASE("effective density of states") {
    const double kt = units::thermal_energy(300.0);
    // m = 1.08 gives the textbook silicon Nc of about 2.8e19 cm^-3
    CHECK(effective_dos(1.08, kt) * units::per_nm3_to_per_cm3 == doctest::Approx(2.8e19).epsilon(0.02));
    // Nc scales as m^{3/2}
    CHECK(effective_dos(0.4, kt) / effective_dos(0.1, kt) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(bulk_density(0.3, kt, -20.0) == doctest::Approx(effective_dos(0.3, kt) * std::exp(-20.0)).epsilon(1e-6));
}

TEST_CASE("transverse occupancy prefactor") {
    const double kt = 0.0259, m = 0.26;
    double hb = units::hbar2_over_2m0 * 2;  // hbar^2 / m0 in eV nm^2
    double pref = std::sqrt(m * kt / (2 * units::pi * hb));
    CHECK(transverse_occupancy(m, kt, 0.3) == doctest::Approx(pref * fd_half_neg(0.3)).epsilon(1e-12));
    // at deep non-degeneracy it is the classical 1D density sqrt(m kT / 2 pi hbar^2) e^x
    CHECK(transverse_occupancy(m, kt, -30) == doctest::Approx(pref * std::exp(-30.0)).epsilon(1e-6));
}
