#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tfet/config.hpp"
#include "tfet/errors.hpp"
#include "tfet/fermi.hpp"
#include "tfet/scf.hpp"
#include "tfet/units.hpp"

using namespace tfet;

namespace {

// short p-i-n strip with a single top gate
std::string pin_json(const std::string & extra = "") {
    return R"({
  "device": {"length_nm": 24, "thickness_nm": 4, "temperature_K": 300, "reference_material": "Si"},
  "regions": [
    {"name": "source", "x_nm": [0, 8], "material": "Si", "doping_cm3": -1e20},
    {"name": "channel", "x_nm": [8, 16], "material": "Si", "doping_cm3": 1e17},
    {"name": "drain", "x_nm": [16, 24], "material": "Si", "doping_cm3": 1e20}
  ],
  "gates": [{"name": "top", "side": "top", "x_nm": [8, 16], "work_function_eV": 4.5, "oxide_thickness_nm": 1.0}]
  )" + extra + "}";
}

double max_diff(const FieldMap & a, const FieldMap & b) {
    double d = 0;
    for (std::size_t p = 0; p < a.size(); ++p) d = std::max(d, std::abs(a[p] - b[p]));
    return d;
}

} // namespace

TEST_CASE("relaxation blends new and old") {
    Mesh2D m = testing::mesh(2, 1, 1.0);
    FieldMap a(m, Quantity::potential, 1.0), b(m, Quantity::potential, -1.0);
    CHECK(relax(a, b, 0.0).values == a.values);
    CHECK(relax(a, b, 0.75)[0] == doctest::Approx(0.25 * 1.0 + 0.75 * -1.0));
    CHECK_THROWS_AS(relax(a, FieldMap(testing::mesh(3, 1, 1.0), Quantity::potential), 0.5), NumericalError);
}

TEST_CASE("loop settings come from the solver section") {
    SolverSettings s;
    s.alpha = 0.4;
    s.anderson_depth = 3;
    s.tolerance = 2e-6;
    s.max_iterations = 17;
    s.backend = CarrierBackend::negf;
    s.extension = 12.0;
    LoopConfig c = loop_config(s, 2);
    CHECK(c.alpha == 0.4);
    CHECK(c.anderson_depth == 3);
    CHECK(c.tolerance == 2e-6);
    CHECK(c.max_iterations == 17);
    CHECK(c.carriers.backend == CarrierBackend::negf);
    CHECK(c.carriers.closed.extension == 12.0);
    CHECK(c.carriers.spectrum.threads == 2);
}

TEST_CASE("bad loop parameters are configuration errors") {
    auto model = build_model(load_device(pin_json()), 1.0);
    LoopConfig c;
    c.alpha = 1.0;
    CHECK_THROWS_AS(run_loop(model, {}, c), ConfigError);
    c.alpha = 0.5;
    c.tolerance = 0;
    CHECK_THROWS_AS(run_loop(model, {}, c), ConfigError);
}

TEST_CASE("initial guess honours the contacts and the gate") {
    auto model = build_model(load_device(pin_json()), 1.0);
    Bias lo{0.0, 0.2, 0.0}, hi{1.0, 0.2, 0.0};
    FieldMap a = initial_guess(model, lo), b = initial_guess(model, hi);
    PoissonBC bc = device_bc(model.spec, model.mesh, model.fields, model.mats, lo);
    for (std::size_t p = 0; p < model.mesh.size(); ++p)
        if (bc.dirichlet[p]) CHECK(a[p] == doctest::Approx(bc.dirichlet_value[p]).epsilon(1e-12));
    // more gate voltage raises the channel potential, the contacts stay put
    CHECK(b(12, 2) > a(12, 2));
    CHECK(b(0, 2) == a(0, 2));
}

TEST_CASE("charge-free device converges to the Laplace solution at once") {
    // a wide-gap undoped bar has no carriers at all
    std::string text = R"({
  "device": {"length_nm": 20, "thickness_nm": 4, "temperature_K": 300, "reference_material": "Si"},
  "regions": [{"name": "bar", "x_nm": [0, 20], "material": "Si", "doping_cm3": 0}],
  "gates": [{"name": "top", "side": "top", "x_nm": [5, 15], "work_function_eV": 4.5, "oxide_thickness_nm": 1.0}],
  "materials": {"Si": {"bandgap_eV": 6.0}}
})";
    auto model = build_model(load_device(text), 1.0);
    Bias bias{0.7, 0.3, 0.0};
    LoopConfig c;
    auto r = run_loop(model, bias, c);
    CHECK(r.trace.status == LoopStatus::converged);
    CHECK(r.trace.iterations() <= 3);
    CHECK(r.n.max() < 1e-10);
    FieldMap zero(model.mesh, Quantity::charge_density);
    FieldMap lap = solve_poisson(zero, model.fields.permittivity,
                                 device_bc(model.spec, model.mesh, model.fields, model.mats, bias));
    CHECK(max_diff(r.v, lap) < 1e-9);
}

TEST_CASE("converged potential is self-consistent") {
    auto model = build_model(load_device(pin_json()), 1.0);
    Bias bias{1.0, 0.3, 0.0};
    LoopConfig c;
    c.tolerance = 1e-6;
    auto r = run_loop(model, bias, c);
    REQUIRE(r.trace.status == LoopStatus::converged);
    CHECK(r.trace.records.back().max_dv <= c.tolerance);

    // one more plain Poisson step from the final carriers barely moves the potential;
    // without the screening term the step amplifies the residual by the
    // response-to-Laplacian ratio, so the bound is looser than the tolerance
    BandEdges bands = remove_pockets(bands_from_potential(r.v, model.mats)).bands;
    auto car = compute_carriers(bands, model.mats, fermi_levels(bias.vs, bias.vd), model.kt(), c.carriers);
    FieldMap v = solve_poisson(assemble_charge(car.n, car.p, model.fields.net_doping), model.fields.permittivity,
                               device_bc(model.spec, model.mesh, model.fields, model.mats, bias));
    CHECK(max_diff(v, r.v) < 100 * c.tolerance);

    // a warm start from the answer stops after one check
    auto again = run_loop(model, bias, c, &r.v);
    CHECK(again.trace.status == LoopStatus::converged);
    CHECK(again.trace.iterations() <= 2);
}

TEST_CASE("the fixed point does not depend on the mixing") {
    auto model = build_model(load_device(pin_json()), 1.0);
    Bias bias{0.8, 0.1, 0.0};
    LoopConfig a;
    a.tolerance = 1e-6;
    LoopConfig b = a;
    b.alpha = 0.4;
    b.anderson_depth = 2;
    LoopConfig plain = a;
    plain.anderson_depth = 0;
    plain.max_iterations = 400;
    auto ra = run_loop(model, bias, a), rb = run_loop(model, bias, b), rp = run_loop(model, bias, plain);
    REQUIRE(ra.trace.status == LoopStatus::converged);
    REQUIRE(rb.trace.status == LoopStatus::converged);
    CHECK(max_diff(ra.v, rb.v) < 1e-4);
    if (rp.trace.status == LoopStatus::converged) CHECK(max_diff(ra.v, rp.v) < 1e-4);
    // Anderson should not be slower than plain relaxation here
    CHECK(ra.trace.iterations() <= rp.trace.iterations());
}

TEST_CASE("equilibrium junction holds the built-in potential") {
    auto model = build_model(load_device(pin_json()), 1.0);
    Bias bias{0.5, 0.0, 0.0};
    auto r = run_loop(model, bias, LoopConfig{});
    REQUIRE(r.trace.status == LoopStatus::converged);
    const int jm = model.mesh.ny / 2;
    // p+ to n+ at equilibrium: the gap plus both degeneracy offsets, each found
    // by bisecting the majority density alone against the doping
    const double kt = model.kt();
    auto offset = [&](double mass) {
        double lo = -20, hi = 40;
        for (int k = 0; k < 100; ++k) {
            double mid = 0.5 * (lo + hi);
            (bulk_density(mass, kt, mid) * units::per_nm3_to_per_cm3 > 1e20 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi) * kt;
    };
    double expect = 1.12 + offset(model.mats.electron_mass[0]) + offset(model.mats.hole_mass[0]);
    double vbi = r.v(model.mesh.nx, jm) - r.v(0, jm);
    CHECK(vbi == doctest::Approx(expect).epsilon(1e-3));
    // neutral near the contacts: majority density close to the doping
    CHECK(r.p(1, jm) == doctest::Approx(1e20).epsilon(0.35));
    CHECK(r.n(model.mesh.nx - 1, jm) == doctest::Approx(1e20).epsilon(0.35));
}
