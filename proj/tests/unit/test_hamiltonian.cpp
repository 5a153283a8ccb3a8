#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "tfet/errors.hpp"
#include "tfet/hamiltonian.hpp"
#include "tfet/negf.hpp"
#include "tfet/units.hpp"

using namespace tfet;

namespace {
constexpr double C = units::hbar2_over_2m0;

Eigen::VectorXd spectrum(const DeviceHamiltonian & h) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h.dense(), Eigen::EigenvaluesOnly).eigenvalues();
}
} // namespace

TEST_CASE("half-node mass is the harmonic mean") {
    CHECK(half_node_mass(0.3, 0.3) == doctest::Approx(0.3));
    CHECK(half_node_mass(1.0, 3.0) == doctest::Approx(1.5));
}

TEST_CASE("uniform mass gives the particle-in-a-box ground state") {
    Mesh2D m = testing::mesh(9, 4, 0.5, 0.4);
    const double mass = 0.26;
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass, mass);
    DeviceHamiltonian h = assemble(u, ms);
    double tx = C / (mass * m.ax * m.ax), ty = C / (mass * m.ay * m.ay);
    double analytic = 2 * tx * (1 - std::cos(units::pi / (m.nx + 2))) + 2 * ty * (1 - std::cos(units::pi / (m.ny + 2)));
    CHECK(spectrum(h)[0] == doctest::Approx(analytic).epsilon(1e-12));
    // five-point stencil entries
    CHECK(h.hop_x(3, 2) == doctest::Approx(tx));
    CHECK(h.hop_y(3, 2) == doctest::Approx(ty));
    CHECK(h.diag[m.index(3, 2)] == doctest::Approx(2 * tx + 2 * ty));
}

TEST_CASE("constant potential shifts every eigenvalue") {
    Mesh2D m = testing::mesh(6, 3, 1.0);
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass, 0.2);
    for (std::size_t p = 0; p < m.size(); ++p) ms[p] = 0.2 + 0.01 * (p % 4);
    Eigen::VectorXd a = spectrum(assemble(u, ms));
    for (auto & x : u.values) x += 0.37;
    Eigen::VectorXd b = spectrum(assemble(u, ms));
    for (Eigen::Index k = 0; k < a.size(); ++k) CHECK(b[k] - a[k] == doctest::Approx(0.37).epsilon(1e-10));
}

TEST_CASE("Hamiltonian is symmetric with positive hoppings") {
    Mesh2D m = testing::mesh(7, 4, 0.6, 0.5);
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass);
    for (std::size_t p = 0; p < m.size(); ++p) {
        u[p] = 0.1 * std::sin(double(p));
        ms[p] = 0.1 + 0.05 * (p % 7);
    }
    DeviceHamiltonian h = assemble(u, ms);
    Eigen::MatrixXd d = h.dense();
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (double t : h.tx) CHECK(t > 0);
    for (double t : h.ty) CHECK(t > 0);
}

TEST_CASE("sparsity is pentadiagonal without wrap-around") {
    Mesh2D m = testing::mesh(5, 3, 1.0);
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass, 0.3);
    Eigen::MatrixXd d = assemble(u, ms).dense();
    const int ny1 = m.nodes_y();
    for (int r = 0; r < d.rows(); ++r) {
        for (int c = 0; c < d.cols(); ++c) {
            int off = std::abs(r - c);
            bool allowed = off == 0 || off == ny1 || (off == 1 && std::min(r, c) % ny1 != ny1 - 1);
            if (!allowed) CHECK(d(r, c) == 0.0);
            if (allowed) CHECK(d(r, c) != 0.0);
        }
    }
}

TEST_CASE("eigenvalues respect the lower bound of U") {
    Mesh2D m = testing::mesh(8, 4, 0.5);
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass, 0.3);
    for (std::size_t p = 0; p < m.size(); ++p) u[p] = -0.2 + 0.05 * std::cos(0.7 * p);
    CHECK(spectrum(assemble(u, ms))[0] >= u.min());
}

TEST_CASE("assembly is linear in U") {
    Mesh2D m = testing::mesh(5, 2, 1.0);
    FieldMap u1(m, Quantity::effective_potential), u2(m, Quantity::effective_potential), ms(m, Quantity::effective_mass, 0.3);
    for (std::size_t p = 0; p < m.size(); ++p) {
        u1[p] = 0.01 * p;
        u2[p] = -0.03 * (p % 3);
    }
    FieldMap sum = u1;
    for (std::size_t p = 0; p < m.size(); ++p) sum[p] += u2[p];
    Eigen::MatrixXd diff = assemble(sum, ms).dense() - assemble(u1, ms).dense();
    Eigen::MatrixXd expect = Eigen::VectorXd::Map(u2.values.data(), u2.size()).asDiagonal();
    CHECK((diff - expect).cwiseAbs().maxCoeff() < 1e-14);
    DeviceHamiltonian h = assemble(u1, ms);
    replace_potential(h, u1, sum);
    CHECK((h.dense() - assemble(sum, ms).dense()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("non-positive mass is rejected") {
    Mesh2D m = testing::mesh(3, 1, 1.0);
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass, 0.3);
    ms(1, 1) = 0;
    CHECK_THROWS_AS(assemble(u, ms), NumericalError);
}

TEST_CASE("mass step conserves current: two-mass step transmission") {
    // chain with mass m1 on the left, m2 on the right; the exact lattice answer with
    // the harmonic half-node hopping at the interface bond is T = 4 v1 v2 / |...|^2,
    // obtained here by plane-wave matching at the two interface sites
    const double a = 0.25, m1 = 0.2, m2 = 0.6, e = 0.15;
    const int n = 30;
    Mesh2D m = testing::mesh(n - 1, 0, a);
    FieldMap u(m, Quantity::effective_potential), ms(m, Quantity::effective_mass);
    for (int i = 0; i < n; ++i) ms(i, 0) = i < n / 2 ? m1 : m2;
    DeviceHamiltonian h = assemble(u, ms);
    SliceOptions so;
    so.eta = 1e-13;
    NegfSlice s = compute_slice_at(h, e, 0, so);

    using c = std::complex<double>;
    const c i1(0, 1);
    double t1 = C / (m1 * a * a), t2 = C / (m2 * a * a), tb = C / (half_node_mass(m1, m2) * a * a);
    double k1 = std::acos(1 - e / (2 * t1)), k2 = std::acos(1 - e / (2 * t2));
    // sites ..., -1, 0 | 1, 2, ...: site 0 has mass m1 (diag t1 + tb), site 1 mass m2 (diag tb + t2)
    // psi_j = e^{ik1 j} + r e^{-ik1 j} for j <= 0, tau e^{ik2 (j-1)} for j >= 1
    // rows: equations at sites 0 and 1
    Eigen::Matrix2cd mat;
    Eigen::Vector2cd rhs;
    // site 0: (t1 + tb - E) psi0 - t1 psi_-1 - tb psi1 = 0
    mat(0, 0) = (t1 + tb - e) * 1.0 - t1 * std::exp(i1 * k1);
    mat(0, 1) = -tb;
    rhs[0] = -((t1 + tb - e) * 1.0 - t1 * std::exp(-i1 * k1));
    // site 1: (tb + t2 - E) psi1 - tb psi0 - t2 psi2 = 0
    mat(1, 0) = -tb;
    mat(1, 1) = (tb + t2 - e) - t2 * std::exp(i1 * k2);
    rhs[1] = tb;
    Eigen::Vector2cd x = mat.fullPivLu().solve(rhs);
    double v1 = t1 * std::sin(k1), v2 = t2 * std::sin(k2);
    double exact = std::norm(x[1]) * v2 / v1;
    CHECK(s.transmission == doctest::Approx(exact).epsilon(1e-9));
    CHECK(1 - s.transmission == doctest::Approx(std::norm(x[0])).epsilon(1e-8));
}
