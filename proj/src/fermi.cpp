#include "tfet/fermi.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "tfet/units.hpp"

namespace tfet {

namespace {

constexpr double two_over_sqrt_pi = 1.1283791670955126;

// 10-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 5> gl_x{0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                                     0.9739065285171717};
constexpr std::array<double, 5> gl_w{0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                     0.0666713443086881};

// int_0^inf g(u) du for integrands of the form h(u) / (1 + exp(u^2 - x)),
// which decay like exp(x - u^2). Panels of 0.1 resolve the step near u = sqrt(x) for x <= 100.
template <typename F>
double u_integral(double x, F && g) {
    double upper = std::sqrt(std::max(x, 0.0) + 45.0);
    int panels = static_cast<int>(std::ceil(upper / 0.1));
    double h = upper / panels;
    double sum = 0;
    for (int k = 0; k < panels; ++k) {
        double mid = (k + 0.5) * h;
        double part = 0;
        for (std::size_t q = 0; q < gl_x.size(); ++q) {
            double d = 0.5 * h * gl_x[q];
            part += gl_w[q] * (g(mid - d) + g(mid + d));
        }
        sum += 0.5 * h * part;
    }
    return sum;
}

double occupation_u(double u, double x) {
    double a = u * u - x;
    return a > 0 ? std::exp(-a) / (1.0 + std::exp(-a)) : 1.0 / (1.0 + std::exp(a));
}

double derivative_quadrature(double x) {
    return two_over_sqrt_pi * u_integral(x, [x](double u) {
        double f = occupation_u(u, x);
        return f * (1.0 - f);
    });
}

struct Table {
    static constexpr double lo = -50.0, hi = 100.0, h = 0.02;
    std::vector<double> value, slope;

    Table() {
        int n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
        value.resize(n);
        slope.resize(n);
        for (int k = 0; k < n; ++k) {
            double x = lo + k * h;
            value[k] = fd_half_neg_quadrature(x);
            slope[k] = derivative_quadrature(x);
        }
    }

    double operator()(double x) const {
        double s = (x - lo) / h;
        auto k = std::min(static_cast<std::size_t>(s), value.size() - 2);
        double t = s - k;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * value[k] + (t3 - 2 * t2 + t) * h * slope[k] + (-2 * t3 + 3 * t2) * value[k + 1] +
               (t3 - t2) * h * slope[k + 1];
    }
};

const Table & table() {
    static const Table t;
    return t;
}

} // namespace

double fermi(double mu, double e, double kt) {
    double a = (e - mu) / kt;
    if (a > 0) {
        double w = std::exp(-a);
        return w / (1.0 + w);
    }
    return 1.0 / (1.0 + std::exp(a));
}

double fd_half_neg_quadrature(double x) { return two_over_sqrt_pi * u_integral(x, [x](double u) { return occupation_u(u, x); }); }

double fd_half_neg(double x) {
    if (x < Table::lo) {
        // alternating series sum_k (-1)^{k+1} e^{kx} / sqrt(k); e^{x} < 2e-22 here
        double e = std::exp(x);
        return e * (1.0 - e / std::sqrt(2.0));
    }
    if (x > Table::hi) return fd_half_neg_quadrature(x);
    return table()(x);
}

double fd_half(double x) {
    if (x < -50.0) {
        double e = std::exp(x);
        return e * (1.0 - e / (2.0 * std::sqrt(2.0)));
    }
    // t = u^2: F_{1/2} = (4/sqrt(pi)) int u^2 / (1 + exp(u^2 - x)) du
    return 2.0 * two_over_sqrt_pi * u_integral(x, [x](double u) { return u * u * occupation_u(u, x); });
}

double transverse_occupancy(double mass, double kt, double x) {
    return std::sqrt(mass * kt / (4.0 * units::pi * units::hbar2_over_2m0)) * fd_half_neg(x);
}

double effective_dos(double mass, double kt) {
    return 2.0 * std::pow(mass * kt / (4.0 * units::pi * units::hbar2_over_2m0), 1.5);
}

double bulk_density(double mass, double kt, double x) { return effective_dos(mass, kt) * fd_half(x); }

} // namespace tfet
