#pragma once
// Helpers and independent oracles shared by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "tfet/config.hpp"
#include "tfet/field.hpp"

namespace testing {

inline tfet::Mesh2D mesh(int nx, int ny, double ax, double ay = -1) {
    tfet::Mesh2D m;
    m.nx = nx;
    m.ny = ny;
    m.ax = ax;
    m.ay = ay < 0 ? ax : ay;
    return m;
}

// The silicon tunnel FET used throughout: p+ source, lightly n channel, n+ drain,
// double gate over the channel.
inline std::string reference_device_json(double thickness = 10, double spacing = 1.0) {
    return R"({
  "device": {"length_nm": 60, "thickness_nm": )" + std::to_string(thickness) + R"(, "temperature_K": 300, "reference_material": "Si"},
  "regions": [
    {"name": "source", "x_nm": [0, 20], "material": "Si", "doping_cm3": -1e20},
    {"name": "channel", "x_nm": [20, 40], "material": "Si", "doping_cm3": 1e17},
    {"name": "drain", "x_nm": [40, 60], "material": "Si", "doping_cm3": 1e20}
  ],
  "gates": [
    {"name": "top", "side": "top", "x_nm": [20, 40], "work_function_eV": 4.5, "oxide_thickness_nm": 1.0},
    {"name": "bottom", "side": "bottom", "x_nm": [20, 40], "work_function_eV": 4.5, "oxide_thickness_nm": 1.0}
  ],
  "solver": {"mesh_spacing_nm": )" + std::to_string(spacing) + R"(}
})";
}

// Transmission of a tight-binding chain (on-site 2t, hopping -t) through N sites
// raised by u0, found by matching plane waves at the four interface sites. This is
// the exact answer for the discretised problem, independent of any Green's function.
inline double chain_barrier_transmission(double e, double u0, int n, double t) {
    using c = std::complex<double>;
    const c i1(0, 1);
    auto wavenumber = [&](double kinetic) {
        // 2t (1 - cos k) = kinetic, continued analytically for evanescent waves
        c cosk = 1.0 - kinetic / (2 * t);
        return -i1 * std::log(cosk + i1 * std::sqrt(1.0 - cosk * cosk));
    };
    c k = wavenumber(e), q = wavenumber(e - u0);
    // unknowns r, A, B, tau; sites 0..n+1 with the barrier on 1..n
    Eigen::Matrix4cd m;
    Eigen::Vector4cd rhs;
    auto ein = [&](c kk, double site) { return std::exp(i1 * kk * site); };
    // site 0 and 1: incoming + reflected == barrier solution
    for (int s = 0; s < 2; ++s) {
        m(s, 0) = ein(-k, s);
        m(s, 1) = -ein(q, s);
        m(s, 2) = -ein(-q, s);
        m(s, 3) = 0;
        rhs[s] = -ein(k, s);
    }
    // site n and n+1: barrier solution == transmitted wave
    for (int s = 0; s < 2; ++s) {
        double site = n + s;
        m(2 + s, 0) = 0;
        m(2 + s, 1) = ein(q, site);
        m(2 + s, 2) = ein(-q, site);
        m(2 + s, 3) = -ein(k, site);
        rhs[2 + s] = 0;
    }
    Eigen::Vector4cd x = m.fullPivLu().solve(rhs);
    return std::norm(x[3]);
}

// Closed form of the same problem: T = 1 / (1 + [(cos k - cos q) sin(qN) / (sin k sin q)]^2).
inline double chain_barrier_transmission_closed(double e, double u0, int n, double t) {
    using c = std::complex<double>;
    c cosk = 1.0 - e / (2 * t), cosq = 1.0 - (e - u0) / (2 * t);
    c sink = std::sqrt(1.0 - cosk * cosk), sinq = std::sqrt(1.0 - cosq * cosq);
    c q = std::acos(cosq);
    c ratio = (cosk - cosq) * std::sin(q * double(n)) / (sink * sinq);
    return 1.0 / (1.0 + std::norm(ratio));
}

} // namespace testing
