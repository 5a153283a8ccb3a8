#include "tfet/transport.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/fermi.hpp"
#include "tfet/parallel.hpp"
#include "tfet/units.hpp"

namespace tfet {

namespace {
constexpr double C = units::hbar2_over_2m0;

void gauss_legendre(int n, double a, double b, std::vector<double> & x, std::vector<double> & w) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    x.resize(n);
    w.resize(n);
    for (int k = 0; k < n; ++k) {
        double v = es.eigenvectors()(0, k);
        x[k] = a + 0.5 * (b - a) * (es.eigenvalues()[k] + 1.0);
        w[k] = (b - a) * v * v;
    }
}
} // namespace

const char * to_string(CurrentStatus s) {
    switch (s) {
    case CurrentStatus::ok: return "ok";
    case CurrentStatus::no_overlap: return "no-overlap";
    case CurrentStatus::equal_fermi_levels: return "equal-fermi-levels";
    }
    return "ok";
}

CurrentOptions current_options(const SolverSettings & s, int threads) {
    CurrentOptions o;
    o.engine = s.transmission;
    o.kz_points = s.kz_points;
    o.energy_step_kt = s.energy_step_kt;
    o.eta = s.eta;
    o.threads = threads;
    return o;
}

SliceTransmission negf_transmission(const Subbands & sub, const NodeMaterials & mats, double e, double eta) {
    auto build = [&](double energy) {
        EffectiveFields f = effective_fields(energy, sub, mats);
        return assemble(f.u, f.mass);
    };
    SliceOptions so;
    so.eta = eta;
    so.ldos = false;
    NegfSlice s = compute_slice(e, sub.kz, build, so);
    if (!std::isfinite(s.transmission)) {
        throw NumericalError(fmt::format("transmission: singular slice at E = {}, kz = {}", e, sub.kz));
    }
    return {s.transmission, s.lead_residual, s.retried};
}

WkbResult wkb_transmission(const FieldMap & u, const FieldMap & mass, double e) {
    require_same_mesh(u, mass, "wkb_transmission");
    const Mesh2D & m = u.mesh;
    WkbResult out;
    out.row.resize(m.nodes_y());
    for (int j = 0; j <= m.ny; ++j) {
        // kappa^2 taken piecewise linear between nodes; the forbidden part of a
        // segment ends where U - E changes sign (linear interpolation)
        double action = 0;
        for (int i = 0; i < m.nx; ++i) {
            double d0 = u(i, j) - e, d1 = u(i + 1, j) - e;
            if (d0 <= 0 && d1 <= 0) continue;
            double g0 = std::max(0.0, mass(i, j) * d0 / C), g1 = std::max(0.0, mass(i + 1, j) * d1 / C);
            double len = m.ax;
            if (d0 <= 0) len *= d1 / (d1 - d0);
            else if (d1 <= 0) len *= d0 / (d0 - d1);
            double a = std::max(g0, g1), b = (d0 > 0 && d1 > 0) ? std::min(g0, g1) : 0.0;
            double integral = (a - b) > 1e-300 ? (2.0 / 3.0) * (a * std::sqrt(a) - b * std::sqrt(b)) / (a - b)
                                               : std::sqrt(a);
            action += integral * len;
        }
        out.row[j] = std::exp(-2.0 * action);
        out.row_sum += out.row[j];
    }
    out.row_mean = out.row_sum / out.row.size();
    return out;
}

double wkb_channel_transmission(const BandEdges & bands, const NodeMaterials & mats, double e, double kz) {
    const Mesh2D & m = bands.ec.mesh;
    const double width = (m.ny + 2) * m.ay;
    auto mean_at = [&](double ky) {
        Subbands sub = subbands(bands, std::sqrt(kz * kz + ky * ky), mats);
        EffectiveFields f = effective_fields(e, sub, mats);
        return wkb_transmission(f.u, f.mass, e).row_mean;
    };
    // the integrand falls off like a Gaussian in ky; march until it is negligible
    const double dk = 0.01;
    double first = mean_at(0.0), sum = 0.5 * first, peak = first;
    for (int k = 1; k < 100000; ++k) {
        double v = mean_at(k * dk);
        peak = std::max(peak, v);
        sum += v;
        if (v <= 1e-10 * peak || (peak == 0 && k > 50)) break;
    }
    return width / units::pi * sum * dk;
}

BandEdges confined_bands(const BandEdges & bands, const NodeMaterials & mats) {
    const Mesh2D & m = bands.ec.mesh;
    BandEdges out = bands;
    const int n = m.nodes_y();
    for (int i = 0; i <= m.nx; ++i) {
        Eigen::MatrixXd hc = Eigen::MatrixXd::Zero(n, n), hv = Eigen::MatrixXd::Zero(n, n);
        auto hop = [&](const std::vector<double> & mass, int j0, int j1) {
            return C / (half_node_mass(mass[m.index(i, j0)], mass[m.index(i, j1)]) * m.ay * m.ay);
        };
        std::vector<double> tc(n + 1, 0.0), tv(n + 1, 0.0);
        if (m.ny > 0) {
            for (int j = 1; j < n; ++j) {
                tc[j] = hop(mats.electron_mass, j - 1, j);
                tv[j] = hop(mats.hole_mass, j - 1, j);
            }
            tc[0] = tc[1];
            tc[n] = tc[n - 1];
            tv[0] = tv[1];
            tv[n] = tv[n - 1];
        }
        for (int j = 0; j < n; ++j) {
            hc(j, j) = tc[j] + tc[j + 1] + bands.ec(i, j);
            hv(j, j) = tv[j] + tv[j + 1] - bands.ev(i, j);
            if (j > 0) {
                hc(j, j - 1) = hc(j - 1, j) = -tc[j];
                hv(j, j - 1) = hv(j - 1, j) = -tv[j];
            }
        }
        double ec0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hc, Eigen::EigenvaluesOnly).eigenvalues()[0];
        double ev0 = -Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hv, Eigen::EigenvaluesOnly).eigenvalues()[0];
        for (int j = 0; j < n; ++j) {
            out.ec(i, j) = ec0;
            out.ev(i, j) = ev0;
        }
    }
    return out;
}

CurrentResult integrate_current(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels,
                                double kt, const CurrentOptions & opt) {
    CurrentResult res;
    BandEdges work = opt.engine == TransmissionEngine::wkb_confined ? confined_bands(bands, mats) : bands;
    res.window = tunnel_window(subbands(work, 0.0, mats), mats);
    if (res.window.empty()) {
        res.status = CurrentStatus::no_overlap;
        return res;
    }
    if (levels.mu1 == levels.mu2) {
        res.status = CurrentStatus::equal_fermi_levels;
        return res;
    }
    const double mu_lo = std::min(levels.mu1, levels.mu2), mu_hi = std::max(levels.mu1, levels.mu2);
    gauss_legendre(opt.kz_points, 0.0, res.window.kz_max, res.kz, res.kz_weight);

    struct Item {
        int q;
        double e, w;
    };
    std::vector<Item> items;
    std::vector<Subbands> subs;
    for (int q = 0; q < opt.kz_points; ++q) {
        subs.push_back(subbands(work, res.kz[q], mats));
        double a = res.window.e_min_at(res.kz[q]), b = res.window.e_max_at(res.kz[q]);
        double lo = std::max(a, mu_lo - opt.tail * kt), hi = std::min(b, mu_hi + opt.tail * kt);
        if (!(hi > lo)) continue;
        double step = std::min(opt.energy_step_kt * kt, (b - a) / 200.0);
        auto grid = uniform_grid(lo, hi, step);
        for (std::size_t k = 0; k < grid.size(); ++k) items.push_back({q, grid.energy[k], grid.weight[k]});
    }

    std::vector<SliceTransmission> t(items.size());
    parallel_for(items.size(), opt.threads, [&](std::size_t k) {
        const Item & it = items[k];
        if (opt.engine == TransmissionEngine::negf) {
            t[k] = negf_transmission(subs[it.q], mats, it.e, opt.eta);
        } else {
            t[k].t = wkb_channel_transmission(work, mats, it.e, res.kz[it.q]);
        }
    });

    const double prefactor = units::q2_over_hbar / (units::pi * units::pi);
    res.partial.assign(opt.kz_points, 0.0);
    for (std::size_t k = 0; k < items.size(); ++k) {
        const Item & it = items[k];
        double df = fermi(levels.mu1, it.e, kt) - fermi(levels.mu2, it.e, kt);
        res.partial[it.q] += prefactor * it.w * t[k].t * df;
        res.retried += t[k].retried;
        res.lead_residual = std::max(res.lead_residual, t[k].lead_residual);
        if (opt.keep_samples) res.samples.push_back({res.kz[it.q], it.e, t[k].t});
    }
    for (int q = 0; q < opt.kz_points; ++q) res.current += res.kz_weight[q] * res.partial[q];

    if (opt.refinement_check) {
        CurrentOptions fine = opt;
        fine.refinement_check = false;
        fine.keep_samples = false;
        fine.kz_points = 2 * opt.kz_points;
        fine.energy_step_kt = 0.5 * opt.energy_step_kt;
        double finer = integrate_current(bands, mats, levels, kt, fine).current;
        res.refined = true;
        res.refinement_change = std::abs(finer - res.current) / std::max(std::abs(finer), 1e-300);
        res.refinement_ok = res.refinement_change < 0.02;
    }
    return res;
}

FieldMap electric_field(const FieldMap & v) {
    const Mesh2D & m = v.mesh;
    FieldMap f(m, Quantity::electric_field);
    auto diff = [](double lo, double hi, double span) { return (hi - lo) / span; };
    for (int i = 0; i <= m.nx; ++i) {
        for (int j = 0; j <= m.ny; ++j) {
            int il = std::max(i - 1, 0), ir = std::min(i + 1, m.nx);
            double ex = ir > il ? diff(v(il, j), v(ir, j), (ir - il) * m.ax) : 0.0;
            double ey = 0;
            if (m.ny > 0) {
                int jl = std::max(j - 1, 0), jr = std::min(j + 1, m.ny);
                ey = diff(v(i, jl), v(i, jr), (jr - jl) * m.ay);
            }
            f(i, j) = std::hypot(ex, ey) * 1e7;  // V/nm -> V/cm
        }
    }
    return f;
}

FieldMap kane_generation(const FieldMap & field, const std::vector<double> & bandgap, const KaneParams & k) {
    FieldMap g(field.mesh, Quantity::generation_rate);
    for (std::size_t p = 0; p < g.size(); ++p) {
        double f = field[p];
        if (!(f > 0)) continue;
        double eg = bandgap[p];
        g[p] = k.a * std::pow(f, k.gamma) / std::sqrt(eg) * std::exp(-k.b * std::pow(eg, 1.5) / f);
    }
    return g;
}

std::vector<double> subthreshold_swing(const std::vector<double> & vg, const std::vector<double> & current) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < std::min(vg.size(), current.size()); ++k) {
        double a = current[k], b = current[k + 1];
        if (!(a > 0 && b > 0) || a == b) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        out.push_back(1000.0 * (vg[k + 1] - vg[k]) / (std::log10(b) - std::log10(a)));
    }
    return out;
}

} // namespace tfet
