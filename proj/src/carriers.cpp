#include "tfet/carriers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/fermi.hpp"
#include "tfet/parallel.hpp"
#include "tfet/units.hpp"

namespace tfet {

FermiLevels fermi_levels(double vs, double vd) { return {-vs, -vd}; }

EnergyGrid make_energy_grid(double lo, double hi, std::vector<double> breakpoints, double max_step) {
    EnergyGrid grid;
    if (!(hi > lo)) return grid;
    if (!(max_step > 0)) throw NumericalError("make_energy_grid: step must be positive");
    std::erase_if(breakpoints, [&](double b) { return !(b > lo && b < hi); });
    breakpoints.push_back(lo);
    breakpoints.push_back(hi);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                  [&](double a, double b) { return b - a < 1e-12 * std::max(1.0, std::abs(a)); }),
                      breakpoints.end());
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        double a = breakpoints[k], b = breakpoints[k + 1];
        int n = std::max(4, static_cast<int>(std::ceil(0.5 * units::pi * (b - a) / max_step)));
        double dth = units::pi / n;
        for (int s = 0; s < n; ++s) {
            double th = (s + 0.5) * dth;
            grid.energy.push_back(a + 0.5 * (b - a) * (1.0 - std::cos(th)));
            grid.weight.push_back(0.5 * (b - a) * std::sin(th) * dth);
        }
    }
    return grid;
}

EnergyGrid uniform_grid(double lo, double hi, double step) {
    EnergyGrid grid;
    if (!(hi > lo)) return grid;
    int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
    double h = (hi - lo) / n;
    for (int k = 0; k <= n; ++k) {
        grid.energy.push_back(lo + k * h);
        grid.weight.push_back((k == 0 || k == n) ? 0.5 * h : h);
    }
    return grid;
}

CarrierProblem carrier_problem(CarrierKind kind, const BandEdges & bands, const NodeMaterials & mats,
                               const FermiLevels & levels) {
    CarrierProblem pr;
    pr.kind = kind;
    const Mesh2D & m = bands.ec.mesh;
    pr.u = FieldMap(m, Quantity::effective_potential);
    pr.mass = FieldMap(m, Quantity::effective_mass);
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (kind == CarrierKind::electron) {
            pr.u[p] = bands.ec[p];
            pr.mass[p] = mats.electron_mass[p];
        } else {
            pr.u[p] = -bands.ev[p];
            pr.mass[p] = mats.hole_mass[p];
        }
    }
    pr.levels = kind == CarrierKind::electron ? levels : FermiLevels{-levels.mu1, -levels.mu2};
    return pr;
}

namespace {

// Lowest energy with lead density of states and the mode-edge breakpoints of both leads.
std::pair<double, std::vector<double>> lead_edges(const LeadModes & a, const LeadModes & b) {
    std::vector<double> edges;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto * lm : {&a, &b}) {
        for (Eigen::Index k = 0; k < lm->eps.size(); ++k) {
            edges.push_back(lm->eps[k] - 2.0 * lm->t);
            edges.push_back(lm->eps[k] + 2.0 * lm->t);
            lo = std::min(lo, lm->eps[k] - 2.0 * std::abs(lm->t));
        }
    }
    return {lo, edges};
}

std::vector<double> occupancy_prefactor(const FieldMap & mass, double kt) {
    std::vector<double> s(mass.size());
    for (std::size_t p = 0; p < s.size(); ++p) s[p] = transverse_occupancy(mass[p], kt, 0.0) / fd_half_neg(0.0);
    return s;
}

} // namespace

LdosSpectrum carrier_spectrum(const CarrierProblem & problem, double kt, const SpectrumOptions & opt) {
    DeviceHamiltonian h = assemble(problem.u, problem.mass);
    LeadModes left = lead_modes(h, Lead::source), right = lead_modes(h, Lead::drain);
    auto [lo, edges] = lead_edges(left, right);
    double hi = std::max(problem.levels.mu1, problem.levels.mu2) + opt.tail * kt;

    LdosSpectrum out;
    out.grid = make_energy_grid(lo, hi, edges, opt.step);
    const std::size_t ne = out.grid.size();
    out.d1.resize(ne);
    out.d2.resize(ne);
    std::vector<char> retried(ne, 0);
    SliceOptions so{opt.eta, opt.mode, true, false};
    parallel_for(ne, opt.threads, [&](std::size_t k) {
        auto s = compute_slice(out.grid.energy[k], 0.0, [&](double) -> const DeviceHamiltonian & { return h; }, so,
                               &left, &right);
        if (!s.d1.allFinite() || !s.d2.allFinite()) {
            throw NumericalError(fmt::format("carrier_spectrum: singular Green's function at E = {}", out.grid.energy[k]));
        }
        out.d1[k] = std::move(s.d1);
        out.d2[k] = std::move(s.d2);
        retried[k] = s.retried;
    });
    out.retried = static_cast<int>(std::count(retried.begin(), retried.end(), 1));
    return out;
}

FieldMap density_from_spectrum(const LdosSpectrum & spectrum, const CarrierProblem & problem, double kt,
                               LeadPolicy policy) {
    const Mesh2D & m = problem.u.mesh;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size()));
    bool both = policy == LeadPolicy::both_leads;
    bool use_source = both || problem.kind == CarrierKind::hole;
    bool use_drain = both || problem.kind == CarrierKind::electron;
    for (std::size_t k = 0; k < spectrum.grid.size(); ++k) {
        double e = spectrum.grid.energy[k], w = spectrum.grid.weight[k];
        if (use_source) acc += (w * fd_half_neg((problem.levels.mu1 - e) / kt)) * spectrum.d1[k];
        if (use_drain) acc += (w * fd_half_neg((problem.levels.mu2 - e) / kt)) * spectrum.d2[k];
    }
    auto s = occupancy_prefactor(problem.mass, kt);
    FieldMap out(m, problem.kind == CarrierKind::electron ? Quantity::electron_density : Quantity::hole_density);
    for (std::size_t p = 0; p < m.size(); ++p) {
        double v = acc[static_cast<Eigen::Index>(p)] * s[p];
        if (v < -1e-12 * std::max(1.0, acc.cwiseAbs().maxCoeff() * s[p])) {
            throw NumericalError(fmt::format("density_from_spectrum: negative density {} at node {}", v, p));
        }
        out[p] = std::max(v, 0.0) * units::per_nm3_to_per_cm3;
    }
    return out;
}

FieldMap electron_density(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels, double kt,
                          LeadPolicy policy, const SpectrumOptions & opt) {
    auto pr = carrier_problem(CarrierKind::electron, bands, mats, levels);
    return density_from_spectrum(carrier_spectrum(pr, kt, opt), pr, kt, policy);
}

FieldMap hole_density(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels, double kt,
                      LeadPolicy policy, const SpectrumOptions & opt) {
    auto pr = carrier_problem(CarrierKind::hole, bands, mats, levels);
    return density_from_spectrum(carrier_spectrum(pr, kt, opt), pr, kt, policy);
}

namespace {

// Gauss-Legendre nodes and weights on [a, b] (Golub-Welsch).
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

DensityPair full_density_oracle(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels,
                                double kt, const OracleOptions & opt) {
    const Mesh2D & m = bands.ec.mesh;
    const std::size_t nn = m.size();
    double mu_hi = std::max(levels.mu1, levels.mu2), mu_lo = std::min(levels.mu1, levels.mu2);
    double mc_max = *std::max_element(mats.electron_mass.begin(), mats.electron_mass.end());
    double mv_max = *std::max_element(mats.hole_mass.begin(), mats.hole_mass.end());
    const double c = units::hbar2_over_2m0;

    DensityPair out{FieldMap(m, Quantity::electron_density), FieldMap(m, Quantity::hole_density)};
    for (CarrierKind kind : {CarrierKind::electron, CarrierKind::hole}) {
        bool electron = kind == CarrierKind::electron;
        double depth = electron ? mu_hi + opt.tail * kt - bands.ec.min() : bands.ev.max() - mu_lo + opt.tail * kt;
        if (depth <= 0) continue;
        double kz_top = std::sqrt((electron ? mc_max : mv_max) * depth / c);
        std::vector<double> kz, wkz;
        gauss_legendre(opt.kz_points, 0.0, kz_top, kz, wkz);

        // one work item per (k_z, E) so the reduction below is in fixed order
        struct Item {
            double kz, wkz, e, we;
        };
        std::vector<Item> items;
        std::vector<Subbands> subs;
        for (int q = 0; q < opt.kz_points; ++q) {
            subs.push_back(subbands(bands, kz[q], mats));
            // lead modes in the single-band picture of this carrier at this k_z
            BandEdges shifted{subs.back().ec_sub, subs.back().ev_sub};
            auto pr = carrier_problem(kind, shifted, mats, levels);
            auto h = assemble(pr.u, pr.mass);
            auto [lo, edges] = lead_edges(lead_modes(h, Lead::source), lead_modes(h, Lead::drain));
            double hi = std::max(pr.levels.mu1, pr.levels.mu2) + opt.tail * kt;
            auto grid = make_energy_grid(lo, hi, edges, opt.step);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double e = electron ? grid.energy[k] : -grid.energy[k];
                items.push_back({static_cast<double>(q), wkz[q], e, grid.weight[k]});
            }
        }
        std::vector<Eigen::VectorXd> contrib(items.size());
        parallel_for(items.size(), opt.threads, [&](std::size_t k) {
            const Item & it = items[k];
            const Subbands & sub = subs[static_cast<std::size_t>(it.kz)];
            auto build = [&](double e) {
                EffectiveFields f = effective_fields(e, sub, mats);
                return assemble(f.u, f.mass);
            };
            SliceOptions so{opt.eta, SolverMode::recursive, true, false};
            auto s = compute_slice(it.e, sub.kz, build, so);
            double f1 = fermi(levels.mu1, it.e, kt), f2 = fermi(levels.mu2, it.e, kt);
            Eigen::VectorXd v(static_cast<Eigen::Index>(nn));
            for (std::size_t p = 0; p < nn; ++p) {
                double mid = 0.5 * (sub.ec_sub[p] + sub.ev_sub[p]);
                auto pi = static_cast<Eigen::Index>(p);
                bool count = electron ? it.e >= mid : it.e < mid;
                double occ = electron ? s.d1[pi] * f1 + s.d2[pi] * f2 : s.d1[pi] * (1 - f1) + s.d2[pi] * (1 - f2);
                v[pi] = count ? occ : 0.0;
            }
            contrib[k] = it.wkz * it.we / units::pi * v;
        });
        FieldMap & target = electron ? out.n : out.p;
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nn));
        for (const auto & v : contrib) acc += v;
        for (std::size_t p = 0; p < nn; ++p) target[p] = acc[static_cast<Eigen::Index>(p)] * units::per_nm3_to_per_cm3;
    }
    return out;
}

PocketFill fill_pockets(const std::vector<double> & profile) {
    const std::size_t n = profile.size();
    PocketFill out{profile, {}};
    if (n < 3) return out;
    std::vector<double> left(n), right(n);
    left[0] = profile[0];
    for (std::size_t k = 1; k < n; ++k) left[k] = std::max(left[k - 1], profile[k]);
    right[n - 1] = profile[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) right[k] = std::max(right[k + 1], profile[k]);
    for (std::size_t k = 0; k < n; ++k) out.profile[k] = std::max(profile[k], std::min(left[k], right[k]));

    for (std::size_t k = 0; k < n;) {
        if (out.profile[k] <= profile[k]) {
            ++k;
            continue;
        }
        Pocket pk{static_cast<int>(k), static_cast<int>(k), 0.0};
        while (k < n && out.profile[k] > profile[k]) {
            pk.end = static_cast<int>(k);
            pk.depth = std::max(pk.depth, out.profile[k] - profile[k]);
            ++k;
        }
        out.pockets.push_back(pk);
    }
    return out;
}

BandPockets remove_pockets(const BandEdges & bands) {
    const Mesh2D & m = bands.ec.mesh;
    BandPockets out{bands, {}, {}};
    std::vector<double> ec_min(m.nodes_x()), ev_max(m.nodes_x());
    for (int i = 0; i <= m.nx; ++i) {
        ec_min[i] = std::numeric_limits<double>::infinity();
        ev_max[i] = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= m.ny; ++j) {
            ec_min[i] = std::min(ec_min[i], bands.ec(i, j));
            ev_max[i] = std::max(ev_max[i], bands.ev(i, j));
        }
    }
    auto fc = fill_pockets(ec_min);
    std::vector<double> neg(ev_max.size());
    std::transform(ev_max.begin(), ev_max.end(), neg.begin(), [](double v) { return -v; });
    auto fv = fill_pockets(neg);
    for (int i = 0; i <= m.nx; ++i) {
        double dc = fc.profile[i] - ec_min[i];
        double dv = fv.profile[i] - neg[i];
        if (dc == 0 && dv == 0) continue;
        for (int j = 0; j <= m.ny; ++j) {
            out.bands.ec(i, j) += dc;
            out.bands.ev(i, j) -= dv;
        }
    }
    out.conduction = std::move(fc.pockets);
    out.valence = std::move(fv.pockets);
    return out;
}

CarrierDensities compute_carriers(const BandEdges & bands, const NodeMaterials & mats, const FermiLevels & levels,
                                  double kt, const CarrierSettings & settings) {
    CarrierDensities out;
    auto pe = carrier_problem(CarrierKind::electron, bands, mats, levels);
    auto ph = carrier_problem(CarrierKind::hole, bands, mats, levels);
    if (settings.backend == CarrierBackend::negf) {
        out.n = density_from_spectrum(carrier_spectrum(pe, kt, settings.spectrum), pe, kt, settings.policy);
        out.p = density_from_spectrum(carrier_spectrum(ph, kt, settings.spectrum), ph, kt, settings.policy);
    } else {
        auto ce = closed_boundary_density(pe, kt, settings.closed);
        auto ch = closed_boundary_density(ph, kt, settings.closed);
        out.n = std::move(ce.density);
        out.p = std::move(ch.density);
        out.warnings = ce.warnings;
        out.warnings.insert(out.warnings.end(), ch.warnings.begin(), ch.warnings.end());
    }
    return out;
}

} // namespace tfet
