#include "tfet/scf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/units.hpp"

namespace tfet {

DeviceModel build_model(const DeviceSpec & spec, double target_spacing) {
    DeviceModel m;
    m.spec = spec;
    m.mesh = build_mesh(spec, target_spacing);
    m.fields = sample_fields(spec, m.mesh);
    m.mats = node_materials(spec, m.fields);
    return m;
}

LoopConfig loop_config(const SolverSettings & s, int threads) {
    LoopConfig c;
    c.relaxation = s.relaxation;
    c.response = s.response;
    c.alpha = s.alpha;
    c.anderson_depth = s.anderson_depth;
    c.tolerance = s.tolerance;
    c.max_iterations = s.max_iterations;
    c.pockets = s.pockets;
    c.carriers.backend = s.backend;
    c.carriers.policy = s.lead_policy;
    c.carriers.spectrum.eta = s.eta;
    c.carriers.spectrum.threads = threads;
    c.carriers.closed.extension = s.extension;
    c.carriers.closed.threads = threads;
    return c;
}

const char * to_string(LoopStatus s) {
    switch (s) {
    case LoopStatus::converged: return "converged";
    case LoopStatus::max_iterations: return "max-iter";
    case LoopStatus::diverged: return "diverged";
    }
    return "unknown";
}

FieldMap relax(const FieldMap & calculated, const FieldMap & old, double alpha) {
    require_same_mesh(calculated, old, "relax");
    FieldMap out = calculated;
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = (1.0 - alpha) * calculated[p] + alpha * old[p];
    return out;
}

namespace {

struct Segment {
    int i0 = 0, i1 = 0;  // node range along x, inclusive
    double doping = 0;   // cm^-3
    double potential = 0;
    double eps = 1;
};

// Potential rise from 0 to dv across a depletion junction at xb.
double junction_profile(double x, double xb, double dv, double left, double right) {
    double w = left + right;
    if (w <= 0) return x < xb ? 0.0 : dv;
    double drop_l = dv * left / w, drop_r = dv * right / w;
    if (x <= xb - left) return 0.0;
    if (x >= xb + right) return dv;
    if (x <= xb) return drop_l * std::pow((x - (xb - left)) / left, 2);
    return dv - drop_r * std::pow((xb + right - x) / right, 2);
}

} // namespace

FieldMap initial_guess(const DeviceModel & model, const Bias & bias) {
    const Mesh2D & mesh = model.mesh;
    const int jm = mesh.ny / 2;
    const double kt = model.kt();

    std::vector<Segment> segs;
    for (int i = 0; i <= mesh.nx; ++i) {
        auto p = mesh.index(i, jm);
        double n = model.fields.net_doping[p];
        if (segs.empty() || n != segs.back().doping) {
            segs.push_back({i, i, n, 0.0, model.fields.permittivity[p]});
        } else {
            segs.back().i1 = i;
        }
    }
    const double drain_sign = std::copysign(1.0, segs.back().doping);
    for (std::size_t k = 0; k < segs.size(); ++k) {
        auto & s = segs[k];
        double vc = k == 0 ? bias.vs : (k + 1 == segs.size() ? bias.vd : (std::copysign(1.0, s.doping) == drain_sign ? bias.vd : bias.vs));
        auto p = mesh.index((s.i0 + s.i1) / 2, jm);
        s.potential = neutral_contact_potential(s.doping, vc, model.mats.bandgap[p], model.mats.ec_offset[p],
                                                model.mats.electron_mass[p], model.mats.hole_mass[p], kt);
    }

    std::vector<double> v1d(mesh.nodes_x(), segs.front().potential);
    for (std::size_t k = 0; k + 1 < segs.size(); ++k) {
        const auto & a = segs[k];
        const auto & b = segs[k + 1];
        double dv = b.potential - a.potential;
        double xb = 0.5 * (mesh.x(a.i1) + mesh.x(b.i0));
        double na = std::max(std::abs(a.doping), 1e10) * units::per_cm3_to_per_nm3;
        double nb = std::max(std::abs(b.doping), 1e10) * units::per_cm3_to_per_nm3;
        double eps = 0.5 * (a.eps + b.eps);
        double w = std::sqrt(2.0 * eps * std::abs(dv) * (na + nb) / (units::q_over_eps0 * na * nb));
        double left = std::min(w * nb / (na + nb), xb - mesh.x(a.i0));
        double right = std::min(w * na / (na + nb), mesh.x(b.i1) - xb);
        for (int i = 0; i <= mesh.nx; ++i) v1d[i] += junction_profile(mesh.x(i), xb, dv, left, right);
    }

    // capacitive divider between the body and every gate covering x
    double eps_body = model.fields.permittivity[mesh.index(mesh.nx / 2, jm)];
    double c_body = 2.0 * eps_body / std::max(mesh.ly(), mesh.ax);
    double ramp = std::max(0.5 * mesh.ly(), mesh.ax);
    FieldMap v(mesh, Quantity::potential);
    for (int i = 0; i <= mesh.nx; ++i) {
        double x = mesh.x(i), num = c_body * v1d[i], den = c_body;
        for (const auto & g : model.spec.gates) {
            double outside = std::max({g.x0 - x, x - g.x1, 0.0});
            double cover = std::max(0.0, 1.0 - outside / ramp);
            num += cover * g.capacitance() * gate_effective_potential(model.spec, g, bias.vg);
            den += cover * g.capacitance();
        }
        bool contact = i == 0 || i == mesh.nx;
        for (int j = 0; j <= mesh.ny; ++j) v(i, j) = contact ? v1d[i] : num / den;
    }
    return v;
}

LoopResult run_loop(const DeviceModel & model, const Bias & bias, const LoopConfig & cfg, const FieldMap * start) {
    if (!(cfg.alpha >= 0 && cfg.alpha < 1)) throw ConfigError("solver.alpha", "forgetting factor must lie in [0, 1)");
    if (!(cfg.tolerance > 0)) throw ConfigError("solver.tolerance_V", "must be positive");
    const Mesh2D & mesh = model.mesh;
    const double kt = model.kt();
    const FermiLevels levels = fermi_levels(bias.vs, bias.vd);

    PoissonSolver solver(model.fields.permittivity, device_bc(model.spec, mesh, model.fields, model.mats, bias));
    FieldMap doping = model.fields.net_doping;

    LoopResult res;
    res.v = start ? *start : initial_guess(model, bias);
    for (std::size_t p = 0; p < mesh.size(); ++p) {
        if (solver.bc().dirichlet[p]) res.v[p] = solver.bc().dirichlet_value[p];
    }
    const bool anderson = cfg.anderson_depth > 0;
    bool relax_carriers = !anderson && cfg.relaxation != RelaxationMode::band;
    bool relax_bands = !anderson && cfg.relaxation != RelaxationMode::carrier;
    double alpha = cfg.alpha;
    bool have_prev = false;
    FieldMap dv_prev;
    std::vector<double> history;

    // free nodes only; Dirichlet values never move
    std::vector<std::size_t> free_nodes;
    for (std::size_t p = 0; p < mesh.size(); ++p) {
        if (!solver.bc().dirichlet[p]) free_nodes.push_back(p);
    }
    const Eigen::Index nf = static_cast<Eigen::Index>(free_nodes.size());
    std::vector<Eigen::VectorXd> dx_hist, df_hist;
    Eigen::VectorXd x_last, f_last;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        auto t0 = std::chrono::steady_clock::now();
        BandEdges bands = bands_from_potential(res.v, model.mats);
        if (cfg.pockets) {
            auto filled = remove_pockets(bands);
            bands = std::move(filled.bands);
            res.conduction_pockets = std::move(filled.conduction);
            res.valence_pockets = std::move(filled.valence);
        }
        CarrierDensities c = compute_carriers(bands, model.mats, levels, kt, cfg.carriers);
        for (auto & w : c.warnings) {
            if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) res.warnings.push_back(w);
        }

        IterationRecord rec;
        rec.iteration = it;
        rec.alpha = alpha;
        if (have_prev) {
            double nmax = std::max(res.n.max(), 1.0), worst = 0;
            for (std::size_t p = 0; p < mesh.size(); ++p) worst = std::max(worst, std::abs(c.n[p] - res.n[p]) / nmax);
            rec.max_dn_rel = worst;
            if (relax_carriers) {
                c.n = relax(c.n, res.n, alpha);
                c.p = relax(c.p, res.p, alpha);
            }
        }
        res.n = std::move(c.n);
        res.p = std::move(c.p);

        // relaxed carriers only carry (1 - alpha) of the linearized response forward
        const double response_scale = relax_carriers && have_prev ? 1.0 - alpha : 1.0;
        FieldMap rho = assemble_charge(res.n, res.p, doping);
        FieldMap v_new;
        if (cfg.response == ChargeResponse::linearized) {
            std::vector<double> response(mesh.size());
            for (std::size_t p = 0; p < mesh.size(); ++p) {
                response[p] =
                    response_scale * units::q_over_eps0 * (res.n[p] + res.p[p]) * units::per_cm3_to_per_nm3 / kt;
            }
            v_new = solver.solve(rho, response, res.v);
        } else {
            v_new = solver.solve(rho);
        }

        FieldMap dv(mesh, Quantity::potential);
        double max_dv = 0, dot = 0;
        for (std::size_t p = 0; p < mesh.size(); ++p) {
            dv[p] = v_new[p] - res.v[p];
            max_dv = std::max(max_dv, std::abs(dv[p]));
            if (have_prev && dv_prev.size() == dv.size()) dot += dv[p] * dv_prev[p];
        }
        if (!std::isfinite(max_dv)) throw NumericalError("run_loop: non-finite potential update");

        if (anderson) {
            Eigen::VectorXd x(nf), f(nf);
            for (Eigen::Index k = 0; k < nf; ++k) {
                x[k] = res.v[free_nodes[k]];
                f[k] = dv[free_nodes[k]];
            }
            // restart the history when the residual jumps, the old secants no longer describe the map
            if (have_prev && f.norm() > 2.0 * f_last.norm()) {
                dx_hist.clear();
                df_hist.clear();
            } else if (have_prev) {
                dx_hist.push_back(x - x_last);
                df_hist.push_back(f - f_last);
                if (static_cast<int>(dx_hist.size()) > cfg.anderson_depth) {
                    dx_hist.erase(dx_hist.begin());
                    df_hist.erase(df_hist.begin());
                }
            }
            const double beta = 1.0 - alpha;
            Eigen::VectorXd next = x + beta * f;
            if (!df_hist.empty()) {
                const Eigen::Index m = static_cast<Eigen::Index>(df_hist.size());
                Eigen::MatrixXd dfm(nf, m), dxm(nf, m);
                for (Eigen::Index k = 0; k < m; ++k) {
                    dfm.col(k) = df_hist[k];
                    dxm.col(k) = dx_hist[k];
                }
                Eigen::VectorXd gamma = dfm.colPivHouseholderQr().solve(f);
                if (gamma.allFinite()) next -= (dxm + beta * dfm) * gamma;
            }
            x_last = x;
            f_last = f;
            for (Eigen::Index k = 0; k < nf; ++k) v_new[free_nodes[k]] = next[k];
        } else if (relax_bands) {
            v_new = relax(v_new, res.v, alpha);
        }

        res.v = std::move(v_new);
        rec.max_dv = max_dv;
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.trace.records.push_back(rec);
        history.push_back(max_dv);
        have_prev = true;

        if (max_dv <= cfg.tolerance) {
            res.trace.status = LoopStatus::converged;
            break;
        }
        if (it > 10 && max_dv > 5.0 * history[history.size() - 11]) {
            res.trace.status = LoopStatus::diverged;
            break;
        }
        if (!anderson && cfg.adaptive && history.size() >= 2 && dot < 0 && max_dv > 0.5 * history[history.size() - 2]) {
            alpha = 1.0 - 0.5 * (1.0 - alpha);
            alpha = std::min(alpha, 0.999);
        }
        dv_prev = std::move(dv);
    }
    res.bands = bands_from_potential(res.v, model.mats);
    return res;
}

} // namespace tfet
