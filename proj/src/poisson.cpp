#include "tfet/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Sparse>
#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/fermi.hpp"
#include "tfet/units.hpp"

namespace tfet {

PoissonBC::PoissonBC(const Mesh2D & m)
    : mesh(m), dirichlet(m.size(), 0), dirichlet_value(m.size(), 0.0), robin_coeff(m.size(), 0.0),
      robin_source(m.size(), 0.0) {}

void PoissonBC::set_dirichlet(int i, int j, double v) {
    auto p = mesh.index(i, j);
    dirichlet[p] = 1;
    dirichlet_value[p] = v;
}

void PoissonBC::add_robin(int i, int j, double coeff_len, double gate_potential) {
    auto p = mesh.index(i, j);
    robin_coeff[p] += coeff_len;
    robin_source[p] += coeff_len * gate_potential;
}

bool PoissonBC::anchored() const {
    for (std::size_t p = 0; p < dirichlet.size(); ++p) {
        if (dirichlet[p] || robin_coeff[p] > 0) return true;
    }
    return false;
}

double gate_effective_potential(const DeviceSpec & spec, const Gate & gate, double vg) {
    return vg - (gate.work_function - vacuum_reference(spec));
}

double neutral_contact_potential(double net_doping_cm3, double v_contact, double bandgap, double ec_offset,
                                 double electron_mass, double hole_mass, double kt) {
    double target = net_doping_cm3 * units::per_cm3_to_per_nm3;
    double nc = effective_dos(electron_mass, kt);
    double nv = effective_dos(hole_mass, kt);
    double gap = bandgap / kt;
    // eta = (mu - Ec) / kT; n - p is increasing in eta
    auto excess = [&](double eta) { return nc * fd_half(eta) - nv * fd_half(-eta - gap) - target; };
    double lo = -gap - 80.0, hi = 80.0;
    for (int it = 0; it < 70; ++it) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0 ? hi : lo) = mid;
    }
    double eta = 0.5 * (lo + hi);
    // Ec = ec_offset - V and mu = -v_contact
    return ec_offset + v_contact + eta * kt;
}

PoissonBC device_bc(const DeviceSpec & spec, const Mesh2D & mesh, const SampledFields & fields,
                    const NodeMaterials & mats, const Bias & bias) {
    PoissonBC bc(mesh);
    double kt = spec.thermal_energy();
    std::map<std::tuple<double, double, int>, double> cache;
    for (int side = 0; side < 2; ++side) {
        int i = side == 0 ? 0 : mesh.nx;
        double vc = side == 0 ? bias.vs : bias.vd;
        for (int j = 0; j <= mesh.ny; ++j) {
            auto p = mesh.index(i, j);
            auto key = std::tuple{fields.net_doping[p], vc, fields.material_index[p]};
            auto it = cache.find(key);
            if (it == cache.end()) {
                double v = neutral_contact_potential(fields.net_doping[p], vc, mats.bandgap[p], mats.ec_offset[p],
                                                     mats.electron_mass[p], mats.hole_mass[p], kt);
                it = cache.emplace(key, v).first;
            }
            bc.set_dirichlet(i, j, it->second);
        }
    }
    for (const auto & gate : spec.gates) {
        int j = gate.side == GateSide::top ? mesh.ny : 0;
        double vgate = gate_effective_potential(spec, gate, bias.vg);
        for (int i = 0; i <= mesh.nx; ++i) {
            double lo = std::max({mesh.x(i) - 0.5 * mesh.ax, 0.0, gate.x0});
            double hi = std::min({mesh.x(i) + 0.5 * mesh.ax, mesh.lx(), gate.x1});
            if (hi - lo <= 1e-12 || bc.dirichlet[mesh.index(i, j)]) continue;
            bc.add_robin(i, j, gate.capacitance() * (hi - lo), vgate);
        }
    }
    return bc;
}

FieldMap assemble_charge(const FieldMap & n, const FieldMap & p, const FieldMap & doping) {
    require_same_mesh(n, p, "assemble_charge");
    require_same_mesh(n, doping, "assemble_charge");
    FieldMap rho(n.mesh, Quantity::charge_density);
    for (std::size_t k = 0; k < rho.size(); ++k) {
        rho[k] = units::elementary_charge * (p[k] - n[k] + doping[k]);
    }
    return rho;
}

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

double cell_width(int i, int n, double a) { return (i == 0 || i == n) ? 0.5 * a : a; }

} // namespace

PoissonSolver::PoissonSolver(const FieldMap & eps, PoissonBC bc, double rel_tolerance)
    : eps_(eps), bc_(std::move(bc)), tolerance_(rel_tolerance) {
    if (!eps_.mesh.same_grid(bc_.mesh)) throw NumericalError("solve_poisson: permittivity and boundary mesh differ");
    if (!bc_.anchored()) {
        throw NumericalError("solve_poisson: no Dirichlet or Robin anchor; the all-Neumann system is singular");
    }
}

FieldMap PoissonSolver::solve(const FieldMap & rho) const {
    return solve(rho, {}, FieldMap(rho.mesh, Quantity::potential));
}

FieldMap PoissonSolver::solve(const FieldMap & rho, const std::vector<double> & response, const FieldMap & reference) const {
    const Mesh2D & m = eps_.mesh;
    if (!rho.mesh.same_grid(m)) throw NumericalError("solve_poisson: charge and permittivity mesh differ");
    if (!rho.all_finite()) throw NumericalError("solve_poisson: non-finite charge density");

    // unknown numbering skips Dirichlet nodes
    std::vector<int> unknown(m.size(), -1);
    int count = 0;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (!bc_.dirichlet[p]) unknown[p] = count++;
    }
    FieldMap v(m, Quantity::potential);
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (bc_.dirichlet[p]) v[p] = bc_.dirichlet_value[p];
    }
    if (count == 0) return v;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * count);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(count);
    const double to_source = units::q_over_eps0 / units::elementary_charge * units::per_cm3_to_per_nm3;

    for (int i = 0; i <= m.nx; ++i) {
        for (int j = 0; j <= m.ny; ++j) {
            auto p = m.index(i, j);
            int row = unknown[p];
            if (row < 0) continue;
            double wx = cell_width(i, m.nx, m.ax), wy = cell_width(j, m.ny, m.ay);
            double diag = bc_.robin_coeff[p];
            b[row] += to_source * rho[p] * wx * wy + bc_.robin_source[p];
            if (!response.empty()) {
                diag += response[p] * wx * wy;
                b[row] += response[p] * wx * wy * reference[p];
            }
            auto couple = [&](int qi, int qj, double weight) {
                auto q = m.index(qi, qj);
                double c = harmonic(eps_[p], eps_[q]) * weight;
                diag += c;
                if (unknown[q] >= 0) trips.emplace_back(row, unknown[q], -c);
                else b[row] += c * bc_.dirichlet_value[q];
            };
            if (i > 0) couple(i - 1, j, wy / m.ax);
            if (i < m.nx) couple(i + 1, j, wy / m.ax);
            if (j > 0) couple(i, j - 1, wx / m.ay);
            if (j < m.ny) couple(i, j + 1, wx / m.ay);
            trips.emplace_back(row, row, diag);
        }
    }

    Eigen::SparseMatrix<double> a(count, count);
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw NumericalError("solve_poisson: factorization failed");
    Eigen::VectorXd x = ldlt.solve(b);
    double scale = std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
    Eigen::VectorXd r = b - a * x;
    if (r.lpNorm<Eigen::Infinity>() / scale > tolerance_) {
        x += ldlt.solve(r);  // one refinement step
        r = b - a * x;
    }
    last_residual_ = b.isZero(0.0) ? 0.0 : r.lpNorm<Eigen::Infinity>() / scale;
    if (last_residual_ > tolerance_ || !x.allFinite()) {
        throw NumericalError(fmt::format("solve_poisson: residual {:.3e} above tolerance {:.1e}", last_residual_, tolerance_));
    }
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (unknown[p] >= 0) v[p] = x[unknown[p]];
    }
    return v;
}

FieldMap solve_poisson(const FieldMap & rho, const FieldMap & eps, const PoissonBC & bc, double rel_tolerance) {
    return PoissonSolver(eps, bc, rel_tolerance).solve(rho);
}

BandEdges bands_from_potential(const FieldMap & v, const NodeMaterials & mats) {
    if (mats.ec_offset.size() != v.size()) throw NumericalError("bands_from_potential: material map does not match mesh");
    BandEdges out{FieldMap(v.mesh, Quantity::conduction_band), FieldMap(v.mesh, Quantity::valence_band)};
    for (std::size_t p = 0; p < v.size(); ++p) {
        out.ec[p] = mats.ec_offset[p] - v[p];
        out.ev[p] = out.ec[p] - mats.bandgap[p];
    }
    return out;
}

} // namespace tfet
