#include "tfet/negf.hpp"

#include <cmath>

#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/units.hpp"

namespace tfet {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

LeadModes lead_modes(const MatrixXd & column, const VectorXd & coupling) {
    if (column.rows() != column.cols() || column.rows() != coupling.size()) {
        throw NumericalError("lead_modes: column block and coupling sizes differ");
    }
    double scale = std::max(column.cwiseAbs().maxCoeff(), 1.0);
    if ((column - column.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NumericalError("lead_modes: lead column Hamiltonian is not Hermitian");
    }
    double t = coupling[0];
    if ((coupling.array() - t).abs().maxCoeff() > 1e-12 * std::abs(t)) {
        throw NumericalError("lead_modes: lead hopping varies across the contact column; the lead needs a uniform mass");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(column);
    return LeadModes{es.eigenvectors(), es.eigenvalues(), t};
}

LeadModes lead_modes(const DeviceHamiltonian & h, Lead lead) {
    int nx = h.mesh.nx;
    return lead == Lead::source ? lead_modes(h.lead_block(0), h.column_coupling(0))
                                : lead_modes(h.lead_block(nx), h.column_coupling(nx + 1));
}

cplx surface_g(cplx x, double t) {
    if (t == 0) return 1.0 / x;
    double t2 = t * t;
    cplx s = std::sqrt(x * x - 4.0 * t2);
    // roots multiply to 1/t^2; form the larger one without cancellation
    cplx big = std::abs(x + s) >= std::abs(x - s) ? (x + s) / (2.0 * t2) : (x - s) / (2.0 * t2);
    cplx small = 1.0 / (t2 * big);
    if (std::abs(std::abs(big) - std::abs(small)) <= 1e-14 * std::abs(big)) {
        return small.imag() <= 0 ? small : big;  // on the band, no damping to decide: retarded branch
    }
    return small;
}

LeadSelfEnergy lead_self_energy(const LeadModes & modes, double e, double eta, Lead lead) {
    LeadSelfEnergy s;
    s.lead = lead;
    s.t = modes.t;
    s.q = modes.q;
    const auto n = modes.eps.size();
    s.x.resize(n);
    s.g.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        s.x[m] = cplx(e - modes.eps[m], eta);
        s.g[m] = surface_g(s.x[m], modes.t);
    }
    MatrixXcd qc = modes.q.cast<cplx>();
    s.sigma = (modes.t * modes.t) * qc * s.g.asDiagonal() * qc.transpose();
    return s;
}

LeadSelfEnergy lead_self_energy(const MatrixXd & column, double t, double e, double eta, Lead lead) {
    return lead_self_energy(lead_modes(column, VectorXd::Constant(column.rows(), t)), e, eta, lead);
}

double LeadSelfEnergy::residual() const {
    double worst = 0;
    for (Eigen::Index m = 0; m < g.size(); ++m) {
        worst = std::max(worst, std::abs(-t * t * g[m] * g[m] + x[m] * g[m] - 1.0));
    }
    return worst;
}

VectorXd LeadSelfEnergy::mode_broadening() const {
    VectorXd w(g.size());
    for (Eigen::Index m = 0; m < g.size(); ++m) w[m] = std::max(0.0, -2.0 * t * t * g[m].imag());
    return w;
}

MatrixXcd LeadSelfEnergy::gamma_factor() const {
    return q.cast<cplx>() * mode_broadening().cwiseSqrt().cast<cplx>().asDiagonal();
}

MatrixXcd broadening(const MatrixXcd & sigma) { return cplx(0, 1) * (sigma - sigma.adjoint()); }

bool GreensFunction::finite() const {
    auto ok = [](const std::vector<MatrixXcd> & v) {
        return std::all_of(v.begin(), v.end(), [](const MatrixXcd & m) { return m.allFinite(); });
    };
    return ok(first) && ok(last) && ok(diag);
}

namespace {

MatrixXcd diagonal_block(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2, int i,
                         cplx z) {
    MatrixXcd m = -h.column_block(i).cast<cplx>();
    m.diagonal().array() += z;
    if (i == 0) m -= s1.sigma;
    if (i == h.mesh.nx) m -= s2.sigma;
    return m;
}

// tau * g * tau for diagonal tau
MatrixXcd sandwich(const VectorXd & tau, const MatrixXcd & g) { return tau.asDiagonal() * g * tau.asDiagonal(); }

MatrixXcd invert(const MatrixXcd & m) { return m.partialPivLu().inverse(); }

void check_leads(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2) {
    auto n = h.mesh.nodes_y();
    if (s1.sigma.rows() != n || s2.sigma.rows() != n) {
        throw NumericalError(fmt::format("greens_function: self-energy blocks must be {0}x{0}", n));
    }
}

GreensFunction recursive(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2, cplx z,
                         const GreensRequest & req) {
    const int nlast = h.mesh.nx;
    GreensFunction out;
    std::vector<MatrixXcd> mdiag(nlast + 1);
    std::vector<VectorXd> tau(nlast + 2);
    for (int i = 0; i <= nlast; ++i) mdiag[i] = diagonal_block(h, s1, s2, i, z);
    for (int i = 1; i <= nlast; ++i) tau[i] = h.column_coupling(i);

    std::vector<MatrixXcd> gl, gr;
    if (req.last_column || req.diagonal) {
        gl.resize(nlast + 1);
        gl[0] = invert(mdiag[0]);
        for (int i = 1; i <= nlast; ++i) gl[i] = invert(mdiag[i] - sandwich(tau[i], gl[i - 1]));
    }
    if (req.first_column || req.diagonal) {
        gr.resize(nlast + 1);
        gr[nlast] = invert(mdiag[nlast]);
        for (int i = nlast - 1; i >= 0; --i) gr[i] = invert(mdiag[i] - sandwich(tau[i + 1], gr[i + 1]));
    }
    if (req.last_column) {
        out.last.resize(nlast + 1);
        out.last[nlast] = gl[nlast];
        for (int i = nlast - 1; i >= 0; --i) out.last[i] = -gl[i] * (tau[i + 1].asDiagonal() * out.last[i + 1]);
    }
    if (req.first_column) {
        out.first.resize(nlast + 1);
        out.first[0] = gr[0];
        for (int i = 1; i <= nlast; ++i) out.first[i] = -gr[i] * (tau[i].asDiagonal() * out.first[i - 1]);
    }
    if (req.diagonal) {
        out.diag.resize(nlast + 1);
        for (int i = 0; i <= nlast; ++i) {
            MatrixXcd m = mdiag[i];
            if (i > 0) m -= sandwich(tau[i], gl[i - 1]);
            if (i < nlast) m -= sandwich(tau[i + 1], gr[i + 1]);
            out.diag[i] = invert(m);
        }
    }
    return out;
}

MatrixXcd dense_system(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2, cplx z) {
    const int ny1 = h.mesh.nodes_y();
    MatrixXcd m = -MatrixXd(h.sparse()).cast<cplx>();
    m.diagonal().array() += z;
    m.topLeftCorner(ny1, ny1) -= s1.sigma;
    m.bottomRightCorner(ny1, ny1) -= s2.sigma;
    return m;
}

GreensFunction dense(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2, cplx z,
                     const GreensRequest & req) {
    const int ny1 = h.mesh.nodes_y(), nlast = h.mesh.nx;
    MatrixXcd g = dense_system(h, s1, s2, z).partialPivLu().inverse();
    GreensFunction out;
    auto block = [&](int i, int k) { return MatrixXcd(g.block(i * ny1, k * ny1, ny1, ny1)); };
    for (int i = 0; i <= nlast; ++i) {
        if (req.first_column) out.first.push_back(block(i, 0));
        if (req.last_column) out.last.push_back(block(i, nlast));
        if (req.diagonal) out.diag.push_back(block(i, i));
    }
    return out;
}

double frobenius_sq(const MatrixXcd & m) { return m.squaredNorm(); }

} // namespace

GreensFunction greens_function(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2,
                               double e, double eta, SolverMode mode, const GreensRequest & request) {
    check_leads(h, s1, s2);
    cplx z(e, eta);
    GreensFunction g = mode == SolverMode::dense ? dense(h, s1, s2, z, request) : recursive(h, s1, s2, z, request);
    g.mesh = h.mesh;
    g.e = e;
    g.eta = eta;
    return g;
}

double greens_residual(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2,
                       const GreensFunction & g) {
    const int nlast = h.mesh.nx, ny1 = h.mesh.nodes_y();
    cplx z(g.e, g.eta);
    double worst = 0;
    auto check = [&](const std::vector<MatrixXcd> & col, int source_block) {
        if (col.empty()) return;
        for (int i = 0; i <= nlast; ++i) {
            MatrixXcd r = diagonal_block(h, s1, s2, i, z) * col[i];
            if (i > 0) r += h.column_coupling(i).asDiagonal() * col[i - 1];
            if (i < nlast) r += h.column_coupling(i + 1).asDiagonal() * col[i + 1];
            if (i == source_block) r -= MatrixXcd::Identity(ny1, ny1);
            worst = std::max(worst, r.cwiseAbs().maxCoeff());
        }
    };
    check(g.first, 0);
    check(g.last, nlast);
    return worst;
}

double transmission(const GreensFunction & g, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2) {
    if (g.last.empty()) throw NumericalError("transmission: drain column of G was not computed");
    return frobenius_sq(s1.gamma_factor().adjoint() * g.last.front() * s2.gamma_factor());
}

double transmission_reverse(const GreensFunction & g, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2) {
    if (g.first.empty()) throw NumericalError("transmission_reverse: source column of G was not computed");
    return frobenius_sq(s2.gamma_factor().adjoint() * g.first.back() * s1.gamma_factor());
}

Ldos spectral_and_ldos(const GreensFunction & g, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2) {
    const Mesh2D & m = g.mesh;
    const double norm = 1.0 / (units::pi * m.ax * m.ay);
    Ldos out;
    auto fill = [&](const std::vector<MatrixXcd> & cols, const MatrixXcd & y, VectorXd & d) {
        d = VectorXd::Zero(static_cast<Eigen::Index>(m.size()));
        if (cols.empty()) return;
        for (int i = 0; i <= m.nx; ++i) {
            MatrixXcd gy = cols[i] * y;
            d.segment(static_cast<Eigen::Index>(m.index(i, 0)), m.nodes_y()) = gy.rowwise().squaredNorm() * norm;
        }
    };
    fill(g.first, s1.gamma_factor(), out.d1);
    fill(g.last, s2.gamma_factor(), out.d2);
    return out;
}

VectorXd total_ldos(const GreensFunction & g) {
    if (g.diag.empty()) throw NumericalError("total_ldos: diagonal blocks of G were not computed");
    const Mesh2D & m = g.mesh;
    VectorXd d(static_cast<Eigen::Index>(m.size()));
    for (int i = 0; i <= m.nx; ++i) {
        for (int j = 0; j <= m.ny; ++j) d[static_cast<Eigen::Index>(m.index(i, j))] = -2.0 * g.diag[i](j, j).imag();
    }
    return d / (units::pi * m.ax * m.ay);
}

TruncatedResult truncated_spectral(const DeviceHamiltonian & h, const LeadSelfEnergy & s1, const LeadSelfEnergy & s2,
                                   double e, double eta, int r) {
    check_leads(h, s1, s2);
    TruncatedResult out;
    const int ny1 = h.mesh.nodes_y(), nlast = h.mesh.nx;
    r = std::clamp(r, 0, ny1);
    out.modes = r;
    if (r == 0) return out;

    const auto n = static_cast<int>(h.dim());
    std::vector<Eigen::Triplet<cplx>> trips;
    Eigen::SparseMatrix<double> hs = h.sparse();
    for (int k = 0; k < hs.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(hs, k); it; ++it) {
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), -it.value());
        }
    }
    for (int p = 0; p < n; ++p) trips.emplace_back(p, p, cplx(e, eta));
    int off = nlast * ny1;
    for (int a = 0; a < ny1; ++a) {
        for (int b = 0; b < ny1; ++b) {
            trips.emplace_back(a, b, -s1.sigma(a, b));
            trips.emplace_back(off + a, off + b, -s2.sigma(a, b));
        }
    }
    Eigen::SparseMatrix<cplx> m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu(m);
    if (lu.info() != Eigen::Success) throw NumericalError("truncated_spectral: sparse factorization failed");

    MatrixXcd rhs = MatrixXcd::Zero(n, r);
    rhs.topRows(ny1) = s1.gamma_factor().leftCols(r);
    MatrixXcd yt = lu.solve(rhs);
    out.d1 = yt.rowwise().squaredNorm() / (units::pi * h.mesh.ax * h.mesh.ay);
    out.transmission = frobenius_sq(s2.gamma_factor().adjoint() * yt.bottomRows(ny1));
    return out;
}

NegfSlice compute_slice_at(const DeviceHamiltonian & h, double e, double kz, const SliceOptions & opt,
                           const LeadModes * left, const LeadModes * right) {
    LeadModes lm = left ? *left : lead_modes(h, Lead::source);
    LeadModes rm = right ? *right : lead_modes(h, Lead::drain);
    auto s1 = lead_self_energy(lm, e, opt.eta, Lead::source);
    auto s2 = lead_self_energy(rm, e, opt.eta, Lead::drain);
    GreensRequest req{opt.ldos, opt.ldos || opt.transmission, false};
    auto g = greens_function(h, s1, s2, e, opt.eta, opt.mode, req);

    NegfSlice out;
    out.e = e;
    out.kz = kz;
    out.lead_residual = std::max(s1.residual(), s2.residual());
    if (opt.transmission) out.transmission = transmission(g, s1, s2);
    if (opt.ldos) {
        auto d = spectral_and_ldos(g, s1, s2);
        out.d1 = std::move(d.d1);
        out.d2 = std::move(d.d2);
    }
    return out;
}

} // namespace tfet
