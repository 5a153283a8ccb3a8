#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <lapacke.h>

#include "tfet/carriers.hpp"
#include "tfet/errors.hpp"
#include "tfet/fermi.hpp"
#include "tfet/units.hpp"

namespace tfet {

namespace {

// Copies the boundary columns `ext` times on each side.
FieldMap extend(const FieldMap & f, int ext) {
    Mesh2D m = f.mesh;
    m.nx += 2 * ext;
    FieldMap out(m, f.quantity);
    for (int i = 0; i <= m.nx; ++i) {
        int src = std::clamp(i - ext, 0, f.mesh.nx);
        for (int j = 0; j <= m.ny; ++j) out(i, j) = f(src, j);
    }
    return out;
}

} // namespace

ClosedResult closed_boundary_density(const CarrierProblem & problem, double kt, const ClosedOptions & opt) {
    const Mesh2D & m = problem.u.mesh;
    ClosedResult out;
    out.density = FieldMap(m, problem.kind == CarrierKind::electron ? Quantity::electron_density : Quantity::hole_density);

    double decay = std::sqrt(units::hbar2_over_2m0 / (problem.mass.min() * kt));
    if (opt.extension < 2.0 * decay) {
        out.warnings.push_back(fmt::format("closed boundary: lead extension {:.3g} nm is shorter than two decay lengths ({:.3g} nm)",
                                           opt.extension, 2.0 * decay));
    }
    int ext = static_cast<int>(std::lround(opt.extension / m.ax));
    FieldMap u = extend(problem.u, ext), mass = extend(problem.mass, ext);
    DeviceHamiltonian h = assemble(u, mass);

    double vl = u.min() - 1e-9;
    double vu = std::max(problem.levels.mu1, problem.levels.mu2) + opt.tail * kt;
    if (!(vu > vl)) return out;

    const auto n = static_cast<lapack_int>(h.dim());
    Eigen::MatrixXd a = h.dense();
    Eigen::VectorXd w(n);
    Eigen::MatrixXd z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'U', n, a.data(), n, vl, vu, 0, 0, 0.0, &found,
                                     w.data(), z.data(), n, support.data());
    if (info != 0) throw NumericalError(fmt::format("closed_boundary_density: eigensolver failed (info {})", info));
    out.states = found;

    const int nyp = m.nodes_y();
    const double half = 0.5 * (h.mesh.nx);  // column index of the device midpoint in the extended mesh
    const double norm = 2.0 / (m.ax * m.ay);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size()));
    for (lapack_int s = 0; s < found; ++s) {
        auto psi = z.col(s);
        double left = 0;
        for (int i = 0; i <= h.mesh.nx; ++i) {
            double share = i < half ? 1.0 : (i == half ? 0.5 : 0.0);
            if (share == 0) break;
            left += share * psi.segment(static_cast<Eigen::Index>(i) * nyp, nyp).squaredNorm();
        }
        double f1 = fd_half_neg((problem.levels.mu1 - w[s]) / kt);
        double f2 = fd_half_neg((problem.levels.mu2 - w[s]) / kt);
        double occ = left > 0.5 ? f1 : (left < 0.5 ? f2 : 0.5 * (f1 + f2));
        acc += occ * psi.segment(static_cast<Eigen::Index>(ext) * nyp, static_cast<Eigen::Index>(m.size())).cwiseAbs2();
    }
    for (std::size_t p = 0; p < m.size(); ++p) {
        double pref = transverse_occupancy(problem.mass[p], kt, 0.0) / fd_half_neg(0.0);
        out.density[p] = norm * pref * acc[static_cast<Eigen::Index>(p)] * units::per_nm3_to_per_cm3;
    }
    return out;
}

} // namespace tfet
