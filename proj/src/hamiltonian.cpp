#include "tfet/hamiltonian.hpp"

#include <fmt/format.h>

#include "tfet/errors.hpp"
#include "tfet/units.hpp"

namespace tfet {

double half_node_mass(double m1, double m2) { return 2.0 * m1 * m2 / (m1 + m2); }

void assemble(const FieldMap & u, const FieldMap & mass, DeviceHamiltonian & out) {
    require_same_mesh(u, mass, "assemble");
    const Mesh2D & m = u.mesh;
    if (m.nx < 1) throw NumericalError("assemble: the mesh needs at least two columns");
    for (std::size_t p = 0; p < mass.size(); ++p) {
        if (!(mass[p] > 0)) throw NumericalError(fmt::format("assemble: non-positive effective mass {} at node {}", mass[p], p));
    }
    const int nyp = m.nodes_y();
    const double cx = units::hbar2_over_2m0 / (m.ax * m.ax);
    const double cy = m.ny > 0 ? units::hbar2_over_2m0 / (m.ay * m.ay) : 0.0;

    out.mesh = m;
    out.tx.resize(static_cast<std::size_t>(m.nx + 2) * nyp);
    out.ty.resize(static_cast<std::size_t>(m.nx + 1) * (m.ny + 2));
    out.diag.resize(m.size());

    for (int j = 0; j < nyp; ++j) {
        for (int i = 1; i <= m.nx; ++i) {
            out.tx[static_cast<std::size_t>(i) * nyp + j] = cx / half_node_mass(mass(i - 1, j), mass(i, j));
        }
        // the leads continue the contact columns, so their hopping sees only that column's mass
        out.tx[j] = cx / mass(0, j);
        out.tx[static_cast<std::size_t>(m.nx + 1) * nyp + j] = cx / mass(m.nx, j);
    }
    const int row = m.ny + 2;
    for (int i = 0; i <= m.nx; ++i) {
        double * t = &out.ty[static_cast<std::size_t>(i) * row];
        if (m.ny == 0) {
            t[0] = t[1] = 0.0;
            continue;
        }
        for (int j = 1; j <= m.ny; ++j) t[j] = cy / half_node_mass(mass(i, j - 1), mass(i, j));
        t[0] = cy / mass(i, 0);
        t[m.ny + 1] = cy / mass(i, m.ny);
    }
    for (int i = 0; i <= m.nx; ++i) {
        for (int j = 0; j < nyp; ++j) {
            out.diag[m.index(i, j)] = out.hop_x(i, j) + out.hop_x(i + 1, j) + out.hop_y(i, j) + out.hop_y(i, j + 1) + u(i, j);
        }
    }
}

DeviceHamiltonian assemble(const FieldMap & u, const FieldMap & mass) {
    DeviceHamiltonian h;
    assemble(u, mass, h);
    return h;
}

void replace_potential(DeviceHamiltonian & h, const FieldMap & old_u, const FieldMap & new_u) {
    for (std::size_t p = 0; p < h.diag.size(); ++p) h.diag[p] += new_u[p] - old_u[p];
}

Eigen::MatrixXd DeviceHamiltonian::column_block(int i) const {
    const int n = mesh.nodes_y();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        b(j, j) = diag[mesh.index(i, j)];
        if (j > 0) b(j, j - 1) = b(j - 1, j) = -hop_y(i, j);
    }
    return b;
}

Eigen::MatrixXd DeviceHamiltonian::lead_block(int i) const {
    if (i != 0 && i != mesh.nx) throw NumericalError("lead_block: leads attach at the first or last column only");
    Eigen::MatrixXd b = column_block(i);
    const int outer = i == 0 ? 0 : mesh.nx + 1, inner = i == 0 ? 1 : mesh.nx;
    for (int j = 0; j < mesh.nodes_y(); ++j) b(j, j) += hop_x(outer, j) - hop_x(inner, j);
    return b;
}

Eigen::VectorXd DeviceHamiltonian::column_coupling(int i) const {
    Eigen::VectorXd t(mesh.nodes_y());
    for (int j = 0; j < mesh.nodes_y(); ++j) t[j] = hop_x(i, j);
    return t;
}

Eigen::SparseMatrix<double> DeviceHamiltonian::sparse() const {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * dim());
    for (int i = 0; i <= mesh.nx; ++i) {
        for (int j = 0; j <= mesh.ny; ++j) {
            auto p = static_cast<int>(mesh.index(i, j));
            trips.emplace_back(p, p, diag[p]);
            if (i > 0) {
                auto q = static_cast<int>(mesh.index(i - 1, j));
                trips.emplace_back(p, q, -hop_x(i, j));
                trips.emplace_back(q, p, -hop_x(i, j));
            }
            if (j > 0) {
                trips.emplace_back(p, p - 1, -hop_y(i, j));
                trips.emplace_back(p - 1, p, -hop_y(i, j));
            }
        }
    }
    Eigen::SparseMatrix<double> s(static_cast<int>(dim()), static_cast<int>(dim()));
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

Eigen::MatrixXd DeviceHamiltonian::dense() const { return Eigen::MatrixXd(sparse()); }

} // namespace tfet
