#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tfet/field.hpp"

namespace tfet {

// Pentadiagonal finite-difference Hamiltonian with position-dependent mass,
// -d/dx (C/m) d/dx - d/dy (C/m) d/dy + U, with C = hbar^2 / 2m0. Hoppings
// enter the matrix as -t; the one-past-the-edge hoppings use the edge node's own
// mass, so the y boundary acts as a hard wall one node out and the x boundary
// hopping is the one a lead continuing the contact column would have.
struct DeviceHamiltonian {
    Mesh2D mesh;
    std::vector<double> diag;  // N
    // tx at (i, j), i = 0..nx+1, couples columns i-1 and i (i = 0 and nx+1 from the edge column)
    std::vector<double> tx;
    // ty at (i, j), j = 0..ny+1, couples rows j-1 and j (j = 0 and ny+1 from the edge row)
    std::vector<double> ty;

    double hop_x(int i, int j) const { return tx[static_cast<std::size_t>(i) * mesh.nodes_y() + j]; }
    double hop_y(int i, int j) const { return ty[static_cast<std::size_t>(i) * (mesh.ny + 2) + j]; }

    std::size_t dim() const { return diag.size(); }
    // (ny+1) x (ny+1) diagonal block of column i.
    Eigen::MatrixXd column_block(int i) const;
    // Column block of the semi-infinite lead attached at column 0 or nx: the edge
    // column with both x hoppings equal to the outer one.
    Eigen::MatrixXd lead_block(int i) const;
    // Hopping vector between columns i-1 and i (entries of the off-diagonal block are -t).
    Eigen::VectorXd column_coupling(int i) const;
    Eigen::SparseMatrix<double> sparse() const;
    Eigen::MatrixXd dense() const;
};

// Flux-continuous half-node mass 2 m1 m2 / (m1 + m2).
double half_node_mass(double m1, double m2);

DeviceHamiltonian assemble(const FieldMap & u, const FieldMap & mass);
// Same, reusing the buffers of `out`.
void assemble(const FieldMap & u, const FieldMap & mass, DeviceHamiltonian & out);
// Overwrite only the potential, keeping the kinetic part (same mass field).
void replace_potential(DeviceHamiltonian & h, const FieldMap & old_u, const FieldMap & new_u);

} // namespace tfet
