#pragma once

namespace tfet {

// Fermi-Dirac occupation 1 / (1 + exp((e - mu) / kt)); safe for any finite argument.
double fermi(double mu, double e, double kt);

// Normalized complete Fermi-Dirac integrals,
// F_j(x) = 1/Gamma(j+1) * int_0^inf t^j / (1 + exp(t - x)) dt.
// fd_half_neg uses a cached table with Hermite interpolation on [-50, 100].
double fd_half_neg(double x);
double fd_half(double x);

// Direct quadrature, no table. Slow; the table and the tests are built from it.
double fd_half_neg_quadrature(double x);

// Carriers per nm of a transverse (k_z) continuum of mass m at occupation
// set by x = (mu - E)/kT: sqrt(m kT / (2 pi hbar^2)) F_{-1/2}(x), in nm^-1.
double transverse_occupancy(double mass, double kt, double x);

// Effective density of states 2 (m kT / (2 pi hbar^2))^{3/2} in nm^-3.
double effective_dos(double mass, double kt);

// Bulk parabolic-band density Nc F_{1/2}(x) in nm^-3.
double bulk_density(double mass, double kt, double x);

} // namespace tfet
