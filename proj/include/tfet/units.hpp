#pragma once

// Repo-wide units: energy eV, length nm, mass in m0, temperature K,
// densities cm^-3 at interfaces and nm^-3 internally.
namespace tfet::units {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double electron_mass = 9.1093837015e-31; // kg
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double boltzmann = 1.380649e-23;      // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double pi = 3.14159265358979323846;

// hbar^2 / (2 m0) in eV nm^2
inline constexpr double hbar2_over_2m0 = hbar * hbar / (2.0 * electron_mass) / elementary_charge * 1e18;
// k_B in eV/K
inline constexpr double boltzmann_ev = boltzmann / elementary_charge;
// q / eps0 in V nm, so that -div(eps_r grad V) = (q/eps0) N with N in nm^-3
inline constexpr double q_over_eps0 = elementary_charge / vacuum_permittivity * 1e9;
// eps0 in F/nm
inline constexpr double eps0_per_nm = vacuum_permittivity * 1e-9;
// q^2 / hbar in A/V: current prefactor when energies are in eV
inline constexpr double q2_over_hbar = elementary_charge * elementary_charge / hbar;

inline constexpr double per_nm3_to_per_cm3 = 1e21;
inline constexpr double per_cm3_to_per_nm3 = 1e-21;

inline constexpr double thermal_energy(double temperature_k) { return boltzmann_ev * temperature_k; }

} // namespace tfet::units
