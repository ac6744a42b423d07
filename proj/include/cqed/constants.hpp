#pragma once

// CODATA 2018 physical constants, SI units.

namespace cqed::constants {

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double c_light = 2.99792458e8;      // m / s
inline constexpr double eps0 = 8.8541878128e-12;     // F / m
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double mu_bohr = 9.2740100783e-24;  // J / T
inline constexpr double electron_volt = 1.602176634e-19;  // J

inline constexpr double pi = 3.14159265358979323846264338328;
inline constexpr double two_pi = 2.0 * pi;

// Bohr magneton over Planck constant, Hz / T (= 13.996 GHz/T).
inline constexpr double mu_bohr_over_h = mu_bohr / h_planck;

}  // namespace cqed::constants

namespace cqed {

// All rates and frequencies are stored as angular quantities (rad/s)
// inside the solver layers; every public interface speaks ordinary
// frequencies (Hz). These two helpers are the only place the 2*pi lives.
inline constexpr double angular(double hz) { return constants::two_pi * hz; }
inline constexpr double ordinary(double rad_per_s) { return rad_per_s / constants::two_pi; }

}  // namespace cqed
