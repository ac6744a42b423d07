#pragma once

#include <array>
#include <functional>

#include "cqed/constants.hpp"

// Closed-form cavity-QED, photon-budget, and auxiliary spectroscopy formulas;
// everything here is computable without the master equation. All frequencies
// and rates are ordinary (non-angular) Hz unless noted.

namespace cqed {

// Split of the bare emitter decay rate into coherent line, phonon sideband,
// and nonradiative parts.
struct RateBudget {
    double gamma_zpl = 0.0;  // Hz
    double gamma_psb = 0.0;  // Hz
    double gamma_nr = 0.0;   // Hz
    double dw = 0.0;         // Debye-Waller factor
    double eta_qe = 0.0;     // quantum efficiency

    double gamma0() const { return gamma_zpl + gamma_psb + gamma_nr; }
};

struct EfficiencyChain {
    double eta_cav = 0.0;
    double eta_gc = 0.0;
    double eta_path = 0.0;
    double eta_snspd = 0.0;
};

// Fit parameters of the detuning-dependent decay-enhancement Lorentzian.
struct PurcellFit {
    double p_t = 0.0;             // on-resonance enhancement above the asymptote
    double kappa_tilde = 0.0;     // characteristic linewidth, Hz
    double gamma_inf_ratio = 1.0; // asymptotic decay rate over the bare rate
};

struct ZeemanModel {
    double delta_g = 0.0;    // |g-factor difference|
    double linewidth = 0.0;  // optical linewidth, Hz
    double mu_b_over_h = constants::mu_bohr_over_h;  // Hz / T
};

struct ThermalModel {
    double p0 = 0.0;       // zero-temperature linewidth, Hz
    double p_t_coeff = 0.0;  // broadening coefficient, Hz
    double e_a = 0.0;      // activation energy, J
    double k_b = constants::k_boltzmann;
};

// Gamma_cav / Gamma_0 = P_t / (1 + (2 delta_ac / kappa_tilde)^2) + Gamma_inf/Gamma_0.
double purcell_lorentzian(double delta_ac_hz, const PurcellFit& fit);

// gamma_ZPL = DW * eta_QE * Gamma0, gamma_PSB = (1-DW) * eta_QE * Gamma0,
// gamma_nr = (1 - eta_QE) * Gamma0.
RateBudget rate_decomposition(double gamma0_hz, double dw, double eta_qe);

// Fraction of emission entering the resonant cavity mode, P_t / (P_t + 1).
double beta_factor(double p_t);

// Lower bound on the coherent-line Purcell factor, P_t / DW.
double zpl_purcell_bound(double p_t, double dw);

// Lower bound on the quantum efficiency: crossing of the measured bound
// P_t/(DW * eta) with the simulated ceiling eta * P_sim(eta = 1), i.e.
// sqrt(P_t / (DW * p_sim_unity_qe)). Throws NumericError when > 1 (infeasible).
double qe_lower_bound(double p_t, double dw, double p_sim_unity_qe);

// Transition dipole moment (C·m) from the radiative rate with the local
// field correction:
//   DW*etaQE*Gamma0(angular) = (3n²/(2n²+1))² · n d² ω³ / (3π ε₀ ħ c³).
double dipole_moment(double dw, double eta_qe, double gamma0_hz, double omega_hz,
                     double n_host);

// g = sqrt(P_sim * kappa_tilde * Gamma0) / 2, inverting P = 4g²/(κ̃ Γ₀).
// This is the supported route to the coupling rate. A direct evaluation from
// the dipole moment and the cavity mode volume (0.031 um³ for the reference
// cavity) is intentionally not provided: it needs a field-normalization
// convention for the local-field-corrected dipole that the simulated Purcell
// factor already absorbs.
double coupling_from_sim_purcell(double p_sim, double kappa_tilde_hz, double gamma0_hz);

// eta_sys = eta_cav * eta_gc * eta_path * eta_snspd.
double system_efficiency(const EfficiencyChain& chain);

// Under-coupled branch of R = (1 - 2 eta_cav)^2: eta_cav = (1 - sqrt(R)) / 2.
// Set over_coupled to select the other root.
double eta_cav_from_reflection(double r, bool over_coupled = false);

// Saturated detected counts per excitation pulse,
// 0.5 * eta_sys * beta * exp(-t0 / tau).
double saturation_counts(double eta_sys, double beta, double t0_s, double tau_s);

// Waveguide-coupling efficiency range from a saturated count level:
// eta_wg(etaQE) = c_sat * e^{t0/tau} / (0.5 * etaQE * eta_col * eta_path * eta_snspd),
// evaluated at both ends of the quantum-efficiency range (upper bound from
// the lower etaQE). Throws NumericError when the result exceeds 1.
std::array<double, 2> waveguide_efficiency_bounds(double c_sat, double t0_s, double tau_s,
                                                  double eta_col, double eta_path,
                                                  double eta_snspd,
                                                  std::array<double, 2> eta_qe_range);

// Signal-to-noise-limited autocorrelation floor, (2A + 1) / (A + 1)^2.
double g2_snr_limit(double snr);

// Field-dependent excitation amplitude, Γ² / (Γ² + (|Δg| μ_B B / h)²).
double zeeman_amplitude(double b_tesla, const ZeemanModel& m);

// Γ(T) = P0 + P_T / (exp(Ea / kB T) - 1).
double thermal_linewidth(double temperature_k, const ThermalModel& m);

// Nearest-neighbor statistics of randomly placed spins at density rho (cm^-3):
// mean separation d_nn = Γ(4/3) (4πρ/3)^{-1/3} ≈ 0.554 ρ^{-1/3} and the
// distance pdf w(r) = 4πρ r² exp(-(4πρ/3) r³), r in cm.
struct NearestNeighbor {
    double d_nn_cm = 0.0;
    std::function<double(double)> pdf;  // w(r), r in cm
};
NearestNeighbor nuclear_spin_separation(double rho_per_cm3);

// kappa_tilde ≈ kappa + 2 Gamma_d (valid when spectral diffusion is negligible).
double kappa_tilde_approx(double kappa_hz, double gamma_d_hz);

}  // namespace cqed
