#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cqed/curve.hpp"
#include "cqed/evolve.hpp"
#include "cqed/hilbert.hpp"
#include "cqed/system.hpp"

// Master-equation model of the driven emitter-cavity system: pulsed
// excitation cycles, spectral-diffusion averaging, and the simulated
// observables (decay traces, excitation spectra, saturation curves,
// detuning maps).

namespace cqed {

// Discretized Gaussian over static emitter-frequency offsets.
struct DiffusionQuadrature {
    std::vector<double> offsets_hz;
    std::vector<double> weights;  // normalized to 1
};

struct SimOptions {
    int fock_levels = 5;       // photon number states (N_max + 1)
    int max_fock_levels = 17;  // ceiling for automatic truncation doubling
    double truncation_tol = 1e-6;
    double dt_record = 1e-9;   // trace sampling step
    int diffusion_points = 21;
    double diffusion_span_sigmas = 4.0;
    // Collection-window quadrature for counts per pulse (trapezoid).
    double window_dt_max = 1e-8;
    long window_min_steps = 400;
    unsigned threads = 0;  // 0 = hardware concurrency, 1 = serial
};

// Mean intracavity photon number for a laser of power p.p_in_w at p.omega_l_hz:
// N_ph = 4 (eta_cav / kappa) / (1 + (2 Delta_c / kappa)^2) * P_in / (hbar omega_a).
double intracavity_photons(const DriveSpec& p, const SystemParams& s);

// Omega = 2 g sqrt(N_ph); Hz in, Hz out.
double rabi_frequency(double n_ph, double g_hz);

// H / hbar = Delta_a sigma+sigma- + Delta_c a†a + g (sigma+ a + sigma- a†)
//          + (Omega/2) (sigma+ + sigma-), in the frame rotating at omega_l.
// Entries are angular (rad/s).
Matrix build_hamiltonian(const SystemParams& s, double omega_l_hz, double omega_rabi_hz,
                         const HilbertSpace& hs);

// The three collapse operators sqrt(kappa) a, sqrt(Gamma0) sigma-,
// sqrt(Gamma_d / 2) sigma_z on the composite space.
std::vector<Matrix> jump_operators(const SystemParams& s, const HilbertSpace& hs);

// Uniform symmetric grid over ±span_sigmas standard deviations of the
// spectral-diffusion Gaussian (FWHM 2 Gamma_sd), weights proportional to the
// Gaussian density and renormalized. gamma_sd = 0 or n_points = 1 collapses
// to a single zero-offset point; n_points must be odd.
DiffusionQuadrature gaussian_quadrature_for_diffusion(double gamma_sd_hz, int n_points,
                                                      double span_sigmas = 4.0);

struct PulseCycle {
    SimCurve decay_trace;     // detected rate eta_sys * kappa * <a†a> (counts/s) vs t
    double counts_per_pulse;  // trace integral over [pulse_end + t0, period]
};

// Evolves the ground state through drive-on / drive-off segments for every
// diffusion offset and returns the weighted-average detected-rate trace and
// collected counts per pulse. Fock truncation is validated at runtime and
// doubled automatically up to max_fock_levels.
PulseCycle simulate_pulse_cycle(const SystemParams& s, const DriveSpec& d,
                                const SimOptions& opts = {});

// Collected counts per pulse only (no trace): the canonical path used by the
// spectra and saturation sweeps; identical inputs give identical values.
double counts_per_pulse(const SystemParams& s, const DriveSpec& d,
                        const SimOptions& opts = {});

struct DecayRateFit {
    double rate = 0.0;         // 1/s (inverse lifetime)
    double uncertainty = 0.0;  // 1/s
    double amplitude = 0.0;
    bool converged = false;
};

// Least-squares single-exponential fit of trace.y on [fit_start, end].
// Throws NumericError when the window is degenerate (flat or non-positive).
DecayRateFit extract_decay_rate(const SimCurve& trace, double fit_start_s);

// Counts per pulse at each laser frequency; N_ph and Omega are recomputed per
// point while the cavity stays fixed relative to the nominal emitter.
SimCurve ple_spectrum(const SystemParams& s, const DriveSpec& d,
                      const std::vector<double>& scan_hz, const SimOptions& opts = {});

// Default scan grid: n points spanning ±span estimated linewidths around the
// nominal emitter frequency.
std::vector<double> default_ple_scan(const SystemParams& s, const DriveSpec& d,
                                     int n_points = 81, double span_linewidths = 2.5);

// Counts per pulse at line center (laser at the nominal emitter frequency)
// for each input power.
SimCurve saturation_curve(const SystemParams& s, const DriveSpec& d_template,
                          const std::vector<double>& powers_w, const SimOptions& opts = {});

// For each cavity detuning, pulse-cycle decay with the laser fixed at the
// nominal emitter frequency; y = fitted decay rate over the bare rate
// Gamma_cav / Gamma_0, sigma = fit uncertainty in the same units.
SimCurve decay_vs_detuning(const SystemParams& s, const DriveSpec& d,
                           const std::vector<double>& detunings_hz,
                           const SimOptions& opts = {});

struct SpectrumMap {
    std::vector<double> detunings_hz;  // rows
    std::vector<double> scan_hz;       // columns
    Eigen::MatrixXd counts;            // counts per pulse
};

// ple_spectrum row by row over the cavity detunings.
SpectrumMap spectrum_map_2d(const SystemParams& s, const DriveSpec& d,
                            const std::vector<double>& detunings_hz,
                            const std::vector<double>& scan_hz, const SimOptions& opts = {});

}  // namespace cqed
