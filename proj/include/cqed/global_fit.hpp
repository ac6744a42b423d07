#pragma once

#include <cstdint>

#include "cqed/config.hpp"
#include "cqed/curve.hpp"
#include "cqed/optimize.hpp"
#include "cqed/system.hpp"

// Global fit of (g, Gamma_d, Gamma_sd) against three datasets at once:
// counts saturation vs power, spectrum linewidth vs power, and decay-rate
// enhancement vs cavity detuning. The model values come from the
// master-equation simulation; the optimizer is basin hopping over Nelder-Mead.

namespace cqed {

struct TripleDataset {
    SimCurve saturation;          // x: W, y: counts per pulse
    SimCurve linewidth_vs_power;  // x: W, y: Gaussian-fitted FWHM, Hz
    SimCurve decay_vs_detuning;   // x: Hz, y: Gamma_cav / Gamma_0
};

struct GlobalFitConfig {
    SystemParams base;  // fixed parameters; g / gamma_d / gamma_sd come from the candidate
    DriveSpec drive;    // template; power and laser frequency vary per point
    FitSettings settings;
};

// Free parameters, in order: g_hz, gamma_d_hz, gamma_sd_hz, background
// (additive counts-per-pulse nuisance on the saturation dataset only).
inline constexpr int kGlobalFitParams = 4;

// Cost: sum over datasets of weight * sum_i ((model_i - data_i) / scale)^2
// with scale = max |data| per dataset. Truncation failures during candidate
// evaluation count as infinite cost (the point is rejected). Deterministic
// for a fixed seed.
FitResult global_cqed_fit(const TripleDataset& data, const GlobalFitConfig& cfg,
                          std::uint64_t seed);

// Model curves at the given parameters on the dataset abscissas (overlays,
// residual checks, synthetic data).
TripleDataset evaluate_model(double g_hz, double gamma_d_hz, double gamma_sd_hz,
                             double background, const TripleDataset& abscissas,
                             const GlobalFitConfig& cfg);

// Synthetic triple dataset from ground-truth parameters with multiplicative
// Gaussian noise of the given fraction (sigma columns carry the 1-sigma
// levels). Deterministic for a fixed seed.
TripleDataset synthesize_datasets(double g_hz, double gamma_d_hz, double gamma_sd_hz,
                                  const std::vector<double>& powers_w,
                                  const std::vector<double>& linewidth_powers_w,
                                  const std::vector<double>& detunings_hz,
                                  const GlobalFitConfig& cfg, double noise_fraction,
                                  std::uint64_t seed);

}  // namespace cqed
