#include <doctest.h>

#include <cmath>

#include "cqed/global_fit.hpp"

using namespace cqed;

namespace {

// Small, cheap fit setup: reduced sweeps and simulation profile so the
// nested-model property check stays under a couple of minutes. Full-accuracy
// round-trip recovery runs in the acceptance battery.
GlobalFitConfig cheap_config() {
    GlobalFitConfig cfg;
    cfg.base = SystemParams{};
    cfg.drive = DriveSpec{};
    cfg.settings.sim = fit_sim_defaults();
    cfg.settings.sim.diffusion_points = 7;
    cfg.settings.sim.threads = 2;
    cfg.settings.linewidth_scan_points = 17;
    cfg.settings.hops = 0;
    cfg.settings.nm_max_eval = 80;
    cfg.settings.nm_tol = 1e-7;
    return cfg;
}

}  // namespace

TEST_CASE("restricting spectral diffusion inflates dephasing and the cost") {
    const double g_true = 42.4e6, gd_true = 0.645e9, gsd_true = 1.69e9;
    GlobalFitConfig cfg = cheap_config();

    const std::vector<double> powers = {0.5e-9, 2e-9, 8e-9, 34e-9};
    const std::vector<double> lw_powers = {0.3e-9, 4e-9, 17e-9};
    const std::vector<double> detunings = {-12e9, -5e9, 0.0, 5e9, 12e9};
    const TripleDataset data = synthesize_datasets(g_true, gd_true, gsd_true, powers, lw_powers,
                                                   detunings, cfg, 0.0, 11);

    cfg.settings.g_init_hz = 48e6;
    cfg.settings.gamma_d_init_hz = 0.8e9;
    cfg.settings.gamma_sd_init_hz = 1.4e9;
    const FitResult free_fit = global_cqed_fit(data, cfg, 5);

    GlobalFitConfig restricted = cfg;
    restricted.settings.gamma_sd_bounds_hz = {1e3, 1e4};  // diffusion pinned to ~zero
    restricted.settings.gamma_sd_init_hz = 5e3;
    const FitResult restricted_fit = global_cqed_fit(data, restricted, 5);

    // Nested models: the free fit can always match the restricted one.
    CHECK(free_fit.cost <= restricted_fit.cost * (1.0 + 1e-6));
    CHECK(restricted_fit.cost > 2.0 * free_fit.cost);
    // The restricted fit compensates the missing diffusion with extra dephasing.
    CHECK(restricted_fit.params[1] > gd_true);

    // Per-dataset residual norms come back for both fits.
    CHECK(free_fit.residual_norms.count("saturation") == 1);
    CHECK(free_fit.residual_norms.count("linewidth") == 1);
    CHECK(free_fit.residual_norms.count("decay") == 1);
}

TEST_CASE("model overlays reproduce the generator on noiseless data") {
    GlobalFitConfig cfg = cheap_config();
    const std::vector<double> powers = {1e-9, 8e-9};
    const std::vector<double> lw_powers = {1e-9};
    const std::vector<double> detunings = {-5e9, 0.0, 5e9};
    const TripleDataset data =
        synthesize_datasets(42.4e6, 0.645e9, 1.69e9, powers, lw_powers, detunings, cfg, 0.0, 3);

    const TripleDataset overlay =
        evaluate_model(42.4e6, 0.645e9, 1.69e9, 0.0, data, cfg);
    for (std::size_t i = 0; i < data.saturation.size(); ++i) {
        CHECK(overlay.saturation.y[i] == doctest::Approx(data.saturation.y[i]).epsilon(1e-9));
    }
    for (std::size_t i = 0; i < data.decay_vs_detuning.size(); ++i) {
        CHECK(overlay.decay_vs_detuning.y[i] ==
              doctest::Approx(data.decay_vs_detuning.y[i]).epsilon(1e-9));
    }
    // Linewidth scan grids differ between synthesis (analytic hint) and model
    // evaluation (data-driven hint); widths agree physically, not bitwise.
    for (std::size_t i = 0; i < data.linewidth_vs_power.size(); ++i) {
        CHECK(overlay.linewidth_vs_power.y[i] ==
              doctest::Approx(data.linewidth_vs_power.y[i]).epsilon(0.01));
    }

    // Synthesis is deterministic under a fixed seed.
    const TripleDataset again =
        synthesize_datasets(42.4e6, 0.645e9, 1.69e9, powers, lw_powers, detunings, cfg, 0.0, 3);
    CHECK(again.saturation.y == data.saturation.y);
    CHECK(again.decay_vs_detuning.y == data.decay_vs_detuning.y);
}
