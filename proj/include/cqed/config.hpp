#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cqed/analytics.hpp"
#include "cqed/model.hpp"
#include "cqed/system.hpp"

// Declarative experiment configuration: one JSON document holding the system,
// drive, efficiency chain, simulation controls, sweep definitions, and fit
// settings. Every numeric key carries a unit suffix (g_hz / g_mhz / ...,
// t0_s / t0_ns / ..., p_in_w / p_in_nw / ...); dimensionless and integer
// fields use bare names. Unknown keys or unit suffixes fail in strict mode
// and warn in lax mode. Canonical saves use base units (hz, s, w).

namespace cqed {

struct SweepConfig {
    std::vector<double> powers_w;            // saturation sweep
    std::vector<double> linewidth_powers_w;  // linewidth-vs-power sweep
    std::vector<double> detunings_hz;        // decay-vs-detuning sweep
    int scan_points = 81;
    double scan_span_linewidths = 2.5;
};

struct FitSettings {
    std::array<double, 2> g_bounds_hz{20e6, 120e6};
    std::array<double, 2> gamma_d_bounds_hz{0.05e9, 3e9};
    std::array<double, 2> gamma_sd_bounds_hz{0.05e9, 5e9};
    double g_init_hz = 60e6;
    double gamma_d_init_hz = 1.0e9;
    double gamma_sd_init_hz = 1.0e9;
    std::array<double, 2> background_bounds{0.0, 0.02};
    double background_init = 0.0;
    double weight_saturation = 1.0;
    double weight_linewidth = 1.0;
    double weight_decay = 1.0;
    int hops = 25;
    double step_fraction = 0.2;  // perturbation scale as a fraction of the bound range
    double temperature = 1.0;
    double nm_tol = 1e-8;
    int nm_max_eval = 200;
    int linewidth_scan_points = 25;
    double linewidth_scan_span = 2.5;
    // Reduced-cost simulation profile used inside the fit loop.
    SimOptions sim;
};

SimOptions fit_sim_defaults();

struct ExperimentConfig {
    SystemParams system;
    DriveSpec drive;
    EfficiencyChain efficiency{0.358, 0.461, 0.786, 0.703};
    SimOptions simulation;
    SweepConfig sweep;
    FitSettings fit;
};

// Parses and validates; defaults fill anything absent (the drive laser
// defaults to the emitter frequency). Throws ConfigError with line/column on
// parse errors, on unknown units, and on unknown keys in strict mode; in lax
// mode unknown keys are reported through `warnings`.
ExperimentConfig load_config(const std::string& path, bool strict = true,
                             std::vector<std::string>* warnings = nullptr);
ExperimentConfig parse_config(const std::string& json_text, bool strict = true,
                              std::vector<std::string>* warnings = nullptr);

void save_config(const ExperimentConfig& cfg, const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);  // canonical form

// Applies "dotted.key=value" overrides to the canonical JSON form of cfg and
// re-parses. Every override must reference an existing canonical key.
ExperimentConfig apply_overrides(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& overrides);

// FNV-1a hash of the canonical JSON form.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace cqed
