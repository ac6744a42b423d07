#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Reference battery: every published-value criterion the toolkit commits to,
// evaluated at the reference parameter set
// (g, kappa, Gamma0, Gamma_d, Gamma_sd) = (42.4 MHz, 5.22 GHz, 169.3 kHz,
// 0.645 GHz, 1.69 GHz), eta_cav = 0.358, eta_sys = 0.091, t0 = 170 ns,
// pulse 900 ns, period 8 us. Used by the `reproduce` CLI command and the
// acceptance test suite.

namespace cqed {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;   // deterministic measured-vs-expected summary
    double runtime_s = 0; // wall time; reported on stdout, never in report files
};

struct BatteryOptions {
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    std::ostream* progress = nullptr;  // per-criterion line as each finishes
};

std::vector<CriterionResult> run_reference_battery(const BatteryOptions& opts);

bool all_passed(const std::vector<CriterionResult>& results);

// JSON report of the battery outcome; deterministic for a fixed seed except
// for the generated_at line.
void write_battery_report(const std::vector<CriterionResult>& results, std::uint64_t seed,
                          const std::string& path);

}  // namespace cqed
