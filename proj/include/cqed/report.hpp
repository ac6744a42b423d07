#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cqed/optimize.hpp"

namespace cqed {

struct ReportContext {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::string> param_names;  // one per fit parameter
    std::string label;                     // free-form run label
};

// Structured JSON fit report: parameters with uncertainties, cost, evaluation
// count, per-dataset residual norms, config hash and seed — enough to
// reproduce the run. The generation timestamp is isolated on its own line.
// Throws NumericError for an empty fit.
void write_fit_report(const FitResult& fit, const ReportContext& ctx, const std::string& path);

std::uint64_t fnv1a_hash(const std::string& data);
std::string iso8601_utc_now();

}  // namespace cqed
