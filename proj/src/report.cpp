#include "cqed/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "cqed/errors.hpp"

namespace cqed {

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_fit_report(const FitResult& fit, const ReportContext& ctx, const std::string& path) {
    if (fit.params.empty()) throw NumericError("write_fit_report: empty fit result");
    if (!ctx.param_names.empty() && ctx.param_names.size() != fit.params.size()) {
        throw NumericError("write_fit_report: parameter name count mismatch");
    }

    nlohmann::ordered_json j;
    j["schema"] = "cqed-fit-report-1";
    j["generated_at"] = iso8601_utc_now();
    if (!ctx.label.empty()) j["label"] = ctx.label;
    j["config_hash"] = ctx.config_hash;
    j["seed"] = ctx.seed;

    nlohmann::ordered_json params, uncertainties;
    for (std::size_t i = 0; i < fit.params.size(); ++i) {
        const std::string name =
            ctx.param_names.empty() ? "p" + std::to_string(i) : ctx.param_names[i];
        params[name] = fit.params[i];
        if (i < fit.uncertainties.size() && std::isfinite(fit.uncertainties[i])) {
            uncertainties[name] = fit.uncertainties[i];
        }
    }
    j["params"] = params;
    j["uncertainties"] = uncertainties;
    j["cost"] = fit.cost;
    j["n_eval"] = fit.n_eval;
    j["converged"] = fit.converged;
    nlohmann::ordered_json residuals;
    for (const auto& [name, value] : fit.residual_norms) residuals[name] = value;
    j["residual_norms"] = residuals;

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write report file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cqed
