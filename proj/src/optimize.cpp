#include "cqed/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cqed/errors.hpp"

namespace cqed {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Objective::Objective(Fn f, std::vector<double> lower, std::vector<double> upper)
    : f_(std::move(f)), lo_(std::move(lower)), hi_(std::move(upper)) {
    if (lo_.size() != hi_.size()) throw NumericError("Objective: bounds size mismatch");
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!(lo_[i] < hi_[i])) throw NumericError("Objective: bounds must satisfy lo < hi");
    }
}

bool Objective::in_bounds(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    }
    return true;
}

void Objective::clamp(std::vector<double>& x) const {
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        x[i] = std::clamp(x[i], lo_[i], hi_[i]);
    }
}

double Objective::evaluate(const std::vector<double>& x) {
    ++n_eval_;
    if (!lo_.empty() && !in_bounds(x)) return kInf;
    const double c = f_(x);
    return std::isfinite(c) ? c : kInf;
}

FitResult nelder_mead(Objective& obj, const std::vector<double>& x0, double tol, long max_eval) {
    const std::size_t n = x0.size();
    if (n == 0) throw NumericError("nelder_mead: empty parameter vector");
    if (!obj.lower().empty() && !obj.in_bounds(x0)) {
        throw NumericError("nelder_mead: x0 outside bounds");
    }

    // Standard coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    // Initial simplex displacements as in the common simplex implementations.
    constexpr double nonzero_delta = 0.05, zero_delta = 0.00025;

    const long start_evals = obj.evaluations();
    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double& xi = xs[i + 1][i];
        xi = (xi != 0.0) ? xi * (1.0 + nonzero_delta) : zero_delta;
    }
    for (std::size_t i = 0; i <= n; ++i) fs[i] = obj.evaluate(xs[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };
    auto centroid_excluding_worst = [&](std::vector<double>& c) {
        c.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) c[i] += xs[order[k]][i];
        }
        for (double& v : c) v /= static_cast<double>(n);
    };

    std::vector<double> centroid(n), trial(n), expanded(n);
    bool converged = false;

    for (;;) {
        sort_simplex();
        const double f_best = fs[order[0]];
        const double f_worst = fs[order[n]];
        const double spread = f_worst - f_best;
        if (std::isfinite(f_best) && spread <= tol * (1.0 + std::abs(f_best))) {
            converged = true;
            break;
        }
        if (obj.evaluations() - start_evals >= max_eval) break;

        centroid_excluding_worst(centroid);
        const std::size_t worst = order[n];
        const double f_second_worst = fs[order[n - 1]];

        for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + alpha * (centroid[i] - xs[worst][i]);
        const double f_reflect = obj.evaluate(trial);

        if (f_reflect < fs[order[0]]) {
            for (std::size_t i = 0; i < n; ++i) expanded[i] = centroid[i] + gamma * (trial[i] - centroid[i]);
            const double f_expand = obj.evaluate(expanded);
            if (f_expand < f_reflect) {
                xs[worst] = expanded;
                fs[worst] = f_expand;
            } else {
                xs[worst] = trial;
                fs[worst] = f_reflect;
            }
        } else if (f_reflect < f_second_worst) {
            xs[worst] = trial;
            fs[worst] = f_reflect;
        } else {
            // Contraction toward the better of worst / reflected.
            const bool outside = f_reflect < fs[worst];
            const std::vector<double>& anchor = outside ? trial : xs[worst];
            for (std::size_t i = 0; i < n; ++i) expanded[i] = centroid[i] + rho * (anchor[i] - centroid[i]);
            const double f_contract = obj.evaluate(expanded);
            if (f_contract < std::min(f_reflect, fs[worst])) {
                xs[worst] = expanded;
                fs[worst] = f_contract;
            } else {
                const std::vector<double>& best = xs[order[0]];
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == order[0]) continue;
                    for (std::size_t i = 0; i < n; ++i) xs[k][i] = best[i] + sigma * (xs[k][i] - best[i]);
                    fs[k] = obj.evaluate(xs[k]);
                }
            }
        }
    }

    sort_simplex();
    FitResult r;
    r.params = xs[order[0]];
    r.cost = fs[order[0]];
    r.n_eval = obj.evaluations() - start_evals;
    r.converged = converged;
    return r;
}

FitResult basin_hopping(Objective& obj, const std::vector<double>& x0,
                        const BasinHoppingOptions& opts, std::uint64_t seed) {
    const std::size_t n = x0.size();
    if (!opts.step.empty() && opts.step.size() != n) {
        throw NumericError("basin_hopping: step size vector length mismatch");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    FitResult current = nelder_mead(obj, x0, opts.nm_tol, opts.nm_max_eval);
    FitResult best = current;
    long total_eval = current.n_eval;

    std::vector<double> trial(n);
    for (int hop = 0; hop < opts.n_hops; ++hop) {
        for (std::size_t i = 0; i < n; ++i) {
            const double scale = opts.step.empty() ? 1.0 : opts.step[i];
            trial[i] = current.params[i] + scale * uniform(rng);
        }
        if (!obj.lower().empty()) obj.clamp(trial);

        FitResult local = nelder_mead(obj, trial, opts.nm_tol, opts.nm_max_eval);
        total_eval += local.n_eval;

        const double delta = local.cost - current.cost;
        const bool accept =
            delta < 0.0 || (opts.temperature > 0.0 && unit(rng) < std::exp(-delta / opts.temperature));
        if (accept) current = local;
        if (local.cost < best.cost) best = local;
    }

    best.n_eval = total_eval;
    return best;
}

std::vector<double> curvature_uncertainties(Objective& obj, const std::vector<double>& x_opt,
                                            double cost_opt, long dof) {
    const std::size_t n = x_opt.size();
    std::vector<double> u(n, std::numeric_limits<double>::quiet_NaN());
    const double scale = dof > 0 ? cost_opt / static_cast<double>(dof) : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = 1e-4 * std::max(std::abs(x_opt[i]), 1e-12);
        std::vector<double> xp = x_opt, xm = x_opt;
        xp[i] += h;
        xm[i] -= h;
        const double fp = obj.evaluate(xp);
        const double fm = obj.evaluate(xm);
        const double second = (fp - 2.0 * cost_opt + fm) / (h * h);
        if (std::isfinite(second) && second > 0.0) {
            u[i] = std::sqrt(2.0 * scale / second);
        }
    }
    return u;
}

}  // namespace cqed
