#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace cqed {

// Scalar cost over a fixed-length real parameter vector with optional box
// bounds. Out-of-bounds or non-finite evaluations report +inf (infeasible);
// every call is counted.
class Objective {
public:
    using Fn = std::function<double(const std::vector<double>&)>;

    explicit Objective(Fn f) : f_(std::move(f)) {}
    Objective(Fn f, std::vector<double> lower, std::vector<double> upper);

    double evaluate(const std::vector<double>& x);
    bool in_bounds(const std::vector<double>& x) const;
    void clamp(std::vector<double>& x) const;

    const std::vector<double>& lower() const { return lo_; }
    const std::vector<double>& upper() const { return hi_; }
    long evaluations() const { return n_eval_; }

private:
    Fn f_;
    std::vector<double> lo_, hi_;
    long n_eval_ = 0;
};

struct FitResult {
    std::vector<double> params;
    double cost = std::numeric_limits<double>::infinity();
    long n_eval = 0;
    bool converged = false;
    std::vector<double> uncertainties;            // curvature-based, approximate
    std::map<std::string, double> residual_norms; // per dataset (global fit)
};

// Downhill simplex with the standard reflection / expansion / contraction /
// shrink coefficients (1, 2, 0.5, 0.5). Stops when the cost spread across the
// simplex drops below tol * (1 + |best|) or max_eval is exhausted (converged
// is false in the latter case).
FitResult nelder_mead(Objective& obj, const std::vector<double>& x0, double tol = 1e-10,
                      long max_eval = 2000);

struct BasinHoppingOptions {
    int n_hops = 25;
    std::vector<double> step;  // per-dimension perturbation scale
    double temperature = 1.0;
    double nm_tol = 1e-10;
    long nm_max_eval = 2000;
};

// Repeats {perturb, local Nelder-Mead, Metropolis accept} and returns the
// best minimum ever seen. Deterministic for a fixed seed.
FitResult basin_hopping(Objective& obj, const std::vector<double>& x0,
                        const BasinHoppingOptions& opts, std::uint64_t seed);

// 1-sigma parameter uncertainties from the finite-difference curvature of the
// cost at x_opt, scaled by cost / dof (approximate; dof <= 0 disables the
// scaling). Entries are NaN where the curvature is non-positive.
std::vector<double> curvature_uncertainties(Objective& obj, const std::vector<double>& x_opt,
                                            double cost_opt, long dof);

}  // namespace cqed
