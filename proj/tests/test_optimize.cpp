#include <doctest.h>

#include <cmath>

#include "cqed/errors.hpp"
#include "cqed/optimize.hpp"

using namespace cqed;

namespace {

double sphere(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

double rosenbrock(const std::vector<double>& x) {
    const double a = 1.0, b = 100.0;
    return (a - x[0]) * (a - x[0]) + b * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]);
}

// Tilted double well: global minimum near x = -1.01228 (root of 4x^3 - 4x + 0.1).
double double_well(const std::vector<double>& x) {
    const double u = x[0] * x[0] - 1.0;
    return u * u + 0.1 * x[0];
}

}  // namespace

TEST_CASE("nelder-mead on standard test functions") {
    {
        Objective obj(sphere);
        const FitResult r = nelder_mead(obj, {3.0, 4.0}, 1e-14, 2000);
        CHECK(r.converged);
        CHECK(std::abs(r.params[0]) < 1e-6);
        CHECK(std::abs(r.params[1]) < 1e-6);
    }
    {
        Objective obj(rosenbrock);
        const FitResult r = nelder_mead(obj, {-1.2, 1.0}, 1e-16, 5000);
        CHECK(r.converged);
        CHECK(r.params[0] == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(r.params[1] == doctest::Approx(1.0).epsilon(1e-4));
    }
    {
        Objective obj([](const std::vector<double>& x) { return (x[0] - 5.0) * (x[0] - 5.0); });
        const FitResult r = nelder_mead(obj, {0.5}, 1e-18, 2000);
        CHECK(std::abs(r.params[0] - 5.0) < 1e-8);
    }
}

TEST_CASE("nelder-mead respects bounds and budgets") {
    Objective bounded(sphere, {-1.0, -1.0}, {1.0, 1.0});
    CHECK_THROWS_AS(nelder_mead(bounded, {3.0, 0.0}, 1e-10, 100), NumericError);

    Objective obj(rosenbrock);
    const FitResult r = nelder_mead(obj, {-1.2, 1.0}, 1e-16, 20);
    CHECK_FALSE(r.converged);
    CHECK(r.n_eval <= 25);  // budget plus the simplex bootstrap

    Objective counting(sphere);
    const FitResult r2 = nelder_mead(counting, {1.0, 1.0}, 1e-12, 500);
    CHECK(r2.n_eval == counting.evaluations());
}

TEST_CASE("objective flags infeasible evaluations") {
    Objective obj([](const std::vector<double>& x) { return x[0] < 0.5 ? 1.0 : std::nan(""); },
                  {0.0}, {1.0});
    CHECK(obj.evaluate({0.2}) == doctest::Approx(1.0));
    CHECK(std::isinf(obj.evaluate({0.9})));   // non-finite cost
    CHECK(std::isinf(obj.evaluate({-0.1})));  // out of bounds
    CHECK(obj.evaluations() == 3);
}

TEST_CASE("basin hopping equals the local result on a single basin") {
    Objective obj1(sphere);
    const FitResult local = nelder_mead(obj1, {2.0, -1.0}, 1e-14, 2000);

    Objective obj2(sphere);
    BasinHoppingOptions opts;
    opts.n_hops = 5;
    opts.step = {0.5, 0.5};
    opts.nm_tol = 1e-14;
    const FitResult hopped = basin_hopping(obj2, {2.0, -1.0}, opts, 99);
    CHECK(std::abs(hopped.params[0] - local.params[0]) < 1e-7);
    CHECK(std::abs(hopped.params[1] - local.params[1]) < 1e-7);
    CHECK(hopped.cost <= local.cost + 1e-15);
}

TEST_CASE("basin hopping escapes the wrong well of the tilted double well") {
    Objective obj(double_well);
    BasinHoppingOptions opts;
    opts.n_hops = 30;
    opts.step = {2.0};
    opts.temperature = 0.5;
    opts.nm_tol = 1e-15;
    const FitResult r = basin_hopping(obj, {1.0}, opts, 7);
    CHECK(std::abs(r.params[0] - (-1.01228)) < 1e-3);
}

TEST_CASE("basin hopping is deterministic for a fixed seed") {
    auto run = [] {
        Objective obj(double_well);
        BasinHoppingOptions opts;
        opts.n_hops = 12;
        opts.step = {0.8};
        return basin_hopping(obj, {1.0}, opts, 4242);
    };
    const FitResult a = run();
    const FitResult b = run();
    CHECK(a.params[0] == b.params[0]);
    CHECK(a.cost == b.cost);
    CHECK(a.n_eval == b.n_eval);
}

TEST_CASE("best-ever cost never exceeds the plain local minimum") {
    auto bumpy = [](const std::vector<double>& x) {
        return x[0] * x[0] + 2.0 * std::sin(5.0 * x[0]);
    };
    Objective obj1(bumpy);
    const FitResult local = nelder_mead(obj1, {2.3}, 1e-14, 2000);
    Objective obj2(bumpy);
    BasinHoppingOptions opts;
    opts.n_hops = 20;
    opts.step = {1.5};
    const FitResult hopped = basin_hopping(obj2, {2.3}, opts, 21);
    CHECK(hopped.cost <= local.cost + 1e-12);
}

TEST_CASE("curvature uncertainties on a shifted parabola") {
    Objective obj([](const std::vector<double>& x) { return (x[0] - 2.0) * (x[0] - 2.0) + 4.0; });
    const std::vector<double> u = curvature_uncertainties(obj, {2.0}, 4.0, 2);
    // second derivative 2, scale cost/dof = 2 -> sqrt(2 * 2 / 2) = sqrt(2)
    CHECK(u[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
}
