#include <doctest.h>

#include <cmath>
#include <random>

#include "cqed/curve_fit.hpp"
#include "cqed/errors.hpp"

using namespace cqed;

namespace {

SimCurve gaussian_curve(double amp, double center, double fwhm, double offset, double span,
                        int n) {
    const double sigma = fwhm / 2.3548200450309493;
    SimCurve c;
    for (int i = 0; i < n; ++i) {
        const double x = center - span + 2.0 * span * i / (n - 1);
        c.x.push_back(x);
        c.y.push_back(amp * std::exp(-0.5 * (x - center) * (x - center) / (sigma * sigma)) +
                      offset);
    }
    return c;
}

SimCurve biexp_curve(double a1, double tau1, double a2, double tau2, double t_max, int n) {
    SimCurve c;
    for (int i = 0; i < n; ++i) {
        const double t = t_max * i / (n - 1);
        c.x.push_back(t);
        c.y.push_back(a1 * std::exp(-t / tau1) + a2 * std::exp(-t / tau2));
    }
    return c;
}

}  // namespace

TEST_CASE("gaussian fit round-trips a noiseless peak") {
    const SimCurve c = gaussian_curve(1.0, 0.0, 3.81, 0.1, 8.0, 81);
    const GaussianFit f = fit_gaussian(c);
    CHECK(f.converged);
    CHECK(f.significant);
    CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(f.center) < 1e-6);
    CHECK(f.fwhm == doctest::Approx(3.81).epsilon(1e-6));
    CHECK(f.offset == doctest::Approx(0.1).epsilon(1e-5));
}

TEST_CASE("gaussian fit flags offset-only data as insignificant") {
    SimCurve flat;
    for (int i = 0; i < 21; ++i) {
        flat.x.push_back(i);
        flat.y.push_back(0.7);
    }
    const GaussianFit f = fit_gaussian(flat);
    CHECK(std::abs(f.amplitude) < 1e-6);
    CHECK_FALSE(f.significant);

    SimCurve tiny;
    CHECK_THROWS_AS(fit_gaussian(tiny), NumericError);
}

TEST_CASE("lorentzian fit recovers a cavity reflection dip") {
    // Reflection spectrum: unit background with a Lorentzian dip of FWHM 5.22 GHz.
    SimCurve c;
    const double fwhm = 5.22e9;
    for (int i = 0; i < 101; ++i) {
        const double x = -15e9 + 30e9 * i / 100.0;
        c.x.push_back(x);
        c.y.push_back(1.0 - 0.85 / (1.0 + x * x / (0.25 * fwhm * fwhm)));
    }
    const LorentzianFit f = fit_lorentzian(c);
    CHECK(f.converged);
    CHECK(f.fwhm > 0.0);
    CHECK(f.fwhm == doctest::Approx(fwhm).epsilon(1e-4));
    CHECK(f.amplitude == doctest::Approx(-0.85).epsilon(1e-4));
    CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-4));

    const SimCurve peak = gaussian_curve(0.0, 0.0, 1.0, 0.3, 5.0, 31);  // flat
    const LorentzianFit flat = fit_lorentzian(peak);
    CHECK_FALSE(flat.significant);
}

TEST_CASE("single exponential fit handles the bulk lifetime") {
    const double tau = 940e-9;
    const SimCurve c = biexp_curve(1.0, tau, 0.0, tau, 5e-6, 200);
    const ExponentialFit f = fit_exponential(c);
    CHECK(f.converged);
    CHECK(1.0 / f.rate == doctest::Approx(tau).epsilon(1e-3));
    CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(f.offset) < 1e-6);

    const BiexponentialFit b = fit_biexponential(c);
    CHECK(1.0 / b.rate1 == doctest::Approx(tau).epsilon(5e-3));
    // single- and bi-exponential dominant rates agree on single-exponential data
    CHECK(b.rate1 == doctest::Approx(f.rate).epsilon(5e-3));
    CHECK(b.rate_degenerate == (std::abs(b.rate1 - b.rate2) <
                                0.05 * std::max(std::abs(b.rate1), std::abs(b.rate2))));
}

TEST_CASE("constant data has no identifiable rate") {
    SimCurve flat;
    for (int i = 0; i < 50; ++i) {
        flat.x.push_back(i * 1e-9);
        flat.y.push_back(0.4);
    }
    CHECK_THROWS_AS(fit_exponential(flat), NumericError);
}

TEST_CASE("bi-exponential fit separates the cavity-enhanced decay components") {
    const double tau1 = 136.4e-9, tau2 = 298.1e-9;
    const SimCurve c = biexp_curve(0.97, tau1, 0.03, tau2, 1.5e-6, 301);

    const BiexponentialFit b = fit_biexponential(c);
    CHECK(b.converged);
    CHECK(1.0 / b.rate1 == doctest::Approx(tau1).epsilon(0.02));
    CHECK(b.dominant_weight == doctest::Approx(0.97).epsilon(0.011));
    CHECK(1.0 / b.rate2 == doctest::Approx(tau2).epsilon(0.10));
    CHECK_FALSE(b.rate_degenerate);

    // A single exponential over-estimates the dominant lifetime on this data.
    const ExponentialFit s = fit_exponential(c);
    CHECK(1.0 / s.rate > 1.0 / b.rate1);
    CHECK(1.0 / s.rate == doctest::Approx(144e-9).epsilon(0.06));
}

TEST_CASE("purcell lorentzian fit round-trips the published detuning curve") {
    const PurcellFit truth{5.88, 7.11e9, 1.03};
    SimCurve c;
    for (double d : {-25e9, -18e9, -12e9, -8e9, -5e9, -3e9, -1.5e9, 0.0, 1.5e9, 3e9, 5e9, 8e9,
                     12e9, 18e9, 25e9}) {
        c.x.push_back(d);
        c.y.push_back(purcell_lorentzian(d, truth));
    }
    const PurcellLorentzianFit f = fit_purcell_lorentzian(c);
    CHECK(f.converged);
    CHECK(f.fit.p_t == doctest::Approx(5.88).epsilon(1e-5));
    CHECK(f.fit.kappa_tilde == doctest::Approx(7.11e9).epsilon(1e-5));
    CHECK(f.fit.gamma_inf_ratio == doctest::Approx(1.03).epsilon(1e-5));
    CHECK(f.r_squared > 0.999999);
}

TEST_CASE("fits are deterministic") {
    const SimCurve c = gaussian_curve(0.8, 2.0, 1.5, 0.05, 5.0, 61);
    const GaussianFit a = fit_gaussian(c);
    const GaussianFit b = fit_gaussian(c);
    CHECK(a.amplitude == b.amplitude);
    CHECK(a.center == b.center);
    CHECK(a.fwhm == b.fwhm);
    CHECK(a.cost == b.cost);
}
