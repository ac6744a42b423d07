#pragma once

#include "cqed/analytics.hpp"
#include "cqed/curve.hpp"

// Least-squares peak and decay models, all driven by the Nelder-Mead engine
// with moment-based initial guesses. Uncertainties are 1-sigma values from
// the Gauss-Newton curvature at the optimum.

namespace cqed {

struct GaussianFit {
    double amplitude = 0, center = 0, fwhm = 0, offset = 0;
    double u_amplitude = 0, u_center = 0, u_fwhm = 0, u_offset = 0;
    double cost = 0;
    bool converged = false;
    bool significant = false;  // amplitude resolved above residual level
};

struct LorentzianFit {
    double amplitude = 0, center = 0, fwhm = 0, offset = 0;
    double u_amplitude = 0, u_center = 0, u_fwhm = 0, u_offset = 0;
    double cost = 0;
    bool converged = false;
    bool significant = false;
};

struct ExponentialFit {
    double amplitude = 0, rate = 0, offset = 0;  // y = A exp(-rate t) + offset
    double u_amplitude = 0, u_rate = 0, u_offset = 0;
    double cost = 0;
    bool converged = false;
};

struct BiexponentialFit {
    // Component 1 carries the dominant amplitude weight.
    double amp1 = 0, rate1 = 0, amp2 = 0, rate2 = 0, offset = 0;
    double dominant_weight = 0;  // amp1 / (amp1 + amp2)
    double u_rate1 = 0, u_rate2 = 0;
    double cost = 0;
    bool converged = false;
    bool rate_degenerate = false;  // rates within 5%: fit is ill-conditioned
};

// amp * exp(-(x-center)^2 / (2 sigma^2)) + offset, FWHM = 2 sqrt(2 ln 2) sigma.
// Requires >= 5 points.
GaussianFit fit_gaussian(const SimCurve& curve);

// amp / (1 + ((x-center) / (fwhm/2))^2) + offset. Requires >= 5 points.
LorentzianFit fit_lorentzian(const SimCurve& curve);

// Single exponential decay; with fit_offset = false the offset is pinned to 0.
ExponentialFit fit_exponential(const SimCurve& curve, bool fit_offset = true);

BiexponentialFit fit_biexponential(const SimCurve& curve);

struct PurcellLorentzianFit {
    PurcellFit fit;  // p_t, kappa_tilde (Hz), gamma_inf_ratio
    double u_p_t = 0, u_kappa_tilde = 0, u_gamma_inf_ratio = 0;
    double cost = 0;
    double r_squared = 0;
    bool converged = false;
};

// Least-squares fit of a decay-enhancement curve (x: detuning Hz,
// y: Gamma_cav / Gamma_0) to the detuning Lorentzian
// P_t / (1 + (2 delta / kappa_tilde)^2) + Gamma_inf/Gamma_0.
PurcellLorentzianFit fit_purcell_lorentzian(const SimCurve& curve);

}  // namespace cqed
