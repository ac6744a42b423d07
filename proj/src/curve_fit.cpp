#include "cqed/curve_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"
#include "cqed/optimize.hpp"

namespace cqed {

namespace {

constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

struct Normalized {
    std::vector<double> x, y;
    double x0 = 0, sx = 1, y0 = 0, sy = 1;
};

Normalized normalize(const SimCurve& curve) {
    Normalized n;
    const auto [x_min, x_max] = std::minmax_element(curve.x.begin(), curve.x.end());
    const auto [y_min, y_max] = std::minmax_element(curve.y.begin(), curve.y.end());
    n.x0 = *x_min;
    n.sx = (*x_max > *x_min) ? (*x_max - *x_min) : 1.0;
    n.y0 = *y_min;
    n.sy = (*y_max > *y_min) ? (*y_max - *y_min) : 1.0;
    n.x.resize(curve.size());
    n.y.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        n.x[i] = (curve.x[i] - n.x0) / n.sx;
        n.y[i] = (curve.y[i] - n.y0) / n.sy;
    }
    return n;
}

using ModelFn = std::function<double(double, const std::vector<double>&)>;

struct Lsq {
    std::vector<double> p;
    std::vector<double> u;  // 1-sigma from Gauss-Newton curvature
    double cost = 0;
    double residual_rms = 0;
    bool converged = false;
};

Lsq lsq_fit(const std::vector<double>& x, const std::vector<double>& y, const ModelFn& model,
            const std::vector<double>& p0, std::vector<double> lo, std::vector<double> hi,
            double tol = 1e-14, long max_eval = 4000) {
    auto sse = [&](const std::vector<double>& p) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = model(x[i], p) - y[i];
            acc += r * r;
        }
        return acc;
    };
    Objective obj(sse, std::move(lo), std::move(hi));
    FitResult r = nelder_mead(obj, p0, tol, max_eval);

    Lsq out;
    out.p = r.params;
    out.cost = r.cost;
    out.converged = r.converged;
    const long dof = static_cast<long>(x.size()) - static_cast<long>(p0.size());
    out.residual_rms = dof > 0 ? std::sqrt(r.cost / static_cast<double>(dof)) : 0.0;

    // Gauss-Newton covariance: s^2 (J'J)^-1 with J from central differences.
    const std::size_t n = x.size(), m = p0.size();
    std::vector<std::vector<double>> jt(m, std::vector<double>(n));
    for (std::size_t j = 0; j < m; ++j) {
        const double h = 1e-6 * std::max(std::abs(r.params[j]), 1e-9);
        std::vector<double> pp = r.params, pm = r.params;
        pp[j] += h;
        pm[j] -= h;
        for (std::size_t i = 0; i < n; ++i) {
            jt[j][i] = (model(x[i], pp) - model(x[i], pm)) / (2.0 * h);
        }
    }
    Eigen::MatrixXd jtj(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += jt[a][i] * jt[b][i];
            jtj(static_cast<long>(a), static_cast<long>(b)) = acc;
            jtj(static_cast<long>(b), static_cast<long>(a)) = acc;
        }
    }
    out.u.assign(m, 0.0);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible()) {
        const Eigen::MatrixXd cov = lu.inverse() * (out.residual_rms * out.residual_rms);
        for (std::size_t j = 0; j < m; ++j) {
            const double v = cov(static_cast<long>(j), static_cast<long>(j));
            out.u[j] = v > 0.0 ? std::sqrt(v) : 0.0;
        }
    }
    return out;
}

// Peak model shared by the Gaussian and Lorentzian fits:
// p = (amplitude, center, width-parameter, offset) in normalized coordinates.
template <typename Shape>
void fit_peak(const SimCurve& curve, Shape shape, double& amplitude, double& center,
              double& width_param, double& offset, double* u, double& cost, bool& converged,
              bool& significant) {
    curve.require_consistent();
    if (curve.size() < 5) throw NumericError("peak fit: need at least 5 points");
    const Normalized n = normalize(curve);

    // Moment-based initial guess; works for peaks and dips alike. The
    // normalized ordinate spans [0, 1], so the median doubles as the
    // background estimate.
    std::vector<double> sorted = n.y;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double background = sorted[sorted.size() / 2];
    const bool dip = background > 0.5;
    const std::size_t i_ext = static_cast<std::size_t>(
        dip ? std::min_element(n.y.begin(), n.y.end()) - n.y.begin()
            : std::max_element(n.y.begin(), n.y.end()) - n.y.begin());
    const double amp0 = dip ? -background : 1.0 - background;

    double w_sum = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n.x.size(); ++i) {
        const double w = std::max(dip ? background - n.y[i] : n.y[i] - background, 0.0);
        w_sum += w;
        const double d = n.x[i] - n.x[i_ext];
        m2 += w * d * d;
    }
    const double sigma0 = w_sum > 0.0 ? std::max(std::sqrt(m2 / w_sum), 1e-3) : 0.25;
    std::vector<double> p0{amp0, n.x[i_ext], sigma0, background};
    std::vector<double> lo{-10.0, -2.0, 1e-6, -10.0};
    std::vector<double> hi{10.0, 3.0, 10.0, 10.0};

    ModelFn model = [shape](double x, const std::vector<double>& p) {
        return p[0] * shape(x - p[1], p[2]) + p[3];
    };
    Lsq fit = lsq_fit(n.x, n.y, model, p0, lo, hi);

    amplitude = fit.p[0] * n.sy;
    center = n.x0 + fit.p[1] * n.sx;
    width_param = std::abs(fit.p[2]) * n.sx;
    offset = n.y0 + fit.p[3] * n.sy;
    u[0] = fit.u[0] * n.sy;
    u[1] = fit.u[1] * n.sx;
    u[2] = fit.u[2] * n.sx;
    u[3] = fit.u[3] * n.sy;
    cost = fit.cost * n.sy * n.sy;
    converged = fit.converged;
    significant = converged && std::abs(fit.p[0]) > 10.0 * std::max(fit.residual_rms, 1e-12) &&
                  std::abs(fit.p[0]) > 1e-6;
}

}  // namespace

GaussianFit fit_gaussian(const SimCurve& curve) {
    GaussianFit g;
    double sigma = 0, u[4];
    fit_peak(
        curve, [](double d, double s) { return std::exp(-0.5 * d * d / (s * s)); }, g.amplitude,
        g.center, sigma, g.offset, u, g.cost, g.converged, g.significant);
    g.fwhm = kFwhmPerSigma * sigma;
    g.u_amplitude = u[0];
    g.u_center = u[1];
    g.u_fwhm = kFwhmPerSigma * u[2];
    g.u_offset = u[3];
    return g;
}

LorentzianFit fit_lorentzian(const SimCurve& curve) {
    LorentzianFit l;
    double hwhm = 0, u[4];
    fit_peak(
        curve, [](double d, double w) { return 1.0 / (1.0 + d * d / (w * w)); }, l.amplitude,
        l.center, hwhm, l.offset, u, l.cost, l.converged, l.significant);
    l.fwhm = 2.0 * hwhm;
    l.u_amplitude = u[0];
    l.u_center = u[1];
    l.u_fwhm = 2.0 * u[2];
    l.u_offset = u[3];
    return l;
}

namespace {

// Log-linear regression of ln(y - floor) against t for initial decay guesses.
bool log_linear_guess(const std::vector<double>& t, const std::vector<double>& y, double floor,
                      double& amp, double& rate) {
    double sw = 0, st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = y[i] - floor;
        if (v <= 0.0) continue;
        const double w = v * v;  // weights approximate absolute least squares
        const double l = std::log(v);
        sw += w;
        st += w * t[i];
        sl += w * l;
        stt += w * t[i] * t[i];
        stl += w * t[i] * l;
    }
    const double det = sw * stt - st * st;
    if (!(sw > 0.0) || std::abs(det) < 1e-300) return false;
    const double slope = (sw * stl - st * sl) / det;
    const double intercept = (sl * stt - st * stl) / det;
    rate = -slope;
    amp = std::exp(intercept);
    return std::isfinite(rate) && std::isfinite(amp);
}

}  // namespace

ExponentialFit fit_exponential(const SimCurve& curve, bool fit_offset) {
    curve.require_consistent();
    if (curve.size() < (fit_offset ? 4u : 3u)) {
        throw NumericError("fit_exponential: too few points");
    }
    const double y_max = *std::max_element(curve.y.begin(), curve.y.end());
    const double y_min = *std::min_element(curve.y.begin(), curve.y.end());
    if (!(y_max > 0.0)) throw NumericError("fit_exponential: data must be positive somewhere");
    if (y_max == y_min) {
        throw NumericError("fit_exponential: constant data, rate indistinguishable from zero");
    }

    const double t0 = curve.x.front();
    const double t_span = curve.x.back() - t0;
    std::vector<double> t(curve.size()), y(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        t[i] = (curve.x[i] - t0) / t_span;
        y[i] = curve.y[i] / y_max;
    }

    double amp0 = 1.0, rate0 = 1.0;
    const double floor0 = fit_offset ? std::max(y_min / y_max, 0.0) * 0.5 : 0.0;
    if (!log_linear_guess(t, y, floor0, amp0, rate0) || rate0 <= 0.0) {
        amp0 = 1.0;
        rate0 = 2.0;
    }

    ModelFn model;
    std::vector<double> p0, lo, hi;
    if (fit_offset) {
        model = [](double x, const std::vector<double>& p) {
            return p[0] * std::exp(-p[1] * x) + p[2];
        };
        p0 = {amp0, rate0, floor0};
        lo = {0.0, 1e-9, -1.0};
        hi = {100.0, 1e6, 1.0};
    } else {
        model = [](double x, const std::vector<double>& p) { return p[0] * std::exp(-p[1] * x); };
        p0 = {amp0, rate0};
        lo = {0.0, 1e-9};
        hi = {100.0, 1e6};
    }
    Lsq fit = lsq_fit(t, y, model, p0, lo, hi);

    ExponentialFit out;
    out.amplitude = fit.p[0] * y_max;
    out.rate = fit.p[1] / t_span;
    out.offset = fit_offset ? fit.p[2] * y_max : 0.0;
    out.u_amplitude = fit.u[0] * y_max;
    out.u_rate = fit.u[1] / t_span;
    out.u_offset = fit_offset ? fit.u[2] * y_max : 0.0;
    out.cost = fit.cost * y_max * y_max;
    out.converged = fit.converged;
    if (!(out.rate * t_span > 1e-6)) {
        throw NumericError("fit_exponential: rate indistinguishable from zero over the window");
    }
    return out;
}

BiexponentialFit fit_biexponential(const SimCurve& curve) {
    curve.require_consistent();
    if (curve.size() < 8) throw NumericError("fit_biexponential: too few points");

    // Seed from the single-exponential fit, splitting it into a dominant
    // faster component and a small slower one.
    const ExponentialFit single = fit_exponential(curve, true);

    const double y_max = *std::max_element(curve.y.begin(), curve.y.end());
    const double t0 = curve.x.front();
    const double t_span = curve.x.back() - t0;
    std::vector<double> t(curve.size()), y(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        t[i] = (curve.x[i] - t0) / t_span;
        y[i] = curve.y[i] / y_max;
    }
    const double a = single.amplitude / y_max;
    const double r = single.rate * t_span;

    ModelFn model = [](double x, const std::vector<double>& p) {
        return p[0] * std::exp(-p[1] * x) + p[2] * std::exp(-p[3] * x) + p[4];
    };
    std::vector<double> p0{0.92 * a, 1.25 * r, 0.08 * a, 0.45 * r, single.offset / y_max};
    std::vector<double> lo{0.0, 1e-9, 0.0, 1e-9, -1.0};
    std::vector<double> hi{100.0, 1e6, 100.0, 1e6, 1.0};
    Lsq fit = lsq_fit(t, y, model, p0, lo, hi, 1e-16, 12000);

    BiexponentialFit out;
    double a1 = fit.p[0] * y_max, r1 = fit.p[1] / t_span, ur1 = fit.u[1] / t_span;
    double a2 = fit.p[2] * y_max, r2 = fit.p[3] / t_span, ur2 = fit.u[3] / t_span;
    if (a2 > a1) {
        std::swap(a1, a2);
        std::swap(r1, r2);
        std::swap(ur1, ur2);
    }
    out.amp1 = a1;
    out.rate1 = r1;
    out.amp2 = a2;
    out.rate2 = r2;
    out.offset = fit.p[4] * y_max;
    out.dominant_weight = (a1 + a2) > 0.0 ? a1 / (a1 + a2) : 0.0;
    out.u_rate1 = ur1;
    out.u_rate2 = ur2;
    out.cost = fit.cost * y_max * y_max;
    out.converged = fit.converged;
    out.rate_degenerate = std::abs(r1 - r2) < 0.05 * std::max(std::abs(r1), std::abs(r2));
    return out;
}

PurcellLorentzianFit fit_purcell_lorentzian(const SimCurve& curve) {
    curve.require_consistent();
    if (curve.size() < 5) throw NumericError("fit_purcell_lorentzian: need at least 5 points");

    const double x_scale = std::max(std::abs(curve.x.front()), std::abs(curve.x.back()));
    if (!(x_scale > 0.0)) throw NumericError("fit_purcell_lorentzian: degenerate detuning axis");
    std::vector<double> x(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) x[i] = curve.x[i] / x_scale;

    const double y_max = *std::max_element(curve.y.begin(), curve.y.end());
    const double y_min = *std::min_element(curve.y.begin(), curve.y.end());

    ModelFn model = [](double d, const std::vector<double>& p) {
        const double u = 2.0 * d / p[1];
        return p[0] / (1.0 + u * u) + p[2];
    };
    std::vector<double> p0{std::max(y_max - y_min, 1e-3), 0.25, std::max(y_min, 0.0)};
    std::vector<double> lo{0.0, 1e-4, 0.0};
    std::vector<double> hi{1e4, 10.0, 100.0};
    Lsq fit = lsq_fit(x, curve.y, model, p0, lo, hi, 1e-14, 6000);

    PurcellLorentzianFit out;
    out.fit.p_t = fit.p[0];
    out.fit.kappa_tilde = fit.p[1] * x_scale;
    out.fit.gamma_inf_ratio = fit.p[2];
    out.u_p_t = fit.u[0];
    out.u_kappa_tilde = fit.u[1] * x_scale;
    out.u_gamma_inf_ratio = fit.u[2];
    out.cost = fit.cost;
    out.converged = fit.converged;

    double mean = 0.0;
    for (double v : curve.y) mean += v;
    mean /= static_cast<double>(curve.size());
    double ss_tot = 0.0;
    for (double v : curve.y) ss_tot += (v - mean) * (v - mean);
    out.r_squared = ss_tot > 0.0 ? 1.0 - fit.cost / ss_tot : 0.0;
    return out;
}

}  // namespace cqed
