#include "cqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cqed/constants.hpp"
#include "cqed/curve_fit.hpp"
#include "cqed/errors.hpp"
#include "cqed/liouvillian.hpp"
#include "cqed/parallel.hpp"

namespace cqed {

double intracavity_photons(const DriveSpec& p, const SystemParams& s) {
    if (p.p_in_w < 0.0) throw NumericError("intracavity_photons: input power must be >= 0");
    const double kappa = angular(s.kappa_hz);
    const double delta_c = angular(s.omega_c_hz() - p.omega_l_hz);
    const double lorentz = 1.0 / (1.0 + (2.0 * delta_c / kappa) * (2.0 * delta_c / kappa));
    const double photon_flux = p.p_in_w / (constants::hbar * angular(s.omega_a_hz));
    return 4.0 * (s.eta_cav / kappa) * lorentz * photon_flux;
}

double rabi_frequency(double n_ph, double g_hz) {
    if (n_ph < 0.0) throw NumericError("rabi_frequency: photon number must be >= 0");
    return 2.0 * g_hz * std::sqrt(n_ph);
}

Matrix build_hamiltonian(const SystemParams& s, double omega_l_hz, double omega_rabi_hz,
                         const HilbertSpace& hs) {
    const double delta_a = angular(s.omega_a_hz - omega_l_hz);
    const double delta_c = angular(s.omega_c_hz() - omega_l_hz);
    const double g = angular(s.g_hz);
    const double half_rabi = 0.5 * angular(omega_rabi_hz);

    const Matrix sm = atom_lowering(hs);
    const Matrix sp = atom_raising(hs);
    const Matrix a = cavity_annihilation(hs);

    Matrix h = delta_a * atom_excited_projector(hs) + delta_c * cavity_number(hs) +
               g * (sp * a + sm * a.adjoint());
    if (half_rabi != 0.0) h += half_rabi * (sp + sm);
    return h;
}

std::vector<Matrix> jump_operators(const SystemParams& s, const HilbertSpace& hs) {
    return {std::sqrt(angular(s.kappa_hz)) * cavity_annihilation(hs),
            std::sqrt(angular(s.gamma0_hz)) * atom_lowering(hs),
            std::sqrt(0.5 * angular(s.gamma_d_hz)) * atom_sigma_z(hs)};
}

DiffusionQuadrature gaussian_quadrature_for_diffusion(double gamma_sd_hz, int n_points,
                                                      double span_sigmas) {
    if (gamma_sd_hz < 0.0) throw NumericError("diffusion quadrature: gamma_sd must be >= 0");
    if (n_points != 1 && (n_points < 3 || n_points % 2 == 0)) {
        throw NumericError("diffusion quadrature: point count must be odd and >= 3");
    }
    if (gamma_sd_hz == 0.0 || n_points == 1) {
        return DiffusionQuadrature{{0.0}, {1.0}};
    }
    // FWHM of the offset distribution is 2 Gamma_sd.
    const double sigma = 2.0 * gamma_sd_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double span = span_sigmas * sigma;
    const double step = 2.0 * span / static_cast<double>(n_points - 1);

    DiffusionQuadrature q;
    q.offsets_hz.resize(n_points);
    q.weights.resize(n_points);
    double total = 0.0;
    const int half = n_points / 2;
    for (int j = 0; j < n_points; ++j) {
        const double offset = static_cast<double>(j - half) * step;
        q.offsets_hz[j] = offset;
        const double z = offset / sigma;
        q.weights[j] = std::exp(-0.5 * z * z);
        total += q.weights[j];
    }
    for (double& w : q.weights) w /= total;
    return q;
}

namespace {

// Diagonal weights for fast expectation values of diagonal observables on the
// column-vectorized state.
std::vector<double> cavity_number_weights(const HilbertSpace& hs) {
    std::vector<double> w(hs.total_dim());
    for (int i = 0; i < HilbertSpace::atom_dim; ++i) {
        for (int n = 0; n < hs.fock_dim; ++n) w[i * hs.fock_dim + n] = static_cast<double>(n);
    }
    return w;
}

std::vector<double> top_fock_weights(const HilbertSpace& hs) {
    std::vector<double> w(hs.total_dim(), 0.0);
    for (int i = 0; i < HilbertSpace::atom_dim; ++i) w[i * hs.fock_dim + hs.fock_dim - 1] = 1.0;
    return w;
}

double diag_expectation(const Vector& v, const std::vector<double>& weights, int dim) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double w = weights[static_cast<std::size_t>(k)];
        if (w != 0.0) acc += w * v[k * dim + k].real();
    }
    return acc;
}

struct WindowGrid {
    double start = 0, length = 0, dt = 0;
    long steps = 0;
};

WindowGrid collection_window(const DriveSpec& d, const SimOptions& o) {
    WindowGrid g;
    g.start = d.pulse_width_s + d.t0_s;
    g.length = d.repetition_period_s - g.start;
    if (!(g.length > 0.0)) {
        throw ConfigError("collection window is empty (pulse + t0 >= repetition period)");
    }
    g.steps = std::max(o.window_min_steps,
                       static_cast<long>(std::ceil(g.length / o.window_dt_max)));
    g.dt = g.length / static_cast<double>(g.steps);
    return g;
}

// Everything reusable across laser frequencies and powers for one system
// configuration: per diffusion offset, the drive-off generator is built in
// the fixed nominal-emitter frame. The excitation-number-conserving free
// dynamics make the measured rate independent of the rotating frame, which is
// what lets these propagators be shared across scan points (asserted by a
// unit test against an all-laser-frame reference).
class CountsKernel {
public:
    CountsKernel(const SystemParams& s, const DriveSpec& d, const SimOptions& opts)
        : nominal_(s), drive_(d), opts_(opts), hs_{opts.fock_levels} {
        s.validate();
        d.validate();
        if (hs_.fock_dim < 2) throw ConfigError("fock_levels must be >= 2");
        window_ = collection_window(d, opts);
        quad_ = gaussian_quadrature_for_diffusion(s.gamma_sd_hz, opts.diffusion_points,
                                                  opts.diffusion_span_sigmas);
        ncav_ = cavity_number_weights(hs_);
        top_ = top_fock_weights(hs_);
        kappa_ang_ = angular(s.kappa_hz);

        Vector ground = Vector::Zero(hs_.total_dim());
        ground(0) = 1.0;
        v0_ = vectorize((ground * ground.adjoint()).eval());

        const std::size_t n = quad_.offsets_hz.size();
        shifted_.reserve(n);
        prop_t0_.reserve(n);
        prop_window_.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const SystemParams sk = s.with_atom_shift(quad_.offsets_hz[k]);
            shifted_.push_back(sk);
            const Liouvillian l_off(build_hamiltonian(sk, s.omega_a_hz, 0.0, hs_),
                                    jump_operators(sk, hs_));
            prop_t0_.push_back(d.t0_s > 0.0 ? propagator(l_off, d.t0_s) : Matrix());
            prop_window_.push_back(propagator(l_off, window_.dt));
        }
    }

    // Counts per pulse at the given laser frequency and input power,
    // diffusion-averaged. Truncation failures double the Fock space and
    // recompute this point up to the configured ceiling.
    double counts(double omega_l_hz, double p_in_w) const {
        try {
            double acc = 0.0;
            for (std::size_t k = 0; k < quad_.weights.size(); ++k) {
                acc += quad_.weights[k] * counts_one_offset(k, omega_l_hz, p_in_w);
            }
            return acc;
        } catch (const TruncationError&) {
            SimOptions retry = opts_;
            retry.fock_levels = 2 * (opts_.fock_levels - 1) + 1;
            if (retry.fock_levels > opts_.max_fock_levels) throw;
            DriveSpec d = drive_;
            d.omega_l_hz = omega_l_hz;
            d.p_in_w = p_in_w;
            return CountsKernel(nominal_, d, retry).counts(omega_l_hz, p_in_w);
        }
    }

    const DiffusionQuadrature& quadrature() const { return quad_; }

private:
    void require_truncation_ok(const Vector& v) const {
        if (!(diag_expectation(v, top_, hs_.total_dim()) < opts_.truncation_tol)) {
            throw TruncationError("top Fock level population exceeds tolerance (N_max = " +
                                  std::to_string(hs_.n_max()) + ")");
        }
    }

    double counts_one_offset(std::size_t k, double omega_l_hz, double p_in_w) const {
        const SystemParams& sk = shifted_[k];
        DriveSpec d = drive_;
        d.omega_l_hz = omega_l_hz;
        d.p_in_w = p_in_w;

        const double n_ph = intracavity_photons(d, sk);
        const double omega_rabi = rabi_frequency(n_ph, sk.g_hz);
        const Liouvillian l_on(build_hamiltonian(sk, omega_l_hz, omega_rabi, hs_),
                               jump_operators(sk, hs_));

        const int dim = hs_.total_dim();
        Vector v = propagator(l_on, d.pulse_width_s) * v0_;
        require_truncation_ok(v);
        if (d.t0_s > 0.0) v = prop_t0_[k] * v;

        double y_prev = diag_expectation(v, ncav_, dim);
        double integral = 0.0;
        for (long step = 0; step < window_.steps; ++step) {
            v = prop_window_[k] * v;
            require_truncation_ok(v);
            const double y = diag_expectation(v, ncav_, dim);
            integral += 0.5 * (y_prev + y) * window_.dt;
            y_prev = y;
        }
        return d.eta_sys * kappa_ang_ * integral;
    }

    SystemParams nominal_;
    DriveSpec drive_;
    SimOptions opts_;
    HilbertSpace hs_;
    WindowGrid window_;
    DiffusionQuadrature quad_;
    std::vector<double> ncav_, top_;
    double kappa_ang_ = 0;
    Vector v0_;
    std::vector<SystemParams> shifted_;
    std::vector<Matrix> prop_t0_, prop_window_;
};

// Weighted-average detected-rate trace over one full pulse cycle.
SimCurve averaged_trace(const SystemParams& s, const DriveSpec& d, const SimOptions& opts) {
    const HilbertSpace hs{opts.fock_levels};
    const DiffusionQuadrature quad = gaussian_quadrature_for_diffusion(
        s.gamma_sd_hz, opts.diffusion_points, opts.diffusion_span_sigmas);
    const double eta_kappa = d.eta_sys * angular(s.kappa_hz);

    std::vector<SimCurve> per_offset(quad.offsets_hz.size());
    parallel_for(
        quad.offsets_hz.size(),
        [&](std::size_t k) {
            const SystemParams sk = s.with_atom_shift(quad.offsets_hz[k]);
            const double n_ph = intracavity_photons(d, sk);
            const double omega_rabi = rabi_frequency(n_ph, sk.g_hz);
            const std::vector<Matrix> jumps = jump_operators(sk, hs);
            const Liouvillian l_on(build_hamiltonian(sk, d.omega_l_hz, omega_rabi, hs), jumps);
            const Liouvillian l_off(build_hamiltonian(sk, s.omega_a_hz, 0.0, hs), jumps);

            EvolveOptions eopts;
            eopts.dt_record = opts.dt_record;
            eopts.truncation_projector = top_fock_projector(hs);
            eopts.truncation_tol = opts.truncation_tol;

            EvolveResult r = evolve_trace(
                DensityMatrix::ground(hs),
                {{&l_on, d.pulse_width_s}, {&l_off, d.repetition_period_s - d.pulse_width_s}},
                {cavity_number(hs)}, eopts);
            per_offset[k] = std::move(r.traces[0]);
        },
        opts.threads);

    SimCurve trace;
    trace.x = per_offset[0].x;
    trace.y.assign(trace.x.size(), 0.0);
    for (std::size_t k = 0; k < per_offset.size(); ++k) {
        for (std::size_t i = 0; i < trace.y.size(); ++i) {
            trace.y[i] += quad.weights[k] * per_offset[k].y[i];
        }
    }
    for (double& y : trace.y) y *= eta_kappa;
    trace.meta["x_label"] = "time";
    trace.meta["x_unit"] = "s";
    trace.meta["y_label"] = "detected_rate";
    trace.meta["y_unit"] = "counts/s";
    return trace;
}

template <typename F>
auto with_truncation_retry(const SimOptions& opts, F&& body) {
    SimOptions o = opts;
    for (;;) {
        try {
            return body(o);
        } catch (const TruncationError&) {
            const int doubled = 2 * (o.fock_levels - 1) + 1;
            if (doubled > o.max_fock_levels) throw;
            o.fock_levels = doubled;
        }
    }
}

}  // namespace

double counts_per_pulse(const SystemParams& s, const DriveSpec& d, const SimOptions& opts) {
    return CountsKernel(s, d, opts).counts(d.omega_l_hz, d.p_in_w);
}

PulseCycle simulate_pulse_cycle(const SystemParams& s, const DriveSpec& d,
                                const SimOptions& opts) {
    PulseCycle cycle;
    cycle.decay_trace = with_truncation_retry(
        opts, [&](const SimOptions& o) { return averaged_trace(s, d, o); });
    cycle.counts_per_pulse = counts_per_pulse(s, d, opts);
    return cycle;
}

DecayRateFit extract_decay_rate(const SimCurve& trace, double fit_start_s) {
    trace.require_consistent();
    SimCurve window;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.x[i] >= fit_start_s) {
            window.x.push_back(trace.x[i]);
            window.y.push_back(trace.y[i]);
        }
    }
    if (window.size() < 8) throw NumericError("extract_decay_rate: fit window too short");
    const double peak = *std::max_element(window.y.begin(), window.y.end());
    if (!(peak > 0.0)) throw NumericError("extract_decay_rate: no signal in fit window");

    // Drop the underflowed tail so deep-Purcell decays fit cleanly.
    SimCurve trimmed;
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (window.y[i] > peak * 1e-12) {
            trimmed.x.push_back(window.x[i]);
            trimmed.y.push_back(window.y[i]);
        } else {
            break;
        }
    }
    if (trimmed.size() < 8) throw NumericError("extract_decay_rate: fit window too short");

    const ExponentialFit fit = fit_exponential(trimmed, /*fit_offset=*/false);
    DecayRateFit out;
    out.rate = fit.rate;
    out.uncertainty = fit.u_rate;
    out.amplitude = fit.amplitude;
    out.converged = fit.converged;
    return out;
}

SimCurve ple_spectrum(const SystemParams& s, const DriveSpec& d,
                      const std::vector<double>& scan_hz, const SimOptions& opts) {
    for (std::size_t i = 1; i < scan_hz.size(); ++i) {
        if (!(scan_hz[i] > scan_hz[i - 1])) {
            throw NumericError("ple_spectrum: scan must be strictly increasing");
        }
    }
    const CountsKernel kernel(s, d, opts);
    SimCurve spec;
    spec.x = scan_hz;
    spec.y.assign(scan_hz.size(), 0.0);
    parallel_for(
        scan_hz.size(), [&](std::size_t i) { spec.y[i] = kernel.counts(scan_hz[i], d.p_in_w); },
        opts.threads);
    spec.meta["x_label"] = "laser_frequency";
    spec.meta["x_unit"] = "Hz";
    spec.meta["y_label"] = "counts_per_pulse";
    spec.meta["y_unit"] = "1";
    return spec;
}

std::vector<double> default_ple_scan(const SystemParams& s, const DriveSpec& d, int n_points,
                                     double span_linewidths) {
    if (n_points < 2) throw NumericError("default_ple_scan: need at least 2 points");
    // Rough linewidth estimate: power-broadened homogeneous Lorentzian
    // combined with the spectral-diffusion Gaussian (Voigt approximation).
    const double purcell = 4.0 * s.g_hz * s.g_hz /
                           ((s.kappa_hz + 2.0 * s.gamma_d_hz) * std::max(s.gamma0_hz, 1.0));
    const double gamma_par = s.gamma0_hz * (1.0 + purcell);
    const double gamma_perp = 0.5 * gamma_par + s.gamma_d_hz;
    DriveSpec on_resonance = d;
    on_resonance.omega_l_hz = s.omega_a_hz;
    const double omega_rabi = rabi_frequency(intracavity_photons(on_resonance, s), s.g_hz);
    const double sat = gamma_perp > 0.0 && gamma_par > 0.0
                           ? omega_rabi * omega_rabi / (gamma_perp * gamma_par)
                           : 0.0;
    const double f_lorentz = 2.0 * gamma_perp * std::sqrt(1.0 + sat);
    const double f_gauss = 2.0 * s.gamma_sd_hz;
    const double fwhm_est =
        0.5346 * f_lorentz + std::sqrt(0.2166 * f_lorentz * f_lorentz + f_gauss * f_gauss);

    const double span = span_linewidths * std::max(fwhm_est, 10.0 * s.gamma0_hz);
    std::vector<double> scan(n_points);
    for (int i = 0; i < n_points; ++i) {
        scan[i] = s.omega_a_hz - span +
                  2.0 * span * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return scan;
}

SimCurve saturation_curve(const SystemParams& s, const DriveSpec& d_template,
                          const std::vector<double>& powers_w, const SimOptions& opts) {
    for (std::size_t i = 0; i < powers_w.size(); ++i) {
        if (powers_w[i] < 0.0) throw NumericError("saturation_curve: powers must be >= 0");
        if (i > 0 && !(powers_w[i] > powers_w[i - 1])) {
            throw NumericError("saturation_curve: powers must be strictly increasing");
        }
    }
    DriveSpec d = d_template;
    d.omega_l_hz = s.omega_a_hz;  // line center
    const CountsKernel kernel(s, d, opts);
    SimCurve curve;
    curve.x = powers_w;
    curve.y.assign(powers_w.size(), 0.0);
    parallel_for(
        powers_w.size(),
        [&](std::size_t i) { curve.y[i] = kernel.counts(s.omega_a_hz, powers_w[i]); },
        opts.threads);
    curve.meta["x_label"] = "input_power";
    curve.meta["x_unit"] = "W";
    curve.meta["y_label"] = "counts_per_pulse";
    curve.meta["y_unit"] = "1";
    return curve;
}

SimCurve decay_vs_detuning(const SystemParams& s, const DriveSpec& d,
                           const std::vector<double>& detunings_hz, const SimOptions& opts) {
    for (std::size_t i = 1; i < detunings_hz.size(); ++i) {
        if (!(detunings_hz[i] > detunings_hz[i - 1])) {
            throw NumericError("decay_vs_detuning: detunings must be strictly increasing");
        }
    }
    const double gamma0_rate = angular(s.gamma0_hz);
    SimCurve curve;
    curve.x = detunings_hz;
    curve.y.assign(detunings_hz.size(), 0.0);
    curve.sigma.assign(detunings_hz.size(), 0.0);
    parallel_for(
        detunings_hz.size(),
        [&](std::size_t i) {
            SystemParams sd = s;
            sd.delta_ac_hz = detunings_hz[i];
            DriveSpec dd = d;
            dd.omega_l_hz = s.omega_a_hz;  // laser fixed at the emitter line
            const SimCurve trace = with_truncation_retry(
                opts, [&](const SimOptions& o) { return averaged_trace(sd, dd, o); });
            const DecayRateFit fit =
                extract_decay_rate(trace, dd.pulse_width_s + dd.t0_s);
            curve.y[i] = fit.rate / gamma0_rate;
            curve.sigma[i] = fit.uncertainty / gamma0_rate;
        },
        opts.threads);
    curve.meta["x_label"] = "cavity_detuning";
    curve.meta["x_unit"] = "Hz";
    curve.meta["y_label"] = "decay_rate_enhancement";
    curve.meta["y_unit"] = "1";
    return curve;
}

SpectrumMap spectrum_map_2d(const SystemParams& s, const DriveSpec& d,
                            const std::vector<double>& detunings_hz,
                            const std::vector<double>& scan_hz, const SimOptions& opts) {
    SpectrumMap map;
    map.detunings_hz = detunings_hz;
    map.scan_hz = scan_hz;
    map.counts.resize(static_cast<long>(detunings_hz.size()), static_cast<long>(scan_hz.size()));
    parallel_for(
        detunings_hz.size(),
        [&](std::size_t r) {
            SystemParams sd = s;
            sd.delta_ac_hz = detunings_hz[r];
            const SimCurve row = ple_spectrum(sd, d, scan_hz, opts);
            for (std::size_t c = 0; c < scan_hz.size(); ++c) {
                map.counts(static_cast<long>(r), static_cast<long>(c)) = row.y[c];
            }
        },
        opts.threads);
    return map;
}

}  // namespace cqed
