#include "cqed/analytics.hpp"

#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

double purcell_lorentzian(double delta_ac_hz, const PurcellFit& fit) {
    const double u = 2.0 * delta_ac_hz / fit.kappa_tilde;
    return fit.p_t / (1.0 + u * u) + fit.gamma_inf_ratio;
}

RateBudget rate_decomposition(double gamma0_hz, double dw, double eta_qe) {
    if (dw < 0.0 || dw > 1.0 || eta_qe < 0.0 || eta_qe > 1.0) {
        throw NumericError("rate_decomposition: DW and eta_QE must lie in [0, 1]");
    }
    RateBudget b;
    b.dw = dw;
    b.eta_qe = eta_qe;
    b.gamma_zpl = dw * eta_qe * gamma0_hz;
    b.gamma_psb = (1.0 - dw) * eta_qe * gamma0_hz;
    b.gamma_nr = (1.0 - eta_qe) * gamma0_hz;
    return b;
}

double beta_factor(double p_t) { return p_t / (p_t + 1.0); }

double zpl_purcell_bound(double p_t, double dw) {
    if (!(dw > 0.0)) throw NumericError("zpl_purcell_bound: DW must be > 0");
    return p_t / dw;
}

double qe_lower_bound(double p_t, double dw, double p_sim_unity_qe) {
    if (!(p_sim_unity_qe > 0.0)) {
        throw NumericError("qe_lower_bound: simulated Purcell factor must be > 0");
    }
    const double arg = p_t / (dw * p_sim_unity_qe);
    if (arg > 1.0) {
        throw NumericError("qe_lower_bound: infeasible, measured bound exceeds simulated ceiling");
    }
    return std::sqrt(arg);
}

double dipole_moment(double dw, double eta_qe, double gamma0_hz, double omega_hz,
                     double n_host) {
    using namespace constants;
    const double gamma_zpl_ang = angular(dw * eta_qe * gamma0_hz);
    const double omega_ang = angular(omega_hz);
    const double n2 = n_host * n_host;
    const double local_field = 3.0 * n2 / (2.0 * n2 + 1.0);
    const double denom = local_field * local_field * n_host * omega_ang * omega_ang * omega_ang;
    const double numer = gamma_zpl_ang * 3.0 * pi * eps0 * hbar * c_light * c_light * c_light;
    return std::sqrt(numer / denom);
}

double coupling_from_sim_purcell(double p_sim, double kappa_tilde_hz, double gamma0_hz) {
    if (p_sim < 0.0) throw NumericError("coupling_from_sim_purcell: P_sim must be >= 0");
    return 0.5 * std::sqrt(p_sim * kappa_tilde_hz * gamma0_hz);
}

double system_efficiency(const EfficiencyChain& chain) {
    return chain.eta_cav * chain.eta_gc * chain.eta_path * chain.eta_snspd;
}

double eta_cav_from_reflection(double r, bool over_coupled) {
    if (r < 0.0 || r > 1.0) throw NumericError("eta_cav_from_reflection: R must lie in [0, 1]");
    const double root = std::sqrt(r);
    return over_coupled ? (1.0 + root) / 2.0 : (1.0 - root) / 2.0;
}

double saturation_counts(double eta_sys, double beta, double t0_s, double tau_s) {
    return 0.5 * eta_sys * beta * std::exp(-t0_s / tau_s);
}

std::array<double, 2> waveguide_efficiency_bounds(double c_sat, double t0_s, double tau_s,
                                                  double eta_col, double eta_path,
                                                  double eta_snspd,
                                                  std::array<double, 2> eta_qe_range) {
    if (!(c_sat > 0.0)) throw NumericError("waveguide_efficiency_bounds: c_sat must be > 0");
    auto eta_wg = [&](double eta_qe) {
        if (!(eta_qe > 0.0 && eta_qe <= 1.0)) {
            throw NumericError("waveguide_efficiency_bounds: eta_QE range must lie in (0, 1]");
        }
        return c_sat * std::exp(t0_s / tau_s) /
               (0.5 * eta_qe * eta_col * eta_path * eta_snspd);
    };
    // Upper waveguide efficiency comes from the lower quantum efficiency.
    std::array<double, 2> bounds{eta_wg(eta_qe_range[1]), eta_wg(eta_qe_range[0])};
    if (bounds[1] > 1.0) {
        throw NumericError("waveguide_efficiency_bounds: infeasible, eta_wg exceeds 1");
    }
    return bounds;
}

double g2_snr_limit(double snr) {
    return (2.0 * snr + 1.0) / ((snr + 1.0) * (snr + 1.0));
}

double zeeman_amplitude(double b_tesla, const ZeemanModel& m) {
    const double splitting = m.delta_g * m.mu_b_over_h * b_tesla;
    const double g2 = m.linewidth * m.linewidth;
    return g2 / (g2 + splitting * splitting);
}

double thermal_linewidth(double temperature_k, const ThermalModel& m) {
    if (!(temperature_k > 0.0)) return m.p0;
    return m.p0 + m.p_t_coeff / std::expm1(m.e_a / (m.k_b * temperature_k));
}

NearestNeighbor nuclear_spin_separation(double rho_per_cm3) {
    if (!(rho_per_cm3 > 0.0)) throw NumericError("nuclear_spin_separation: density must be > 0");
    const double four_pi_rho_third = 4.0 * constants::pi * rho_per_cm3 / 3.0;
    NearestNeighbor nn;
    nn.d_nn_cm = std::tgamma(4.0 / 3.0) * std::pow(four_pi_rho_third, -1.0 / 3.0);
    nn.pdf = [rho_per_cm3, four_pi_rho_third](double r_cm) {
        return 3.0 * four_pi_rho_third * r_cm * r_cm *
               std::exp(-four_pi_rho_third * r_cm * r_cm * r_cm);
    };
    return nn;
}

double kappa_tilde_approx(double kappa_hz, double gamma_d_hz) {
    return kappa_hz + 2.0 * gamma_d_hz;
}

}  // namespace cqed
