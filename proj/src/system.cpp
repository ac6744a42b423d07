#include "cqed/system.hpp"

#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

namespace {
bool bad(double v) { return !std::isfinite(v); }
}

std::vector<std::string> SystemParams::validate() const {
    if (bad(g_hz) || bad(kappa_hz) || bad(gamma0_hz) || bad(gamma_d_hz) || bad(gamma_sd_hz) ||
        bad(omega_a_hz) || bad(eta_cav) || bad(delta_ac_hz)) {
        throw ConfigError("SystemParams: non-finite value");
    }
    if (g_hz <= 0.0) throw ConfigError("SystemParams: g must be > 0");
    if (kappa_hz <= 0.0) throw ConfigError("SystemParams: kappa must be > 0");
    if (gamma0_hz <= 0.0) throw ConfigError("SystemParams: gamma0 must be > 0");
    if (gamma_d_hz < 0.0) throw ConfigError("SystemParams: gamma_d must be >= 0");
    if (gamma_sd_hz < 0.0) throw ConfigError("SystemParams: gamma_sd must be >= 0");
    if (omega_a_hz <= 0.0) throw ConfigError("SystemParams: omega_a must be > 0");
    if (eta_cav < 0.0 || eta_cav > 0.5) {
        throw ConfigError("SystemParams: eta_cav must lie in [0, 0.5] (under-coupled cavity)");
    }
    std::vector<std::string> warnings;
    if (g_hz >= kappa_hz) {
        warnings.push_back("g >= kappa: outside the bad-cavity regime the model was built for");
    }
    return warnings;
}

std::vector<std::string> DriveSpec::validate() const {
    if (bad(p_in_w) || bad(omega_l_hz) || bad(pulse_width_s) || bad(repetition_period_s) ||
        bad(t0_s) || bad(eta_sys)) {
        throw ConfigError("DriveSpec: non-finite value");
    }
    if (p_in_w < 0.0) throw ConfigError("DriveSpec: input power must be >= 0");
    if (omega_l_hz <= 0.0) throw ConfigError("DriveSpec: laser frequency must be > 0");
    if (pulse_width_s <= 0.0) throw ConfigError("DriveSpec: pulse width must be > 0");
    if (pulse_width_s >= repetition_period_s) {
        throw ConfigError("DriveSpec: pulse width must be shorter than the repetition period");
    }
    if (t0_s < 0.0) throw ConfigError("DriveSpec: collection dead time must be >= 0");
    if (pulse_width_s + t0_s >= repetition_period_s) {
        throw ConfigError("DriveSpec: collection window is empty (pulse + t0 >= period)");
    }
    if (eta_sys < 0.0 || eta_sys > 1.0) {
        throw ConfigError("DriveSpec: eta_sys must lie in [0, 1]");
    }
    std::vector<std::string> warnings;
    if (p_in_w == 0.0) warnings.push_back("zero drive power: simulated signal will be flat zero");
    return warnings;
}

}  // namespace cqed
