#pragma once

#include <string>
#include <vector>

namespace cqed {

// Physical parameters of the coupled emitter-cavity system. All rates and
// frequencies are ordinary (non-angular) Hz; the 2*pi conversion happens
// inside the solver layers.
struct SystemParams {
    double g_hz = 42.4e6;        // emitter-cavity coupling
    double kappa_hz = 5.22e9;    // cavity linewidth
    double gamma0_hz = 169.3e3;  // bare spontaneous emission rate
    double gamma_d_hz = 0.645e9; // pure dephasing rate
    double gamma_sd_hz = 1.69e9; // spectral diffusion half-width parameter
    double omega_a_hz = 226.142e12;  // emitter transition frequency
    double eta_cav = 0.358;      // cavity-to-waveguide fraction
    double delta_ac_hz = 0.0;    // cavity-emitter detuning, omega_c - omega_a

    double omega_c_hz() const { return omega_a_hz + delta_ac_hz; }

    // Returns a copy with the emitter shifted by delta (spectral diffusion);
    // the cavity stays fixed in the lab frame, so delta_ac shifts opposite.
    SystemParams with_atom_shift(double delta_hz) const {
        SystemParams s = *this;
        s.omega_a_hz += delta_hz;
        s.delta_ac_hz -= delta_hz;
        return s;
    }

    // Throws ConfigError on invalid values; returns human-readable warnings
    // (e.g. leaving the bad-cavity regime g < kappa).
    std::vector<std::string> validate() const;
};

// Pulsed-excitation drive and collection settings.
struct DriveSpec {
    double p_in_w = 1.21e-9;            // optical power at the cavity input
    double omega_l_hz = 226.142e12;     // laser frequency
    double pulse_width_s = 900e-9;
    double repetition_period_s = 8e-6;
    double t0_s = 170e-9;               // collection dead time after pulse end
    double eta_sys = 0.091;             // system detection efficiency

    std::vector<std::string> validate() const;
};

}  // namespace cqed
