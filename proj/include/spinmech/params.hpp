#pragma once

#include "spinmech/config.hpp"

namespace spinmech {

// Device-side parameters, internal units: SI lengths/powers, angular rad/s for
// every frequency or rate.
struct DeviceParams {
    double lambda_o = 0;        // m
    double q_optical = 0;       // dimensionless
    double omega_m = 0;         // rad/s
    double q_mech = 0;          // dimensionless
    double g_om = 0;            // rad/s
    double x_max = 0;           // m
    double p_max = 0;           // Pa
    double p_single_phonon = 0; // Pa
    double p_threshold_in = 0;  // W, fiber-input self-oscillation threshold

    static DeviceParams from_config(const Config& cfg);
    void validate() const; // throws InvalidArgument on non-positive fields
    double omega_o() const; // optical angular frequency 2*pi*c/lambda_o
};

struct DerivedRates {
    double kappa = 0;   // rad/s
    double gamma_m = 0; // rad/s
    bool sideband_resolved = false;
};

DerivedRates derived_rates(const DeviceParams& d);

struct SpinParams {
    double gamma_e = 0;          // Hz/T
    double b_field = 0;          // T
    double g_str = 0;            // Hz/Pa
    double eta = 0;              // dimensionless in [0,1]
    double t2_star = 0;          // s
    double hyperfine_offset = 0; // rad/s, offset magnitude for nuclear projection +-1

    static SpinParams from_config(const Config& cfg);
    void validate() const;
    // Transition-frequency offset for nuclear projection in {-1, 0, +1}.
    double hyperfine_offset_for(int nuclear_projection) const;
};

// Drive bookkeeping: injection tone vs mechanical vs spin frequencies.
// Detuning conventions (all angular):
//   delta_mi = omega_m - omega_inj
//   delta_sm = omega_s - omega_m
//   delta_si = omega_s - omega_inj = delta_sm + delta_mi
struct DriveConfig {
    double omega_inj = 0;         // rad/s
    double omega_m_intrinsic = 0; // rad/s
    double gamma_tune = 0;        // rad/s, lock-profile PSD FWHM
    double omega_s = 0;           // rad/s
    double drive_power_in = 0;    // W

    double delta_mi() const { return omega_m_intrinsic - omega_inj; }
    double delta_sm() const { return omega_s - omega_m_intrinsic; }
    double delta_si() const { return delta_sm() + delta_mi(); }

    // Defaults: injection tone on mechanical resonance, spin frequency from the
    // m_I = 0 transition, drive power at the self-oscillation threshold.
    static DriveConfig from_config(const Config& cfg, const DeviceParams& d, const SpinParams& sp);
};

} // namespace spinmech
