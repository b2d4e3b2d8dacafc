#pragma once

#include "spinmech/params.hpp"

namespace spinmech {

// Injection-locked self-oscillation amplitude profile. The locked PSD peak
// follows a Lorentzian of FWHM gamma_tune in the mechanical-injection detuning;
// oscillation amplitude (hence stress) scales as the square root of the
// normalized PSD.
struct LockProfile {
    double gamma_tune = 0;              // rad/s, PSD FWHM
    double delta_range = 0;             // rad/s, demonstrated tuning span (half-width)

    static LockProfile from_drive(const DriveConfig& drive);
};

// Normalized PSD peak value 1 / (1 + (2 delta_mi / gamma_tune)^2), in [0, 1].
double psd_vs_detuning(double delta_mi, const LockProfile& lp);

// True when |delta_mi| exceeds the demonstrated tuning range; the profile is
// still evaluated there, callers surface this as a warning flag.
bool outside_tuning_range(double delta_mi, const LockProfile& lp);

// Locked stress amplitude: stress_peak * sqrt(psd_vs_detuning).
double stress_vs_detuning(double delta_mi, const LockProfile& lp, double stress_peak);

} // namespace spinmech
