#include "spinmech/injection_lock.hpp"

#include <cmath>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

namespace spinmech {

LockProfile LockProfile::from_drive(const DriveConfig& drive) {
    LockProfile lp;
    lp.gamma_tune = drive.gamma_tune;
    lp.delta_range = kTau * 5e6; // demonstrated +-5 MHz tuning span
    if (!(lp.gamma_tune > 0)) throw InvalidArgument("non-positive value: gamma_tune");
    return lp;
}

double psd_vs_detuning(double delta_mi, const LockProfile& lp) {
    double u = 2.0 * delta_mi / lp.gamma_tune;
    return 1.0 / (1.0 + u * u);
}

bool outside_tuning_range(double delta_mi, const LockProfile& lp) {
    return std::abs(delta_mi) > lp.delta_range;
}

double stress_vs_detuning(double delta_mi, const LockProfile& lp, double stress_peak) {
    if (stress_peak < 0) throw InvalidArgument("stress amplitude must be nonnegative");
    return stress_peak * std::sqrt(psd_vs_detuning(delta_mi, lp));
}

} // namespace spinmech
