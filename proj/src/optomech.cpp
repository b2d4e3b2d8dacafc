#include "spinmech/optomech.hpp"

#include <cmath>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

namespace spinmech {

OscillatorState OscillatorState::from_displacement(double x, const DeviceParams& d) {
    if (x < 0) throw InvalidArgument("displacement must be nonnegative");
    OscillatorState s;
    s.displacement_amp = x;
    s.stress_amp = d.p_max * (x / d.x_max);
    double ratio = s.stress_amp / d.p_single_phonon;
    s.phonon_number_equivalent = ratio * ratio;
    return s;
}

double cooperativity_om(double n_photons, const DeviceParams& d) {
    if (n_photons < 0) throw InvalidArgument("photon number must be nonnegative");
    DerivedRates r = derived_rates(d);
    return 4.0 * n_photons * d.g_om * d.g_om / (r.kappa * r.gamma_m);
}

double threshold_photons(const DeviceParams& d) {
    DerivedRates r = derived_rates(d);
    return r.kappa * r.gamma_m / (4.0 * d.g_om * d.g_om);
}

double threshold_dropped_power(const DeviceParams& d) {
    DerivedRates r = derived_rates(d);
    return threshold_photons(d) * kHbar * d.omega_o() * r.kappa;
}

OscillatorState clamped_amplitude(double p_in, const DeviceParams& d) {
    if (p_in < 0) throw InvalidArgument("input power must be nonnegative");
    double x = 0.0;
    if (p_in > d.p_threshold_in)
        x = d.x_max * std::sqrt(1.0 - d.p_threshold_in / p_in);
    return OscillatorState::from_displacement(x, d);
}

double stress_from_displacement(double x, const DeviceParams& d) {
    if (x < 0) throw InvalidArgument("displacement must be nonnegative");
    return d.p_max * (x / d.x_max);
}

} // namespace spinmech
