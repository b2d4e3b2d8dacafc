#pragma once

#include "spinmech/params.hpp"

namespace spinmech {

// Self-oscillation state of the mechanical mode. Stress tracks displacement
// linearly; the phonon-number equivalent is the squared ratio of stress to the
// single-phonon stress.
struct OscillatorState {
    double displacement_amp = 0;        // m
    double stress_amp = 0;              // Pa
    double phonon_number_equivalent = 0;

    static OscillatorState from_displacement(double x, const DeviceParams& d);
};

// C_om = 4 N g_om^2 / (kappa gamma_m)
double cooperativity_om(double n_photons, const DeviceParams& d);

// Intracavity photon number at C_om = 1: N_th = kappa gamma_m / (4 g_om^2)
double threshold_photons(const DeviceParams& d);

// Steady-state intracavity dissipation at threshold occupancy:
// P_drop = N_th * hbar * omega_o * kappa
double threshold_dropped_power(const DeviceParams& d);

// Saturating amplitude above threshold: 0 below/at threshold, then
// x_max * sqrt(1 - P_th/P). Phenomenological clamping form anchored at the
// threshold zero and the x_max asymptote.
OscillatorState clamped_amplitude(double p_in, const DeviceParams& d);

// Linear displacement -> stress map, p = p_max * x / x_max.
double stress_from_displacement(double x, const DeviceParams& d);

} // namespace spinmech
