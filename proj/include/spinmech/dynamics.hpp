#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "spinmech/injection_lock.hpp"
#include "spinmech/params.hpp"

namespace spinmech {

// Two-level density matrix on the basis (|+1>, |-1>), row-major
// [rho00, rho01, rho10, rho11].
struct SpinState {
    std::array<std::complex<double>, 4> rho{};

    static SpinState plus1();  // |+1><+1|
    static SpinState minus1(); // |-1><-1|

    double p_plus1() const { return rho[0].real(); }
    double p_minus1() const { return rho[3].real(); }
    double trace_real() const { return rho[0].real() + rho[3].real(); }
    std::complex<double> coherence() const { return rho[1]; }

    // trace within 1e-9 of 1, Hermitian within 1e-12, det >= -1e-9,
    // diagonals in [-1e-9, 1 + 1e-9].
    bool is_physical() const;
};

// One population-transfer experiment: initialize to |+1> (scaled by the pi-pulse
// fidelity), drive for drive_duration, read out both populations.
struct PulseSequence {
    double drive_duration = 0;   // s
    double drive_rabi = 0;       // rad/s
    double drive_detuning = 0;   // rad/s (spin vs injection tone)
    double t2_star = 0;          // s
    double pi_pulse_fidelity = 1;
    double gamma_inj = 0;        // rad/s, extra dephasing from drive-frequency jitter
};

struct SweepResult {
    std::vector<double> delta_si;  // rad/s
    std::vector<double> stress;    // Pa
    std::vector<double> p_plus1;
    std::vector<double> p_minus1;
    std::optional<double> fwhm;    // rad/s, filled by analysis when extracted
    bool any_outside_tuning = false;
};

// Fixed-step 4th-order (RK4) integration of the master equation
// d rho/dt = -i[H, rho] + dephasing, H = (delta/2) sigma_z + (Omega/2) sigma_x,
// with the off-diagonal coherence decaying at gamma2 = 1/t2_star + gamma_extra.
// Throws NumericError when dt * max(|delta|, omega, 1/t2_star) >= 0.1.
SpinState evolve_two_level(const SpinState& initial, double omega, double delta,
                           double t2_star, double duration, double dt,
                           double gamma_extra = 0);

// Runs the sequence with an automatically chosen converged step size
// (halving it changes populations by far less than 1e-8).
// Returns {p_plus1, p_minus1}.
std::pair<double, double> run_sequence(const PulseSequence& seq);

// Template for sequences driven by the injection-locked oscillation: the locked
// drive's residual frequency jitter contributes extra dephasing at half the
// locking bandwidth (gamma_inj = gamma_tune / 2).
PulseSequence lock_driven_sequence(double t2_star, const LockProfile& lp,
                                   double drive_duration = 7e-6);

// Sweep of the injection-tone detuning at fixed spin-mechanical detuning:
// for each delta_si on the grid, delta_mi = delta_si - delta_sm, the effective
// Rabi rate is omega_peak * sqrt(psd(delta_mi)) and the drive detuning is
// delta_si. stress_peak is recorded through the same lock profile.
SweepResult sweep_injection_detuning(double delta_sm, double omega_peak, double stress_peak,
                                     const LockProfile& lp, const PulseSequence& tmpl,
                                     const std::vector<double>& grid_delta_si);

// Sweep of drive stress at fixed detuning; Omega from rabi_from_stress.
SweepResult sweep_stress(const std::vector<double>& stress_values, double delta_si,
                         const SpinParams& sp, const PulseSequence& tmpl);

} // namespace spinmech
