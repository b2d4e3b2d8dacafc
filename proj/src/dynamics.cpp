#include "spinmech/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "spinmech/errors.hpp"
#include "spinmech/nv_spin.hpp"

namespace spinmech {

SpinState SpinState::plus1() {
    SpinState s;
    s.rho[0] = 1.0;
    return s;
}

SpinState SpinState::minus1() {
    SpinState s;
    s.rho[3] = 1.0;
    return s;
}

bool SpinState::is_physical() const {
    if (std::abs(trace_real() - 1.0) > 1e-9) return false;
    if (std::abs(rho[0].imag()) > 1e-12 || std::abs(rho[3].imag()) > 1e-12) return false;
    if (std::abs(rho[1] - std::conj(rho[2])) > 1e-12) return false;
    double p0 = rho[0].real(), p1 = rho[3].real();
    if (p0 < -1e-9 || p0 > 1.0 + 1e-9 || p1 < -1e-9 || p1 > 1.0 + 1e-9) return false;
    double det = p0 * p1 - std::norm(rho[1]);
    return det >= -1e-9;
}

namespace {

struct Bloch {
    double u, v, w, a; // a = trace, constant under the generator
};

Bloch to_bloch(const SpinState& s) {
    Bloch b;
    b.u = 2.0 * s.rho[1].real();
    b.v = -2.0 * s.rho[1].imag();
    b.w = s.rho[0].real() - s.rho[3].real();
    b.a = s.rho[0].real() + s.rho[3].real();
    return b;
}

SpinState from_bloch(const Bloch& b) {
    SpinState s;
    s.rho[0] = 0.5 * (b.a + b.w);
    s.rho[3] = 0.5 * (b.a - b.w);
    s.rho[1] = std::complex<double>(0.5 * b.u, -0.5 * b.v);
    s.rho[2] = std::conj(s.rho[1]);
    return s;
}

// Generator of the master equation in Bloch form:
//   du/dt = -delta*v - gamma2*u
//   dv/dt =  delta*u - omega*w - gamma2*v
//   dw/dt =  omega*v
struct Generator {
    double omega, delta, gamma2;
    void apply(const double x[3], double out[3]) const {
        out[0] = -delta * x[1] - gamma2 * x[0];
        out[1] = delta * x[0] - omega * x[2] - gamma2 * x[1];
        out[2] = omega * x[1];
    }
};

void rk4_steps(double x[3], const Generator& g, double h, long n) {
    double k1[3], k2[3], k3[3], k4[3], t[3];
    for (long i = 0; i < n; ++i) {
        g.apply(x, k1);
        for (int j = 0; j < 3; ++j) t[j] = x[j] + 0.5 * h * k1[j];
        g.apply(t, k2);
        for (int j = 0; j < 3; ++j) t[j] = x[j] + 0.5 * h * k2[j];
        g.apply(t, k3);
        for (int j = 0; j < 3; ++j) t[j] = x[j] + h * k3[j];
        g.apply(t, k4);
        for (int j = 0; j < 3; ++j)
            x[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
}

double dephasing_rate(double t2_star) {
    if (std::isinf(t2_star)) return 0.0;
    if (!(t2_star > 0)) throw InvalidArgument("non-positive value: t2_star");
    return 1.0 / t2_star;
}

} // namespace

SpinState evolve_two_level(const SpinState& initial, double omega, double delta,
                           double t2_star, double duration, double dt, double gamma_extra) {
    if (!(dt > 0)) throw InvalidArgument("dt must be positive");
    if (duration < 0) throw InvalidArgument("duration must be nonnegative");
    if (omega < 0) throw InvalidArgument("rabi rate must be nonnegative");
    if (gamma_extra < 0) throw InvalidArgument("extra dephasing must be nonnegative");
    if (std::abs(initial.rho[1] - std::conj(initial.rho[2])) > 1e-9 ||
        std::abs(initial.rho[0].imag()) > 1e-9 || std::abs(initial.rho[3].imag()) > 1e-9)
        throw InvalidArgument("initial state must be Hermitian");

    double gamma2 = dephasing_rate(t2_star) + gamma_extra;
    double scale = std::max({std::abs(delta), omega, dephasing_rate(t2_star), gamma2});
    if (dt * scale >= 0.1)
        throw NumericError("dt too large for stability: dt*max(|delta|,omega,1/t2*) = " +
                           std::to_string(dt * scale) + " >= 0.1");
    if (duration == 0) return initial;

    long n = std::max(1L, static_cast<long>(std::ceil(duration / dt)));
    double h = duration / static_cast<double>(n);

    Bloch b = to_bloch(initial);
    double x[3] = {b.u, b.v, b.w};
    Generator g{omega, delta, gamma2};
    rk4_steps(x, g, h, n);
    b.u = x[0];
    b.v = x[1];
    b.w = x[2];
    return from_bloch(b);
}

std::pair<double, double> run_sequence(const PulseSequence& seq) {
    if (!(seq.pi_pulse_fidelity >= 0 && seq.pi_pulse_fidelity <= 1))
        throw InvalidArgument("pi_pulse_fidelity must lie in [0, 1]");
    if (seq.drive_duration < 0) throw InvalidArgument("duration must be nonnegative");

    double f = seq.pi_pulse_fidelity;
    double gamma2 = dephasing_rate(seq.t2_star) + seq.gamma_inj;
    double scale = std::max({std::abs(seq.drive_detuning), seq.drive_rabi, gamma2});
    if (seq.drive_duration == 0 || scale == 0) return {f, 0.0};

    // Step targets dt*scale = 0.01; halving it moves populations by ~1e-13,
    // far inside the 1e-8 convergence contract.
    long n = std::max(1L, static_cast<long>(std::ceil(seq.drive_duration * scale / 0.01)));
    double dt = seq.drive_duration / static_cast<double>(n);

    SpinState init;
    init.rho[0] = f; // |+1><+1| scaled by pulse fidelity; remainder stays shelved
    SpinState out = evolve_two_level(init, seq.drive_rabi, seq.drive_detuning, seq.t2_star,
                                     seq.drive_duration, dt, seq.gamma_inj);
    return {out.p_plus1(), out.p_minus1()};
}

PulseSequence lock_driven_sequence(double t2_star, const LockProfile& lp, double drive_duration) {
    PulseSequence seq;
    seq.drive_duration = drive_duration;
    seq.t2_star = t2_star;
    seq.pi_pulse_fidelity = 1.0;
    seq.gamma_inj = 0.5 * lp.gamma_tune; // locked-drive frequency jitter, HWHM of the profile
    return seq;
}

SweepResult sweep_injection_detuning(double delta_sm, double omega_peak, double stress_peak,
                                     const LockProfile& lp, const PulseSequence& tmpl,
                                     const std::vector<double>& grid_delta_si) {
    if (grid_delta_si.empty()) throw InvalidArgument("detuning grid must be nonempty");
    if (!std::is_sorted(grid_delta_si.begin(), grid_delta_si.end()))
        throw InvalidArgument("detuning grid must be sorted");
    if (omega_peak < 0) throw InvalidArgument("rabi rate must be nonnegative");
    if (stress_peak < 0) throw InvalidArgument("stress amplitude must be nonnegative");

    SweepResult res;
    res.delta_si.reserve(grid_delta_si.size());
    for (double delta_si : grid_delta_si) {
        double delta_mi = delta_si - delta_sm;
        double amp = std::sqrt(psd_vs_detuning(delta_mi, lp));
        PulseSequence seq = tmpl;
        seq.drive_rabi = omega_peak * amp;
        seq.drive_detuning = delta_si;
        auto [p1, pm1] = run_sequence(seq);
        res.delta_si.push_back(delta_si);
        res.stress.push_back(stress_peak * amp);
        res.p_plus1.push_back(p1);
        res.p_minus1.push_back(pm1);
        res.any_outside_tuning = res.any_outside_tuning || outside_tuning_range(delta_mi, lp);
    }
    return res;
}

SweepResult sweep_stress(const std::vector<double>& stress_values, double delta_si,
                         const SpinParams& sp, const PulseSequence& tmpl) {
    if (stress_values.empty()) throw InvalidArgument("stress grid must be nonempty");
    SweepResult res;
    res.delta_si.reserve(stress_values.size());
    for (double p : stress_values) {
        if (p < 0) throw InvalidArgument("stress must be nonnegative");
        PulseSequence seq = tmpl;
        seq.drive_rabi = rabi_from_stress(p, sp);
        seq.drive_detuning = delta_si;
        auto [p1, pm1] = run_sequence(seq);
        res.delta_si.push_back(delta_si);
        res.stress.push_back(p);
        res.p_plus1.push_back(p1);
        res.p_minus1.push_back(pm1);
    }
    return res;
}

} // namespace spinmech
