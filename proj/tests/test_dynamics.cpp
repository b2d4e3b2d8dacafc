#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spinmech/constants.hpp"
#include "spinmech/dynamics.hpp"
#include "spinmech/errors.hpp"

using namespace spinmech;

namespace {

LockProfile profile() {
    LockProfile lp;
    lp.gamma_tune = kTau * 380e3;
    lp.delta_range = kTau * 5e6;
    return lp;
}

// Random physical density matrix: Bloch vector inside the unit ball.
SpinState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    double u, v, w;
    do {
        u = coord(rng);
        v = coord(rng);
        w = coord(rng);
    } while (u * u + v * v + w * w > 1.0);
    SpinState s;
    s.rho[0] = 0.5 * (1.0 + w);
    s.rho[3] = 0.5 * (1.0 - w);
    s.rho[1] = std::complex<double>(0.5 * u, -0.5 * v);
    s.rho[2] = std::conj(s.rho[1]);
    return s;
}

oracle::Vec3 bloch_of(const SpinState& s) {
    return {2.0 * s.rho[1].real(), -2.0 * s.rho[1].imag(), s.rho[0].real() - s.rho[3].real()};
}

} // namespace

TEST_CASE("basis states are physical and read back their populations") {
    SpinState up = SpinState::plus1();
    CHECK(up.p_plus1() == 1.0);
    CHECK(up.p_minus1() == 0.0);
    CHECK(up.is_physical());
    SpinState down = SpinState::minus1();
    CHECK(down.p_minus1() == 1.0);
    CHECK(down.is_physical());

    SpinState broken = up;
    broken.rho[1] = {0.9, 0.0}; // coherence larger than the populations allow
    CHECK_FALSE(broken.is_physical());
    broken = up;
    broken.rho[0] = 1.4;
    CHECK_FALSE(broken.is_physical());
}

TEST_CASE("integrator matches the matrix-exponential oracle on random problems") {
    std::mt19937 rng(20240812);
    std::uniform_real_distribution<double> omega_d(0.0, kTau * 1e6);
    std::uniform_real_distribution<double> delta_d(-kTau * 2e6, kTau * 2e6);
    std::uniform_real_distribution<double> t2_d(0.3e-6, 3e-6);
    std::uniform_real_distribution<double> gex_d(0.0, 3e6);
    std::uniform_real_distribution<double> t_d(0.0, 10e-6);

    for (int i = 0; i < 300; ++i) {
        double omega = omega_d(rng), delta = delta_d(rng), t2 = t2_d(rng);
        double gex = gex_d(rng), t = t_d(rng);
        double gamma2 = 1.0 / t2 + gex;
        SpinState init = random_state(rng);

        double scale = std::max({std::abs(delta), omega, gamma2});
        double dt = 0.002 / std::max(scale, 1e5);
        SpinState out = evolve_two_level(init, omega, delta, t2, t, dt, gex);

        oracle::Vec3 expect = oracle::expm_evolve(omega, delta, gamma2, t, bloch_of(init));
        oracle::Vec3 got = bloch_of(out);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(got[k] - expect[k]) < 1e-7);
    }
}

TEST_CASE("trace, Hermiticity, and positivity survive 1000 random evolutions") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> omega_d(0.0, kTau * 800e3);
    std::uniform_real_distribution<double> delta_d(-kTau * 1.5e6, kTau * 1.5e6);
    std::uniform_real_distribution<double> t2_d(0.2e-6, 2e-6);
    std::uniform_real_distribution<double> t_d(0.0, 8e-6);

    for (int i = 0; i < 1000; ++i) {
        SpinState init = random_state(rng);
        double trace_before = init.trace_real();
        double t2 = t2_d(rng);
        double omega = omega_d(rng), delta = delta_d(rng), t = t_d(rng);
        double scale = std::max({std::abs(delta), omega, 1.0 / t2});
        SpinState out = evolve_two_level(init, omega, delta, t2, t, 0.01 / scale);
        REQUIRE(out.is_physical());
        CHECK(out.trace_real() == doctest::Approx(trace_before).epsilon(1e-12));
        CHECK(std::abs(out.rho[1] - std::conj(out.rho[2])) == 0.0);
    }
}

TEST_CASE("global error shrinks as dt^4") {
    double omega = kTau * 300e3, delta = kTau * 200e3, t2 = 0.8e-6, t = 5e-6;
    double gamma2 = 1.0 / t2;
    oracle::Vec3 exact = oracle::expm_evolve(omega, delta, gamma2, t, {0.0, 0.0, 1.0});

    auto run = [&](double dt) {
        SpinState out = evolve_two_level(SpinState::plus1(), omega, delta, t2, t, dt);
        oracle::Vec3 got = bloch_of(out);
        double err = 0.0;
        for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(got[k] - exact[k]));
        return err;
    };

    double coarse = run(4.0e-8);
    double fine = run(2.0e-8);
    REQUIRE(coarse > 1e-12); // above roundoff, so the ratio is meaningful
    CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.45));
}

TEST_CASE("1 ns steps track the damped-Rabi closed form to 1e-6") {
    double omega = kTau * 500e3, t2 = 0.8e-6;
    for (double t : {0.5e-6, 1.0e-6, 1.5e-6, 2.0e-6}) {
        SpinState out = evolve_two_level(SpinState::plus1(), omega, 0.0, t2, t, 1e-9);
        double expect = oracle::torrey_p_transfer(omega, 1.0 / t2, t);
        CHECK(std::abs(out.p_minus1() - expect) < 1e-6);
    }
}

TEST_CASE("sequence populations at the 168 kHz resonant operating point") {
    PulseSequence seq;
    seq.drive_duration = 7e-6;
    seq.drive_rabi = kTau * 168e3;
    seq.drive_detuning = 0.0;
    seq.t2_star = 0.8e-6;
    auto [p1, pm1] = run_sequence(seq);
    // Closed-form damped-Rabi value, frozen before the implementation existed.
    CHECK(std::abs(pm1 - 0.4955350845209943) < 1e-8);
    CHECK(p1 + pm1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sequence step size is converged (halving changes nothing)") {
    PulseSequence seq;
    seq.drive_duration = 7e-6;
    seq.drive_rabi = kTau * 168e3;
    seq.drive_detuning = kTau * 1.5e6;
    seq.t2_star = 0.8e-6;
    seq.gamma_inj = kTau * 190e3;
    auto [p1, pm1] = run_sequence(seq);

    double gamma2 = 1.0 / seq.t2_star + seq.gamma_inj;
    double scale = std::max({std::abs(seq.drive_detuning), seq.drive_rabi, gamma2});
    long n = 2 * std::max(1L, static_cast<long>(std::ceil(seq.drive_duration * scale / 0.01)));
    SpinState refined =
        evolve_two_level(SpinState::plus1(), seq.drive_rabi, seq.drive_detuning, seq.t2_star,
                         seq.drive_duration, seq.drive_duration / static_cast<double>(n),
                         seq.gamma_inj);
    CHECK(std::abs(pm1 - refined.p_minus1()) < 1e-8);
    CHECK(std::abs(p1 - refined.p_plus1()) < 1e-8);
}

TEST_CASE("coherence decays as exp(-t/T2*) and sets the 400 kHz linewidth") {
    double t2 = 0.8e-6;
    SpinState superposition;
    superposition.rho[0] = 0.5;
    superposition.rho[3] = 0.5;
    superposition.rho[1] = 0.5;
    superposition.rho[2] = 0.5;

    for (double t : {0.2e-6, 0.5e-6, 1.0e-6, 2.0e-6}) {
        SpinState out = evolve_two_level(superposition, 0.0, 0.0, t2, t, 1e-9);
        double coherence = 2.0 * std::abs(out.coherence());
        CHECK(coherence == doctest::Approx(std::exp(-t / t2)).epsilon(1e-9));
    }
    // Linewidth convention: 1/(pi T2*) = 398 kHz for T2* = 0.8 us, the quoted
    // ~400 kHz transition width.
    CHECK(1.0 / (kPi * t2) == doctest::Approx(400e3).epsilon(0.01));

    // Extra dephasing stacks on top of 1/T2*.
    SpinState out = evolve_two_level(superposition, 0.0, 0.0, t2, 1e-6, 1e-9, 1e6);
    CHECK(2.0 * std::abs(out.coherence()) ==
          doctest::Approx(std::exp(-1e-6 * (1.0 / t2 + 1e6))).epsilon(1e-9));
}

TEST_CASE("populations are even in the drive detuning") {
    std::mt19937 rng(515151);
    std::uniform_real_distribution<double> omega_d(kTau * 10e3, kTau * 500e3);
    std::uniform_real_distribution<double> delta_d(0.0, kTau * 1.5e6);
    for (int i = 0; i < 100; ++i) {
        PulseSequence seq;
        seq.drive_duration = 7e-6;
        seq.drive_rabi = omega_d(rng);
        seq.t2_star = 0.8e-6;
        seq.drive_detuning = delta_d(rng);
        auto [p1a, pm1a] = run_sequence(seq);
        seq.drive_detuning = -seq.drive_detuning;
        auto [p1b, pm1b] = run_sequence(seq);
        CHECK(std::abs(pm1a - pm1b) < 1e-12);
        CHECK(std::abs(p1a - p1b) < 1e-12);
    }
}

TEST_CASE("lock-driven transfer saturates at one half") {
    LockProfile lp = profile();
    std::mt19937 rng(616161);
    std::uniform_real_distribution<double> omega_d(0.0, kTau * 500e3);
    std::uniform_real_distribution<double> delta_d(-kTau * 1.5e6, kTau * 1.5e6);
    std::uniform_real_distribution<double> t2_d(0.5e-6, 0.8e-6);
    for (int i = 0; i < 100; ++i) {
        PulseSequence seq = lock_driven_sequence(t2_d(rng), lp);
        CHECK(seq.gamma_inj == doctest::Approx(kTau * 190e3).epsilon(1e-15));
        seq.drive_rabi = omega_d(rng);
        seq.drive_detuning = delta_d(rng);
        auto [p1, pm1] = run_sequence(seq);
        CHECK(pm1 <= 0.5 + 1e-3);
        CHECK(pm1 >= 0.0);
        CHECK(p1 + pm1 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pulse fidelity scales the prepared population") {
    PulseSequence seq;
    seq.drive_duration = 7e-6;
    seq.drive_rabi = kTau * 168e3;
    seq.t2_star = 0.8e-6;
    seq.pi_pulse_fidelity = 0.8;
    auto [p1, pm1] = run_sequence(seq);
    CHECK(p1 + pm1 == doctest::Approx(0.8).epsilon(1e-12));

    PulseSequence ideal = seq;
    ideal.pi_pulse_fidelity = 1.0;
    auto [q1, qm1] = run_sequence(ideal);
    CHECK(pm1 == doctest::Approx(0.8 * qm1).epsilon(1e-10));
    CHECK(p1 == doctest::Approx(0.8 * q1).epsilon(1e-10));

    seq.drive_rabi = 0.0;
    seq.drive_detuning = 0.0;
    auto [f1, fm1] = run_sequence(seq); // nothing drives the transition
    CHECK(std::abs(fm1) < 1e-15);
    CHECK(f1 == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("undamped pi pulse inverts the populations") {
    PulseSequence seq;
    seq.drive_rabi = kTau * 100e3;
    seq.drive_duration = kPi / seq.drive_rabi;
    seq.t2_star = std::numeric_limits<double>::infinity();
    auto [p1, pm1] = run_sequence(seq);
    CHECK(pm1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(p1) < 1e-9);
}

TEST_CASE("input validation and the stability guard") {
    SpinState init = SpinState::plus1();
    CHECK_THROWS_WITH_AS((void)evolve_two_level(init, kTau * 1e6, 0.0, 0.8e-6, 1e-6, 1e-6),
                         doctest::Contains("dt too large"), NumericError);
    CHECK_THROWS_AS((void)evolve_two_level(init, kTau * 1e5, 0.0, 0.8e-6, 1e-6, -1e-9),
                    InvalidArgument);
    CHECK_THROWS_AS((void)evolve_two_level(init, -1.0, 0.0, 0.8e-6, 1e-6, 1e-9),
                    InvalidArgument);
    CHECK_THROWS_AS((void)evolve_two_level(init, kTau * 1e5, 0.0, 0.0, 1e-6, 1e-9),
                    InvalidArgument);
    CHECK_THROWS_AS((void)evolve_two_level(init, kTau * 1e5, 0.0, 0.8e-6, -1e-6, 1e-9),
                    InvalidArgument);

    SpinState lopsided = init;
    lopsided.rho[2] = {0.3, 0.1}; // rho10 != conj(rho01)
    CHECK_THROWS_WITH_AS((void)evolve_two_level(lopsided, kTau * 1e5, 0.0, 0.8e-6, 1e-6, 1e-9),
                         doctest::Contains("Hermitian"), InvalidArgument);

    SpinState frozen = evolve_two_level(init, kTau * 1e5, 0.0, 0.8e-6, 0.0, 1e-9);
    CHECK(frozen.p_plus1() == init.p_plus1());

    PulseSequence seq;
    seq.t2_star = 0.8e-6;
    seq.pi_pulse_fidelity = 1.2;
    CHECK_THROWS_WITH_AS((void)run_sequence(seq), doctest::Contains("pi_pulse_fidelity"),
                         InvalidArgument);
    seq.pi_pulse_fidelity = 1.0;
    seq.drive_duration = -1e-6;
    CHECK_THROWS_AS((void)run_sequence(seq), InvalidArgument);
}

TEST_CASE("detuning sweep wires the lock profile into the drive") {
    LockProfile lp = profile();
    PulseSequence tmpl = lock_driven_sequence(0.8e-6, lp);
    std::vector<double> grid;
    for (int khz = -600; khz <= 600; khz += 100) grid.push_back(kTau * khz * 1e3);

    double delta_sm = kTau * 182e3;
    double stress_peak = 8.8e6;
    SweepResult res = sweep_injection_detuning(delta_sm, kTau * 168e3, stress_peak, lp, tmpl, grid);
    REQUIRE(res.delta_si.size() == grid.size());
    CHECK_FALSE(res.any_outside_tuning);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(res.delta_si[i] == grid[i]);
        double amp = std::sqrt(psd_vs_detuning(grid[i] - delta_sm, lp));
        CHECK(res.stress[i] == doctest::Approx(stress_peak * amp).epsilon(1e-14));

        PulseSequence seq = tmpl;
        seq.drive_rabi = kTau * 168e3 * amp;
        seq.drive_detuning = grid[i];
        auto [p1, pm1] = run_sequence(seq);
        CHECK(res.p_minus1[i] == doctest::Approx(pm1).epsilon(1e-14));
        CHECK(res.p_plus1[i] == doctest::Approx(p1).epsilon(1e-14));
    }

    std::vector<double> wide = {-kTau * 6e6, 0.0, kTau * 6e6};
    SweepResult outside =
        sweep_injection_detuning(0.0, kTau * 100e3, stress_peak, lp, tmpl, wide);
    CHECK(outside.any_outside_tuning);

    std::vector<double> unsorted = {kTau * 1e5, 0.0};
    CHECK_THROWS_AS(
        (void)sweep_injection_detuning(0.0, kTau * 1e5, 0.0, lp, tmpl, unsorted),
        InvalidArgument);
    CHECK_THROWS_AS((void)sweep_injection_detuning(0.0, kTau * 1e5, 0.0, lp, tmpl, {}),
                    InvalidArgument);
}

TEST_CASE("stress sweep converts stress through the configured susceptibility") {
    SpinParams sp = SpinParams::from_config(Config::from_file(TEST_CONFIG_PATH));
    LockProfile lp = profile();
    PulseSequence tmpl = lock_driven_sequence(0.8e-6, lp);

    std::vector<double> stresses;
    for (int i = 0; i < 30; ++i) stresses.push_back(14.56e6 * i / 29.0);
    double delta_si = kTau * 263e3;
    SweepResult res = sweep_stress(stresses, delta_si, sp, tmpl);
    REQUIRE(res.p_minus1.size() == stresses.size());

    CHECK(std::abs(res.p_minus1.front()) < 1e-15);
    for (std::size_t i = 1; i < res.p_minus1.size(); ++i)
        CHECK(res.p_minus1[i] >= res.p_minus1[i - 1] - 1e-12);
    // Frozen endpoint: Omega/2pi = 276.6 kHz drive at 263 kHz detuning.
    CHECK(std::abs(res.p_minus1.back() - 0.49919) < 5e-4);
    for (std::size_t i = 0; i < stresses.size(); ++i) CHECK(res.stress[i] == stresses[i]);

    CHECK_THROWS_AS((void)sweep_stress({}, delta_si, sp, tmpl), InvalidArgument);
    CHECK_THROWS_AS((void)sweep_stress({-1.0}, delta_si, sp, tmpl), InvalidArgument);
}
