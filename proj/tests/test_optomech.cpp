#include <doctest.h>

#include <cmath>
#include <random>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/optomech.hpp"
#include "spinmech/params.hpp"

using namespace spinmech;

namespace {

DeviceParams device() {
    return DeviceParams::from_config(Config::from_file(TEST_CONFIG_PATH));
}

} // namespace

TEST_CASE("threshold photon number matches the closed form") {
    DeviceParams d = device();
    DerivedRates r = derived_rates(d);
    double expected = r.kappa * r.gamma_m / (4.0 * d.g_om * d.g_om);
    CHECK(threshold_photons(d) == doctest::Approx(expected).epsilon(1e-14));
    // ~3.4e5 intracavity photons for the bundled device
    CHECK(threshold_photons(d) == doctest::Approx(3.388e5).epsilon(1e-3));
}

TEST_CASE("cooperativity is linear in photon number and unity at threshold") {
    DeviceParams d = device();
    CHECK(cooperativity_om(threshold_photons(d), d) == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> photons(1.0, 1e9);
    for (int i = 0; i < 100; ++i) {
        double n = photons(rng);
        CHECK(cooperativity_om(2.0 * n, d) ==
              doctest::Approx(2.0 * cooperativity_om(n, d)).epsilon(1e-12));
    }
    CHECK(cooperativity_om(0.0, d) == 0.0);
    CHECK_THROWS_AS((void)cooperativity_om(-1.0, d), InvalidArgument);
}

TEST_CASE("threshold dissipated power lands at 0.47 mW") {
    DeviceParams d = device();
    DerivedRates r = derived_rates(d);
    double expected = threshold_photons(d) * kHbar * d.omega_o() * r.kappa;
    double p = threshold_dropped_power(d);
    CHECK(p == doctest::Approx(expected).epsilon(1e-14));
    CHECK(p * 1e3 == doctest::Approx(0.4710).epsilon(2e-3)); // mW
}

TEST_CASE("oscillation amplitude clamps with the saturating threshold law") {
    DeviceParams d = device();

    CHECK(clamped_amplitude(0.0, d).displacement_amp == 0.0);
    CHECK(clamped_amplitude(0.5 * d.p_threshold_in, d).displacement_amp == 0.0);
    CHECK(clamped_amplitude(d.p_threshold_in, d).displacement_amp == 0.0);

    OscillatorState twice = clamped_amplitude(2.0 * d.p_threshold_in, d);
    CHECK(twice.displacement_amp == doctest::Approx(d.x_max * std::sqrt(0.5)).epsilon(1e-14));
    CHECK(twice.stress_amp == doctest::Approx(d.p_max * std::sqrt(0.5)).epsilon(1e-14));

    double prev = 0.0;
    for (double mult : {1.05, 1.2, 1.5, 2.0, 3.0, 5.0, 20.0, 1000.0}) {
        OscillatorState s = clamped_amplitude(mult * d.p_threshold_in, d);
        CHECK(s.displacement_amp > prev);
        CHECK(s.displacement_amp < d.x_max);
        prev = s.displacement_amp;
    }
    CHECK(prev == doctest::Approx(d.x_max).epsilon(1e-3)); // asymptote

    CHECK_THROWS_AS((void)clamped_amplitude(-1.0, d), InvalidArgument);
}

TEST_CASE("displacement maps linearly to stress and quadratically to phonons") {
    DeviceParams d = device();
    CHECK(stress_from_displacement(d.x_max, d) == doctest::Approx(d.p_max).epsilon(1e-14));
    CHECK(stress_from_displacement(0.5 * d.x_max, d) ==
          doctest::Approx(0.5 * d.p_max).epsilon(1e-14));
    CHECK_THROWS_AS((void)stress_from_displacement(-1e-12, d), InvalidArgument);

    OscillatorState s = OscillatorState::from_displacement(d.x_max, d);
    double ratio = d.p_max / d.p_single_phonon; // 20.8 MPa / 1 kPa = 20800
    CHECK(s.phonon_number_equivalent == doctest::Approx(ratio * ratio).epsilon(1e-14));
    CHECK(s.phonon_number_equivalent == doctest::Approx(4.3264e8).epsilon(1e-12));

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double x = frac(rng) * d.x_max;
        OscillatorState o = OscillatorState::from_displacement(x, d);
        double r = o.stress_amp / d.p_single_phonon;
        CHECK(o.phonon_number_equivalent == doctest::Approx(r * r).epsilon(1e-12));
    }
}
