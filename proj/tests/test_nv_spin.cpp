#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/nv_spin.hpp"
#include "spinmech/params.hpp"

using namespace spinmech;

namespace {

SpinParams spin() { return SpinParams::from_config(Config::from_file(TEST_CONFIG_PATH)); }

std::string write_temp_csv(const char* name, const std::string& body) {
    std::string path = std::string("./") + name;
    std::ofstream f(path);
    f << body;
    return path;
}

} // namespace

TEST_CASE("double-quantum splitting follows twice the Zeeman shift") {
    SpinParams sp = spin();
    double oracle = kTau * 2.0 * sp.gamma_e * sp.b_field; // 2*pi*(2 gamma_e B)
    CHECK(spin_splitting(sp, 0) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(spin_splitting(sp, 0) / kTau == doctest::Approx(2.101875e9).epsilon(1e-12));
}

TEST_CASE("hyperfine projections sit exactly 4 MHz either side") {
    SpinParams sp = spin();
    double s0 = spin_splitting(sp, 0);
    CHECK(s0 - spin_splitting(sp, +1) == doctest::Approx(kTau * 4e6).epsilon(1e-12));
    CHECK(spin_splitting(sp, -1) - s0 == doctest::Approx(kTau * 4e6).epsilon(1e-12));
    CHECK_THROWS_WITH_AS((void)spin_splitting(sp, 2),
                         doctest::Contains("nuclear projection must be -1, 0, or +1"),
                         InvalidArgument);
}

TEST_CASE("stress-driven Rabi rate reproduces the fitted anchors") {
    SpinParams sp = spin();
    // 20.8 MPa at eta = 1: Omega/2pi = 19 Hz/kPa * 20800 kPa = 395.2 kHz
    CHECK(rabi_from_stress(20.8e6, sp) / kTau == doctest::Approx(395.2e3).epsilon(1e-12));
    CHECK(rabi_from_stress(20.8e6, sp) / kTau == doctest::Approx(395e3).epsilon(0.01));
    CHECK(rabi_from_stress(0.0, sp) == 0.0);
    CHECK_THROWS_AS((void)rabi_from_stress(-1.0, sp), InvalidArgument);

    SpinParams half = sp;
    half.eta = 0.5;
    CHECK(rabi_from_stress(20.8e6, half) ==
          doctest::Approx(0.5 * rabi_from_stress(20.8e6, sp)).epsilon(1e-14));
}

TEST_CASE("bundled stress map interpolates between center and spot") {
    StressMap map = StressMap::bundled_default();
    CHECK(map.size() == 2);
    CHECK(map.lookup(0.0) == doctest::Approx(1e3).epsilon(1e-15));
    CHECK(map.lookup(0.7e-6) == doctest::Approx(0.7e3).epsilon(1e-15));
    CHECK(map.lookup(0.35e-6) == doctest::Approx(0.85e3).epsilon(1e-12));
    CHECK_THROWS_WITH_AS((void)map.lookup(0.8e-6),
                         doctest::Contains("radius outside stress-map domain"), RangeError);
    CHECK_THROWS_AS((void)map.lookup(-0.1e-6), RangeError);
}

TEST_CASE("stress map CSV loading and validation") {
    std::string good = write_temp_csv("map_good.csv",
                                      "# per-phonon stress profile\n"
                                      "radius_um,stress_kpa_per_phonon_amp\n"
                                      "0,1\n0.4,0.9\n0.7,0.7\n");
    StressMap map = StressMap::from_csv(good);
    CHECK(map.size() == 3);
    CHECK(map.lookup(0.4e-6) == doctest::Approx(0.9e3).epsilon(1e-12));
    CHECK(map.lookup(0.55e-6) == doctest::Approx(0.8e3).epsilon(1e-12));
    CHECK(map.min_radius() == doctest::Approx(0.0));
    CHECK(map.max_radius() == doctest::Approx(0.7e-6));

    CHECK_THROWS_AS((void)StressMap::from_csv("/nonexistent/map.csv"), IoError);
    std::string bad_header = write_temp_csv("map_bad_header.csv", "r,s\n0,1\n0.7,0.7\n");
    CHECK_THROWS_WITH_AS((void)StressMap::from_csv(bad_header),
                         doctest::Contains("expected header"), ConfigError);
    std::string one_row = write_temp_csv(
        "map_one_row.csv", "radius_um,stress_kpa_per_phonon_amp\n0,1\n");
    CHECK_THROWS_WITH_AS((void)StressMap::from_csv(one_row),
                         doctest::Contains("at least two rows"), ConfigError);
    std::string unordered = write_temp_csv(
        "map_unordered.csv", "radius_um,stress_kpa_per_phonon_amp\n0.7,0.7\n0,1\n");
    CHECK_THROWS_WITH_AS((void)StressMap::from_csv(unordered),
                         doctest::Contains("strictly increasing"), ConfigError);
    std::string negative = write_temp_csv(
        "map_negative.csv", "radius_um,stress_kpa_per_phonon_amp\n0,1\n0.7,-0.7\n");
    CHECK_THROWS_WITH_AS((void)StressMap::from_csv(negative),
                         doctest::Contains("negative stress"), ConfigError);
    std::remove("./map_good.csv");
    std::remove("./map_bad_header.csv");
    std::remove("./map_one_row.csv");
    std::remove("./map_unordered.csv");
    std::remove("./map_negative.csv");
}

TEST_CASE("measurement spot combines the stress ratio with the projection factor") {
    SpinParams sp = spin();
    StressMap map = StressMap::bundled_default();
    MeasurementSpot spot;
    CHECK(spot.radius == doctest::Approx(0.7e-6).epsilon(1e-15));
    CHECK(spot.eta_projection == doctest::Approx(0.36).epsilon(1e-15));

    double stress = spot.stress_at_spot(20.8e6, map);
    CHECK(stress == doctest::Approx(0.7 * 20.8e6).epsilon(1e-12)); // 14.56 MPa

    double rabi = spot.rabi_at_spot(20.8e6, map, sp);
    CHECK(rabi / kTau == doctest::Approx(99590.4).epsilon(1e-12));
    CHECK(rabi / kTau == doctest::Approx(100e3).epsilon(0.05));
}
