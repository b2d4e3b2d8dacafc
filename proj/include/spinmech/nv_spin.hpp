#pragma once

#include <string>
#include <vector>

#include "spinmech/params.hpp"

namespace spinmech {

// |+1> <-> |-1> transition frequency at the configured field:
// omega_s = 2*pi * (2 * gamma_e * B) + hyperfine_offset(m_I).
// nuclear_projection must be in {-1, 0, +1}.
double spin_splitting(const SpinParams& sp, int nuclear_projection);

// Stress-driven Rabi rate Omega = 2*pi * eta * g_str * p.
double rabi_from_stress(double stress, const SpinParams& sp);

// Tabulated per-phonon stress profile versus radial position; linear
// interpolation inside the table domain, error outside.
class StressMap {
public:
    static StressMap from_csv(const std::string& path);
    static StressMap bundled_default(); // {0 um -> 1 kPa, 0.7 um -> 0.7 kPa}

    // Per-phonon stress (Pa) at the given radius (m).
    double lookup(double radius) const;
    double min_radius() const;
    double max_radius() const;
    std::size_t size() const { return radius_.size(); }

private:
    std::vector<double> radius_; // m, strictly increasing
    std::vector<double> stress_; // Pa per phonon amplitude
};

// Where the population-transfer measurements were taken: offset from the disk
// center, with a reduced stress amplitude and an additional tensor-projection
// factor on the drive.
struct MeasurementSpot {
    double radius = 0.7e-6;      // m
    double eta_projection = 0.36;

    // Drive stress at the spot for a given on-axis peak stress (scales by the
    // stress-map ratio lookup(radius)/lookup(0)).
    double stress_at_spot(double stress_peak, const StressMap& map) const;

    // Rabi rate at the spot: projection factor times the configured eta.
    double rabi_at_spot(double stress_peak, const StressMap& map, const SpinParams& sp) const;
};

} // namespace spinmech
