#pragma once

#include <string>
#include <vector>

#include "spinmech/params.hpp"

namespace spinmech {

// One row of the cooperativity roadmap: a device/qubit combination with its
// headline rates. Rates are angular (rad/s).
struct RoadmapEntry {
    std::string label;
    double g_sm = 0;       // spin-phonon coupling
    double gamma_spin = 0; // spin linewidth
    double gamma_m = 0;    // mechanical linewidth
    double g_om = 0;       // optomechanical coupling
    double kappa = 0;      // optical linewidth
    double n_photons = 0;  // drive photon number for C_om
    bool factor4 = true;   // include the factor-4 cooperativity convention
    std::string assumptions;
};

// Spin-mechanical cooperativity g_sm^2 / (gamma_m * gamma_spin), multiplied by
// 4 when the entry's convention flag is set.
double cooperativity_sm(const RoadmapEntry& e);

// Optomechanical cooperativity 4 N g_om^2 / (kappa * gamma_m).
double cooperativity_om_entry(const RoadmapEntry& e);

// Bundled presets: the measured microdisk device (at threshold occupancy) plus
// projected platforms. The current device's rates derive from cfg-level
// parameters; projected entries carry explicit "assumed" annotations.
std::vector<RoadmapEntry> roadmap_presets(const DeviceParams& d, const SpinParams& sp,
                                          bool factor4 = true);

} // namespace spinmech
