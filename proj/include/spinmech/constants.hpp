#pragma once

namespace spinmech {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTau = 2.0 * kPi;           // rad per cycle
inline constexpr double kHbar = 1.054571817e-34;    // J s (2019 SI)
inline constexpr double kSpeedOfLight = 299792458.0; // m/s (exact)

} // namespace spinmech
