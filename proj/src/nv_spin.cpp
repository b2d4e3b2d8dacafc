#include "spinmech/nv_spin.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

namespace spinmech {

double spin_splitting(const SpinParams& sp, int nuclear_projection) {
    double zeeman = kTau * (2.0 * sp.gamma_e * sp.b_field); // gamma_e in Hz/T, B in T
    return zeeman + sp.hyperfine_offset_for(nuclear_projection);
}

double rabi_from_stress(double stress, const SpinParams& sp) {
    if (stress < 0) throw InvalidArgument("stress must be nonnegative");
    return kTau * sp.eta * sp.g_str * stress;
}

StressMap StressMap::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stress map: " + path);
    StressMap map;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (!header_seen) {
            if (line.find("radius_um") == std::string::npos ||
                line.find("stress_kpa_per_phonon_amp") == std::string::npos)
                throw ConfigError(path + ": expected header radius_um,stress_kpa_per_phonon_amp");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw ConfigError(path + ": malformed row (line " + std::to_string(lineno) + ")");
        double r_um = std::stod(a);
        double s_kpa = std::stod(b);
        if (s_kpa < 0)
            throw ConfigError(path + ": negative stress (line " + std::to_string(lineno) + ")");
        if (!map.radius_.empty() && r_um * 1e-6 <= map.radius_.back())
            throw ConfigError(path + ": radii must be strictly increasing (line " +
                              std::to_string(lineno) + ")");
        map.radius_.push_back(r_um * 1e-6);
        map.stress_.push_back(s_kpa * 1e3);
    }
    if (map.radius_.size() < 2)
        throw ConfigError(path + ": stress map needs at least two rows");
    return map;
}

StressMap StressMap::bundled_default() {
    StressMap map;
    map.radius_ = {0.0, 0.7e-6};
    map.stress_ = {1e3, 0.7e3};
    return map;
}

double StressMap::lookup(double radius) const {
    if (radius < radius_.front() || radius > radius_.back())
        throw RangeError("radius outside stress-map domain");
    for (std::size_t i = 1; i < radius_.size(); ++i) {
        if (radius <= radius_[i]) {
            double t = (radius - radius_[i - 1]) / (radius_[i] - radius_[i - 1]);
            return stress_[i - 1] + t * (stress_[i] - stress_[i - 1]);
        }
    }
    return stress_.back();
}

double StressMap::min_radius() const { return radius_.front(); }
double StressMap::max_radius() const { return radius_.back(); }

double MeasurementSpot::stress_at_spot(double stress_peak, const StressMap& map) const {
    double center = map.lookup(map.min_radius());
    if (!(center > 0)) throw NumericError("stress map vanishes at the disk center");
    return stress_peak * (map.lookup(radius) / center);
}

double MeasurementSpot::rabi_at_spot(double stress_peak, const StressMap& map,
                                     const SpinParams& sp) const {
    return eta_projection * rabi_from_stress(stress_at_spot(stress_peak, map), sp);
}

} // namespace spinmech
