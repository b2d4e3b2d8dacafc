#include "spinmech/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spinmech/errors.hpp"

namespace spinmech {

const std::vector<Config::SchemaEntry>& Config::schema() {
    static const std::vector<SchemaEntry> entries = {
        {"lambda_o_nm", "nm", "optical wavelength"},
        {"q_optical", "", "optical quality factor"},
        {"omega_m_ghz", "GHz", "mechanical frequency (nu units)"},
        {"q_mech", "", "mechanical quality factor"},
        {"g_om_khz", "kHz", "single-photon optomechanical coupling (nu units)"},
        {"x_max_pm", "pm", "clamped self-oscillation displacement"},
        {"p_max_mpa", "MPa", "stress at x_max"},
        {"p_single_phonon_kpa", "kPa", "stress per single-phonon amplitude"},
        {"p_threshold_mw", "mW", "fiber-input self-oscillation threshold power"},
        {"gamma_e_mhz_per_g", "MHz/G", "electron gyromagnetic ratio"},
        {"b_field_g", "G", "magnetic field along the defect axis"},
        {"g_str_hz_per_kpa", "Hz/kPa", "stress susceptibility"},
        {"eta", "", "tensor-projection * position factor"},
        {"t2_star_us", "us", "inhomogeneous dephasing time"},
        {"hyperfine_offset_mhz", "MHz", "offset of the +-1 nuclear projections (nu units)"},
        {"gamma_tune_khz", "kHz", "injection-locking PSD FWHM (nu units)"},
    };
    return entries;
}

bool Config::is_known_key(const std::string& key) {
    for (const auto& e : schema())
        if (key == e.key) return true;
    return false;
}

namespace {

const Config::SchemaEntry& schema_entry(const std::string& key) {
    for (const auto& e : Config::schema())
        if (key == e.key) return e;
    throw ConfigError("unknown key: " + key);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Parses "<number> [unit]" where the unit, if present, must match the key's
// canonical suffix.
double parse_value(const std::string& key, const std::string& text, int line) {
    std::string t = trim(text);
    if (t.empty())
        throw ConfigError("missing value for key: " + key + " (line " + std::to_string(line) + ")");
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin)
        throw ConfigError("unparseable value for key: " + key + " (line " + std::to_string(line) + ")");
    std::string suffix = trim(std::string(end));
    if (!suffix.empty()) {
        const auto& entry = schema_entry(key);
        if (suffix != entry.unit)
            throw ConfigError("unparseable unit suffix \"" + suffix + "\" for key: " + key +
                              " (line " + std::to_string(line) + "; expected " +
                              (entry.unit[0] ? entry.unit : "no suffix") + ")");
    }
    return v;
}

} // namespace

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": expected key = value (line " + std::to_string(lineno) + ")");
        std::string key = trim(t.substr(0, eq));
        if (!is_known_key(key))
            throw ConfigError(origin + ": unknown key: " + key + " (line " + std::to_string(lineno) + ")");
        if (cfg.values_.count(key))
            throw ConfigError(origin + ": duplicate key: " + key + " (line " + std::to_string(lineno) + ")");
        cfg.values_[key] = parse_value(key, t.substr(eq + 1), lineno);
    }
    for (const auto& e : schema())
        if (!cfg.values_.count(e.key))
            throw ConfigError(origin + ": missing key: " + std::string(e.key));
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

double Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown key: " + key);
    return it->second;
}

void Config::set(const std::string& key, double value) {
    if (!is_known_key(key)) throw ConfigError("unknown key: " + key);
    values_[key] = value;
}

void Config::apply_override(const std::string& spec) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value: " + spec);
    std::string key = trim(spec.substr(0, eq));
    if (!is_known_key(key)) throw ConfigError("unknown key: " + key);
    values_[key] = parse_value(key, spec.substr(eq + 1), 0);
}

std::string Config::serialize() const {
    std::ostringstream out;
    for (const auto& e : schema()) {
        auto it = values_.find(e.key);
        if (it != values_.end())
            out << e.key << " = " << format_double(it->second) << "\n";
    }
    return out.str();
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace spinmech
