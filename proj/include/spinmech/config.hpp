#pragma once

#include <map>
#include <string>
#include <vector>

namespace spinmech {

// Flat key = value config with a fixed schema. Values are stored in the I/O
// units encoded in the key names (nm, GHz, kHz, mW, G, us, ...); conversion to
// internal SI/angular units happens in the parameter builders. Keeping the
// raw parsed doubles as the canonical store makes serialize -> load bit-exact.
class Config {
public:
    struct SchemaEntry {
        const char* key;
        const char* unit; // canonical unit suffix; optional on values, must match
        const char* doc;
    };

    static const std::vector<SchemaEntry>& schema();
    static bool is_known_key(const std::string& key);

    // Parses the documented key=value format. Every schema key must be present.
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    double get(const std::string& key) const;
    void set(const std::string& key, double value);

    // Accepts "key=value"; used for CLI overrides.
    void apply_override(const std::string& spec);

    // Round-trippable text form (shortest representation that re-parses to the
    // same double).
    std::string serialize() const;

    const std::map<std::string, double>& values() const { return values_; }

private:
    std::map<std::string, double> values_;
};

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

} // namespace spinmech
