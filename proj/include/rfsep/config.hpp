#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rfsep/eval.hpp"

namespace rfsep::config {

struct KeyInfo {
    std::string key;
    std::string default_value;  // "auto": mixture-specific default
    std::string help;
};

const std::vector<KeyInfo>& known_keys();

// Flat `key = value` file, TOML subset: `# comments`, `[section]` prefixes keys
// with `section.`, values are numbers, true/false, "strings", bare words, or [a, b] lists.
class RunConfig {
public:
    static RunConfig parse(const std::string& text, const std::string& origin = "<string>");
    static RunConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key) const;
    bool is_auto(const std::string& key) const;

    // all keys with effective values (defaults filled in)
    std::map<std::string, std::string> effective() const;

private:
    std::string raw(const std::string& key) const;
    std::map<std::string, std::string> values_;
};

eval::SweepSpec to_sweep_spec(const RunConfig& c);

}  // namespace rfsep::config
