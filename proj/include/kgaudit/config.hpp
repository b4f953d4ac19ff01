#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace kgaudit {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` config with [section] headers and # comments.
// Keys are addressed as "section.key". Flag overrides are applied with set()
// after parsing, so they take precedence over file values.
class ConfigMap {
public:
    static ConfigMap parse_file(const std::filesystem::path& p);
    static ConfigMap parse_string(const std::string& text, const std::string& origin = "<string>");

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;  // throws if missing
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Every present key must be in `allowed`; throws naming the first
    // offender otherwise.
    void validate_keys(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    // FNV-1a over the canonical "key=value\n" dump; stamped into manifests.
    std::uint64_t hash() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace kgaudit
