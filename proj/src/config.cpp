#include "kgaudit/config.hpp"

#include <fstream>
#include <sstream>

namespace kgaudit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigMap ConfigMap::parse_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open config file: " + p.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), p.string());
}

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        // drop trailing comments introduced by whitespace + '#'
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (value[i] == '#' && (i == 0 || value[i - 1] == ' ' || value[i - 1] == '\t')) {
                value = trim(value.substr(0, i));
                break;
            }
        }
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

std::string ConfigMap::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key: " + key);
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": expected a number, got '" + s + "'");
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t ConfigMap::get_int(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": expected an integer, got '" + s + "'");
    }
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get_string(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("config key " + key + ": expected a boolean, got '" + s + "'");
}

void ConfigMap::validate_keys(const std::set<std::string>& allowed) const {
    for (const auto& [key, _] : values_)
        if (!allowed.count(key)) throw ConfigError("unknown config key: " + key);
}

std::uint64_t ConfigMap::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& [key, value] : values_) {
        feed(key);
        feed("=");
        feed(value);
        feed("\n");
    }
    return h;
}

}  // namespace kgaudit
