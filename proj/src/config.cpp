#include "linger/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace linger {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) return false;
    return true;
}

double to_real(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || std::isnan(x))
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
    Config c;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError(where + "bad key '" + key + "'");
        if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
        if (!c.kv_.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

void Config::set(const std::string& key, std::string value) { kv_[key] = std::move(value); }

std::optional<std::string> Config::str(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
    return str(key).value_or(fallback);
}

std::optional<double> Config::real(const std::string& key) const {
    auto v = str(key);
    if (!v) return std::nullopt;
    return to_real(key, *v);
}

double Config::real(const std::string& key, double fallback) const {
    return real(key).value_or(fallback);
}

std::uint64_t Config::integer(const std::string& key, std::uint64_t fallback) const {
    auto v = str(key);
    if (!v) return fallback;
    // Accepts plain integers and exact forms such as 1e5.
    const double x = to_real(key, *v);
    if (x < 0 || x != std::floor(x) || x > 1.8e19)
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + *v + "'");
    return static_cast<std::uint64_t>(x);
}

bool Config::flag(const std::string& key, bool fallback) const {
    auto v = str(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + *v + "'");
}

std::vector<double> Config::reals(const std::string& key) const {
    std::vector<double> out;
    auto v = str(key);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
    return out;
}

void Config::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : kv_)
        if (!allowed.count(k)) throw ConfigError("unknown config key '" + k + "'");
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
}

std::string Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace linger
