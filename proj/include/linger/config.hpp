#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace linger {

// Bad configuration or input data; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat "key = value" text. '#' starts a comment; blank lines are ignored;
// keys are dotted identifiers and may appear once.
class Config {
public:
    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, std::string value);
    void erase(const std::string& key) { kv_.erase(key); }

    std::string str(const std::string& key, const std::string& fallback) const;
    std::optional<std::string> str(const std::string& key) const;
    double real(const std::string& key, double fallback) const;
    std::optional<double> real(const std::string& key) const;
    std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> reals(const std::string& key) const;  // comma separated

    // Throws ConfigError naming the first key outside the allowed set.
    void require_known(const std::set<std::string>& allowed) const;

    // Canonical "key = value" lines in key order.
    std::string canonical() const;
    // FNV-1a of canonical(), as 16 hex digits.
    std::string hash() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace linger
