#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fastflow {

/// Flat key=value configuration with dotted section keys, e.g.
/// "method.mu=0.001". '#' starts a comment; values keep their raw text so
/// parse -> serialize -> parse round-trips exactly.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    /// Canonical form: sorted "key=value" lines.
    std::string serialize() const;

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long get_long(const std::string& key) const;
    long get_long_or(const std::string& key, long fallback) const;
    std::uint64_t get_seed_or(const std::string& key, std::uint64_t fallback) const;

    /// Comma-separated integer list, e.g. "0,2,4,6".
    std::vector<int> get_int_list(const std::string& key) const;
    /// Comma-separated double list.
    std::vector<double> get_double_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    bool operator==(const Config& other) const { return values_ == other.values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace fastflow
