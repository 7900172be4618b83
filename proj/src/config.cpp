#include "fastflow/config.hpp"

#include <fstream>
#include <sstream>

#include "fastflow/errors.hpp"

namespace fastflow {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& token) {
    try {
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return value;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad numeric value '" + token + "'");
    }
}

long parse_long(const std::string& key, const std::string& token) {
    try {
        std::size_t used = 0;
        const long value = std::stol(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return value;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad integer value '" + token + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto next = s.find(sep, pos);
        if (next == std::string::npos) {
            next = s.size();
        }
        parts.push_back(trim(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return parts;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

Config Config::parse_string(const std::string& text) {
    Config config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value, got '" +
                              line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        config.values_[key] = trim(line.substr(eq + 1));
    }
    return config;
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += "=";
        out += value;
        out += "\n";
    }
    return out;
}

std::string Config::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("missing config key '" + key + "'");
    }
    return it->second;
}

std::string Config::get_string_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double Config::get_double_or(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

long Config::get_long(const std::string& key) const {
    return parse_long(key, get_string(key));
}

long Config::get_long_or(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_long(key, it->second);
}

std::uint64_t Config::get_seed_or(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : static_cast<std::uint64_t>(parse_long(key, it->second));
}

std::vector<int> Config::get_int_list(const std::string& key) const {
    std::vector<int> values;
    for (const auto& token : split(get_string(key), ',')) {
        values.push_back(static_cast<int>(parse_long(key, token)));
    }
    return values;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> values;
    for (const auto& token : split(get_string(key), ',')) {
        values.push_back(parse_double(key, token));
    }
    return values;
}

}  // namespace fastflow
