#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fastflow/errors.hpp"

namespace fastflow {

/// RFC-4180 quoting: fields containing commas, quotes or newlines are quoted
/// and embedded quotes doubled.
inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += "\"";
    return out;
}

/// Fixed shortest-stable formatting so regenerated CSVs are byte-identical.
inline std::string csv_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) {
            throw ConfigError("cannot write CSV file " + path);
        }
        write_row(header);
    }

    void write_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out_ << ",";
            }
            out_ << csv_escape(fields[i]);
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace fastflow
