#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "claimforge/error.hpp"

namespace claimforge {

// Deterministic float formatting for all emitted files (locale-free).
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline double parse_double(const std::string& s, const std::string& context) {
    if (s.empty()) throw DataError(context + ": empty numeric field");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        throw DataError(context + ": invalid number '" + s + "'");
    }
    return v;
}

inline long parse_long(const std::string& s, const std::string& context) {
    if (s.empty()) throw DataError(context + ": empty integer field");
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) {
        throw DataError(context + ": invalid integer '" + s + "'");
    }
    return v;
}

// Minimal strict CSV: comma-separated, no quoting, exact header match, fixed
// column count. All file formats emitted and consumed here are quote-free.
class CsvReader {
  public:
    CsvReader(const std::string& path, const std::vector<std::string>& header) : path_(path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open '" + path + "'");
        std::string line;
        if (!std::getline(in, line)) throw DataError(path + ": missing header");
        strip_cr(line);
        std::string expected;
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) expected += ',';
            expected += header[i];
        }
        if (line != expected) {
            throw DataError(path + ": bad header '" + line + "' (expected '" + expected + "')");
        }
        columns_ = header.size();
        size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            strip_cr(line);
            if (line.empty()) continue;
            auto fields = split(line);
            if (fields.size() != columns_) {
                throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                                std::to_string(columns_) + " fields, got " +
                                std::to_string(fields.size()));
            }
            rows_.push_back(std::move(fields));
            line_numbers_.push_back(lineno);
        }
    }

    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string context(size_t row_index) const {
        return path_ + ":" + std::to_string(line_numbers_[row_index]);
    }

  private:
    static void strip_cr(std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    }

    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        out.push_back(cur);
        return out;
    }

    std::string path_;
    size_t columns_ = 0;
    std::vector<std::vector<std::string>> rows_;
    std::vector<size_t> line_numbers_;
};

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw DataError("cannot write '" + path + "'");
    }

    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
}

}  // namespace claimforge
