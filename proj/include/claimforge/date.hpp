#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "claimforge/error.hpp"

namespace claimforge {

// ISO-8601 calendar date. Validated on construction/parse.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

    static int days_in_month(int y, int m) {
        static constexpr int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (m == 2 && is_leap(y)) return 29;
        return d[m - 1];
    }

    bool valid() const {
        return year >= 1 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 &&
               day <= days_in_month(year, month);
    }

    // Strict "YYYY-MM-DD".
    static Date parse(const std::string& s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
            throw DataError("invalid date '" + s + "' (expected YYYY-MM-DD)");
        }
        auto digits = [&](size_t from, size_t len) {
            int v = 0;
            for (size_t i = from; i < from + len; ++i) {
                if (s[i] < '0' || s[i] > '9') {
                    throw DataError("invalid date '" + s + "' (expected YYYY-MM-DD)");
                }
                v = v * 10 + (s[i] - '0');
            }
            return v;
        };
        Date d{digits(0, 4), digits(5, 2), digits(8, 2)};
        if (!d.valid()) throw DataError("invalid calendar date '" + s + "'");
        return d;
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    int quarter() const { return (month - 1) / 3 + 1; }
};

// Calendar quarter, used as the panel join key alongside the ticker.
struct Quarter {
    int year = 0;
    int q = 0;  // 1..4

    auto operator<=>(const Quarter&) const = default;

    static Quarter of(const Date& d) { return {d.year, d.quarter()}; }

    // "2020Q1"
    std::string label() const {
        char buf[12];
        std::snprintf(buf, sizeof(buf), "%04dQ%d", year, q);
        return buf;
    }

    static Quarter parse(const std::string& s) {
        if (s.size() != 6 || s[4] != 'Q' || s[5] < '1' || s[5] > '4') {
            throw DataError("invalid quarter '" + s + "' (expected YYYYQn)");
        }
        for (int i = 0; i < 4; ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw DataError("invalid quarter '" + s + "' (expected YYYYQn)");
            }
        }
        return {std::stoi(s.substr(0, 4)), s[5] - '0'};
    }
};

}  // namespace claimforge
