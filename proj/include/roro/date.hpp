#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "roro/errors.hpp"

namespace roro {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
inline Date parse_date(std::string_view text) {
    auto digits = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            char c = text[i];
            if (c < '0' || c > '9') {
                throw ValidationError("invalid date '" + std::string(text) + "'");
            }
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError("invalid date '" + std::string(text) + "'");
    }
    std::chrono::year_month_day ymd{std::chrono::year{digits(0, 4)},
                                    std::chrono::month{static_cast<unsigned>(digits(5, 2))},
                                    std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
    if (!ymd.ok()) {
        throw ValidationError("invalid date '" + std::string(text) + "'");
    }
    return Date{ymd};
}

inline std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

/// "YYYY-MM" label of the month containing d.
inline std::string format_month(Date d) {
    return format_date(d).substr(0, 7);
}

inline Date make_date(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

inline bool is_weekday(Date d) {
    std::chrono::weekday wd{d};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace roro
