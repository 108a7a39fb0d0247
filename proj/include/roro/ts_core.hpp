#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "roro/date.hpp"
#include "roro/errors.hpp"

namespace roro {

/// Strictly increasing sequence of trading dates.
class TradingCalendar {
public:
    TradingCalendar() = default;

    explicit TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
        for (std::size_t i = 1; i < dates_.size(); ++i) {
            if (!(dates_[i - 1] < dates_[i])) {
                throw ValidationError("calendar not strictly increasing at " +
                                      format_date(dates_[i]));
            }
        }
    }

    std::size_t size() const noexcept { return dates_.size(); }
    bool empty() const noexcept { return dates_.empty(); }
    Date operator[](std::size_t i) const { return dates_[i]; }
    Date front() const { return dates_.front(); }
    Date back() const { return dates_.back(); }
    auto begin() const noexcept { return dates_.begin(); }
    auto end() const noexcept { return dates_.end(); }
    const std::vector<Date>& dates() const noexcept { return dates_; }

    std::optional<std::size_t> index_of(Date d) const {
        auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
        if (it == dates_.end() || *it != d) return std::nullopt;
        return static_cast<std::size_t>(it - dates_.begin());
    }

    /// Number of dates <= d.
    std::size_t count_until(Date d) const {
        return static_cast<std::size_t>(std::upper_bound(dates_.begin(), dates_.end(), d) -
                                        dates_.begin());
    }

    bool operator==(const TradingCalendar&) const = default;

private:
    std::vector<Date> dates_;
};

/// One optional value per calendar date. An empty optional marks an absent
/// value (warm-up, not yet observed); absent is never the same as zero.
class DailySeries {
public:
    using value_type = std::optional<double>;

    DailySeries() = default;

    DailySeries(TradingCalendar calendar, std::vector<value_type> values, std::string name = {})
        : calendar_(std::move(calendar)), values_(std::move(values)), name_(std::move(name)) {
        if (calendar_.size() != values_.size()) {
            throw ValidationError("series '" + name_ + "': " + std::to_string(values_.size()) +
                                  " values for " + std::to_string(calendar_.size()) + " dates");
        }
    }

    static DailySeries dense(TradingCalendar calendar, const std::vector<double>& values,
                             std::string name = {}) {
        return DailySeries(std::move(calendar), std::vector<value_type>(values.begin(), values.end()),
                           std::move(name));
    }

    const TradingCalendar& calendar() const noexcept { return calendar_; }
    const std::vector<value_type>& values() const noexcept { return values_; }
    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    std::size_t size() const noexcept { return values_.size(); }
    const value_type& operator[](std::size_t i) const { return values_[i]; }
    Date date(std::size_t i) const { return calendar_[i]; }

    std::optional<std::size_t> first_defined() const {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i]) return i;
        }
        return std::nullopt;
    }

    bool operator==(const DailySeries& other) const {
        return calendar_ == other.calendar_ && values_ == other.values_;
    }

private:
    TradingCalendar calendar_;
    std::vector<value_type> values_;
    std::string name_;
};

struct RollingParams {
    static constexpr std::size_t kExpanding = std::numeric_limits<std::size_t>::max();

    std::size_t window = kExpanding;
    std::size_t min_obs = 2;

    static constexpr RollingParams trailing(std::size_t window, std::size_t min_obs) {
        return {window, min_obs};
    }
    static constexpr RollingParams expanding(std::size_t min_obs) { return {kExpanding, min_obs}; }

    bool is_expanding() const noexcept { return window == kExpanding; }

    void validate() const {
        if (window == 0) throw std::invalid_argument("rolling window must be >= 1");
        if (min_obs == 0) throw std::invalid_argument("min_obs must be >= 1");
        if (!is_expanding() && min_obs > window) {
            throw std::invalid_argument("min_obs must not exceed window");
        }
    }
};

namespace detail {

inline std::size_t window_start(std::size_t t, const RollingParams& p) {
    if (p.is_expanding() || t + 1 < p.window) return 0;
    return t + 1 - p.window;
}

// Present values in the window ending at t (inclusive), in date order.
inline void collect_window(const DailySeries& s, std::size_t t, const RollingParams& p,
                           std::vector<double>& out) {
    out.clear();
    for (std::size_t i = window_start(t, p); i <= t; ++i) {
        if (s[i]) out.push_back(*s[i]);
    }
}

inline double mean_of(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Sample (n-1) standard deviation, two-pass.
inline double sample_std_of(std::span<const double> xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace detail

/// Restricts every series to the intersection of their calendars.
inline std::vector<DailySeries> align(const std::vector<DailySeries>& series_list) {
    if (series_list.empty()) return {};
    for (const auto& s : series_list) {
        if (s.size() == 0) throw AlignmentError("cannot align empty series '" + s.name() + "'");
    }
    std::vector<Date> common = series_list.front().calendar().dates();
    for (std::size_t k = 1; k < series_list.size(); ++k) {
        const auto& other = series_list[k].calendar().dates();
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                              std::back_inserter(next));
        if (next.empty()) {
            std::string names;
            for (std::size_t j = 0; j <= k; ++j) {
                if (j) names += ", ";
                names += "'" + series_list[j].name() + "'";
            }
            throw AlignmentError("empty calendar intersection; series '" + series_list[k].name() +
                                 "' is disjoint from the intersection of " + names);
        }
        common = std::move(next);
    }
    TradingCalendar cal(std::move(common));
    std::vector<DailySeries> out;
    out.reserve(series_list.size());
    for (const auto& s : series_list) {
        std::vector<DailySeries::value_type> vals;
        vals.reserve(cal.size());
        std::size_t j = 0;
        for (Date d : cal) {
            while (s.date(j) != d) ++j;
            vals.push_back(s[j]);
        }
        out.emplace_back(cal, std::move(vals), s.name());
    }
    return out;
}

/// Re-expresses s on another calendar. Dates missing from s become absent;
/// dates of s not in the target calendar are dropped.
inline DailySeries reindex(const DailySeries& s, const TradingCalendar& target) {
    std::vector<DailySeries::value_type> vals(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (auto j = s.calendar().index_of(target[i])) vals[i] = s[*j];
    }
    return DailySeries(target, std::move(vals), s.name());
}

/// Positional lag: out[t] = s[t - lag].
inline DailySeries shift(const DailySeries& s, std::size_t lag) {
    std::vector<DailySeries::value_type> vals(s.size());
    for (std::size_t t = lag; t < s.size(); ++t) vals[t] = s[t - lag];
    return DailySeries(s.calendar(), std::move(vals), s.name());
}

/// Prefix of s with dates <= d.
inline DailySeries truncate_at(const DailySeries& s, Date d) {
    std::size_t n = s.calendar().count_until(d);
    std::vector<Date> dates(s.calendar().begin(), s.calendar().begin() + static_cast<long>(n));
    std::vector<DailySeries::value_type> vals(s.values().begin(),
                                              s.values().begin() + static_cast<long>(n));
    return DailySeries(TradingCalendar(std::move(dates)), std::move(vals), s.name());
}

/// Trailing mean over the `window` dates ending at t. Absent until the window
/// holds min_obs present values.
inline DailySeries rolling_mean(const DailySeries& s, const RollingParams& p) {
    p.validate();
    std::vector<DailySeries::value_type> out(s.size());
    std::vector<double> buf;
    for (std::size_t t = 0; t < s.size(); ++t) {
        detail::collect_window(s, t, p, buf);
        if (buf.size() >= p.min_obs) out[t] = detail::mean_of(buf);
    }
    return DailySeries(s.calendar(), std::move(out), s.name());
}

/// (s_t - mean) / sample std over the trailing window. A flat window gives 0.
inline DailySeries rolling_zscore(const DailySeries& s, const RollingParams& p) {
    p.validate();
    if (p.min_obs < 2) throw std::invalid_argument("z-score needs min_obs >= 2");
    std::vector<DailySeries::value_type> out(s.size());
    std::vector<double> buf;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (!s[t]) continue;
        detail::collect_window(s, t, p, buf);
        if (buf.size() < p.min_obs) continue;
        auto [lo, hi] = std::minmax_element(buf.begin(), buf.end());
        if (*lo == *hi) {
            // Flat window: the mean may not round back to the constant, so
            // the two-pass std could be a tiny nonzero.
            out[t] = 0.0;
            continue;
        }
        double m = detail::mean_of(buf);
        double sd = detail::sample_std_of(buf, m);
        out[t] = (*s[t] - m) / sd;
    }
    return DailySeries(s.calendar(), std::move(out), s.name());
}

/// Linear interpolation between order statistics: h = (n-1)q.
inline double percentile_sorted(std::span<const double> sorted, double q) {
    double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

/// q-th percentile of all present values up to and including t.
inline DailySeries expanding_percentile(const DailySeries& s, double q, std::size_t min_obs) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("percentile q must lie in (0,1)");
    if (min_obs < 2) throw std::invalid_argument("percentile needs min_obs >= 2");
    std::vector<DailySeries::value_type> out(s.size());
    std::vector<double> sorted;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s[t]) sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), *s[t]), *s[t]);
        if (sorted.size() >= min_obs) out[t] = percentile_sorted(sorted, q);
    }
    return DailySeries(s.calendar(), std::move(out), s.name());
}

/// Standard normal CDF, clamped into the open interval (0,1).
inline double normal_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("normal_cdf: non-finite argument");
    double p = 0.5 * std::erfc(-x / std::sqrt(2.0));
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::clamp(p, lo, hi);
}

/// Last trading date of every calendar month present in cal.
inline std::vector<Date> month_ends(const TradingCalendar& cal) {
    if (cal.empty()) throw std::invalid_argument("month_ends: empty calendar");
    std::vector<Date> out;
    for (std::size_t i = 0; i < cal.size(); ++i) {
        bool last = i + 1 == cal.size();
        if (!last) {
            std::chrono::year_month_day a{cal[i]}, b{cal[i + 1]};
            last = a.year() != b.year() || a.month() != b.month();
        }
        if (last) out.push_back(cal[i]);
    }
    return out;
}

}  // namespace roro
