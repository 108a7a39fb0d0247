#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "roro/ts_core.hpp"

namespace roro {

inline constexpr double kTradingDaysPerYear = 252.0;

/// Present values of a series, in date order.
inline std::vector<double> present_values(const DailySeries& s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& v : s.values()) {
        if (v) out.push_back(*v);
    }
    return out;
}

namespace detail {

inline bool is_flat(std::span<const double> xs) {
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *lo == *hi;
}

}  // namespace detail

/// Sample std of daily returns scaled by sqrt(factor).
inline double annualized_vol(std::span<const double> daily_returns,
                             double factor = kTradingDaysPerYear) {
    if (daily_returns.size() < 2) throw std::invalid_argument("annualized_vol needs >= 2 returns");
    if (detail::is_flat(daily_returns)) return 0.0;
    double m = detail::mean_of(daily_returns);
    return detail::sample_std_of(daily_returns, m) * std::sqrt(factor);
}

/// Annualized mean excess return over its volatility. Undefined (nullopt)
/// when the excess returns have zero variance.
inline std::optional<double> sharpe(std::span<const double> daily_returns, double rf_daily = 0.0,
                                    double factor = kTradingDaysPerYear) {
    if (daily_returns.size() < 2) return std::nullopt;
    std::vector<double> excess(daily_returns.begin(), daily_returns.end());
    for (double& x : excess) x -= rf_daily;
    if (detail::is_flat(excess)) return std::nullopt;
    double m = detail::mean_of(excess);
    double sd = detail::sample_std_of(excess, m);
    return m / sd * std::sqrt(factor);
}

/// Largest fractional decline from a running peak: max_t (1 - S_t / max_{u<=t} S_u).
inline double max_drawdown(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("max_drawdown of empty path");
    double peak = values.front();
    double dd = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw std::invalid_argument("max_drawdown needs positive values");
        peak = std::max(peak, v);
        dd = std::max(dd, 1.0 - v / peak);
    }
    return dd;
}

/// Geometric: (S_T / S_0)^(factor / steps) - 1.
inline double annualized_return(std::span<const double> values,
                                double factor = kTradingDaysPerYear) {
    if (values.size() < 2) throw std::invalid_argument("annualized_return needs >= 2 values");
    double steps = static_cast<double>(values.size() - 1);
    return std::pow(values.back() / values.front(), factor / steps) - 1.0;
}

/// Annualized return over max drawdown; undefined for a drawdown-free path.
inline std::optional<double> calmar(std::span<const double> values,
                                    double factor = kTradingDaysPerYear) {
    double dd = max_drawdown(values);
    if (dd <= 0.0) return std::nullopt;
    return annualized_return(values, factor) / dd;
}

inline double annualized_vol(const DailySeries& r, double factor = kTradingDaysPerYear) {
    return annualized_vol(present_values(r), factor);
}
inline std::optional<double> sharpe(const DailySeries& r, double rf_daily = 0.0,
                                    double factor = kTradingDaysPerYear) {
    return sharpe(present_values(r), rf_daily, factor);
}
inline double max_drawdown(const DailySeries& v) { return max_drawdown(present_values(v)); }
inline double annualized_return(const DailySeries& v, double factor = kTradingDaysPerYear) {
    return annualized_return(present_values(v), factor);
}
inline std::optional<double> calmar(const DailySeries& v, double factor = kTradingDaysPerYear) {
    return calmar(present_values(v), factor);
}

}  // namespace roro
