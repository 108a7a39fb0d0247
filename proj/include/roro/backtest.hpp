#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "roro/errors.hpp"
#include "roro/metrics.hpp"
#include "roro/ts_core.hpp"

namespace roro {

/// Long-only portfolio weights, one column per asset, each in [0, 1].
/// Absent entries mean "not yet defined" (signal warm-up), never cash.
class WeightSeries {
public:
    using Column = std::vector<std::optional<double>>;

    WeightSeries() = default;

    WeightSeries(TradingCalendar calendar, std::vector<std::string> assets,
                 std::vector<Column> columns)
        : calendar_(std::move(calendar)), assets_(std::move(assets)), columns_(std::move(columns)) {
        if (assets_.size() != columns_.size()) {
            throw ValidationError("weight series: asset names and columns differ in count");
        }
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].size() != calendar_.size()) {
                throw ValidationError("weight column '" + assets_[i] + "' has wrong length");
            }
            for (std::size_t t = 0; t < calendar_.size(); ++t) {
                const auto& w = columns_[i][t];
                if (w && !(*w >= 0.0 && *w <= 1.0)) {
                    throw ComputationError("weight " + std::to_string(*w) + " outside [0,1] for '" +
                                           assets_[i] + "' at " + format_date(calendar_[t]));
                }
            }
        }
    }

    static WeightSeries single(const DailySeries& s, std::string asset = "asset") {
        return WeightSeries(s.calendar(), {std::move(asset)}, {s.values()});
    }

    const TradingCalendar& calendar() const noexcept { return calendar_; }
    const std::vector<std::string>& assets() const noexcept { return assets_; }
    std::size_t n_assets() const noexcept { return columns_.size(); }
    std::size_t size() const noexcept { return calendar_.size(); }
    const Column& column(std::size_t i) const { return columns_[i]; }
    const std::optional<double>& at(std::size_t asset, std::size_t t) const {
        return columns_[asset][t];
    }

    bool defined_at(std::size_t t) const {
        for (const auto& c : columns_) {
            if (!c[t]) return false;
        }
        return true;
    }

    /// Sum of weights across assets; absent unless every column is defined.
    std::optional<double> total(std::size_t t) const {
        if (!defined_at(t)) return std::nullopt;
        double s = 0.0;
        for (const auto& c : columns_) s += *c[t];
        return s;
    }

    DailySeries column_series(std::size_t i) const {
        return DailySeries(calendar_, columns_[i], assets_[i]);
    }

    /// Dates from `first` onward.
    WeightSeries slice_from(std::size_t first) const {
        std::vector<Date> dates(calendar_.begin() + static_cast<long>(first), calendar_.end());
        std::vector<Column> cols;
        for (const auto& c : columns_) cols.emplace_back(c.begin() + static_cast<long>(first), c.end());
        return WeightSeries(TradingCalendar(std::move(dates)), assets_, std::move(cols));
    }

    bool operator==(const WeightSeries&) const = default;

private:
    TradingCalendar calendar_;
    std::vector<std::string> assets_;
    std::vector<Column> columns_;
};

struct CostModel {
    double b = 0.0002;
    // Charge b * |w_0| for establishing the first position (from an implicit
    // zero weight before the first date). The charge lands in the first step.
    bool charge_entry = true;
};

struct BacktestResult {
    DailySeries values;         // S_t, S_0 = 1
    WeightSeries weights_applied;
    DailySeries daily_returns;  // S_t / S_{t-1} - 1, absent at t = 0
    DailySeries cost_paid;      // fraction of S_{t-1} deducted at step t
    double turnover_annualized = 0.0;
};

/// Average yearly sum of absolute weight changes, counting the initial
/// move from an all-zero portfolio.
inline double turnover(const WeightSeries& w, double annualization = kTradingDaysPerYear) {
    if (w.size() < 2) throw std::invalid_argument("turnover needs >= 2 dates");
    double total = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (!w.defined_at(t)) {
            throw ValidationError("turnover: weights undefined at " + format_date(w.calendar()[t]));
        }
        for (std::size_t i = 0; i < w.n_assets(); ++i) {
            double prev = t == 0 ? 0.0 : *w.at(i, t - 1);
            total += std::abs(*w.at(i, t) - prev);
        }
    }
    return total * annualization / static_cast<double>(w.size() - 1);
}

/// S_t = S_{t-1} * (1 + sum_i w_{t-1}^i r_t^i - b * sum_i |w_t^i - w_{t-1}^i|).
/// `returns` holds one series per weight column on the weights' calendar;
/// the return on the first date is ignored.
inline BacktestResult run_backtest(const WeightSeries& weights,
                                   const std::vector<DailySeries>& returns,
                                   const CostModel& cost = {},
                                   double annualization = kTradingDaysPerYear) {
    if (cost.b < 0.0) throw std::invalid_argument("cost rate must be >= 0");
    const auto& cal = weights.calendar();
    const std::size_t n = cal.size();
    const std::size_t m = weights.n_assets();
    if (n < 2) throw ValidationError("backtest needs at least 2 dates");
    if (returns.size() != m) {
        throw ValidationError("backtest: " + std::to_string(returns.size()) + " return series for " +
                              std::to_string(m) + " weight columns");
    }
    for (const auto& r : returns) {
        if (!(r.calendar() == cal)) {
            throw AlignmentError("backtest: return series '" + r.name() +
                                 "' is not on the weight calendar");
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        if (!weights.defined_at(t)) {
            throw ValidationError("backtest: weights undefined at " + format_date(cal[t]));
        }
        for (std::size_t i = 0; t > 0 && i < m; ++i) {
            if (!returns[i][t]) {
                throw ValidationError("backtest: return '" + returns[i].name() + "' missing at " +
                                      format_date(cal[t]));
            }
        }
    }

    std::vector<std::optional<double>> values(n), rets(n), costs(n);
    values[0] = 1.0;
    costs[0] = 0.0;
    double s = 1.0;
    for (std::size_t t = 1; t < n; ++t) {
        double gross = 0.0;
        double traded = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double prev = *weights.at(i, t - 1);
            gross += prev * *returns[i][t];
            traded += std::abs(*weights.at(i, t) - prev);
            if (t == 1 && cost.charge_entry) traded += std::abs(prev);
        }
        double c = cost.b * traded;
        double factor = 1.0 + gross - c;
        if (!(factor > 0.0)) {
            throw ComputationError("backtest: strategy value annihilated at " + format_date(cal[t]));
        }
        double next = s * factor;
        rets[t] = next / s - 1.0;
        costs[t] = c;
        s = next;
        values[t] = s;
    }

    BacktestResult r;
    r.values = DailySeries(cal, std::move(values), "value");
    r.weights_applied = weights;
    r.daily_returns = DailySeries(cal, std::move(rets), "ret");
    r.cost_paid = DailySeries(cal, std::move(costs), "cost");
    r.turnover_annualized = turnover(weights, annualization);
    return r;
}

/// k * returns with k chosen so the full-sample annualized vol hits target.
inline DailySeries rescale_to_target_vol(const DailySeries& returns, double target_vol,
                                         double factor = kTradingDaysPerYear) {
    double vol = annualized_vol(returns, factor);
    if (!(vol > 0.0)) throw ComputationError("cannot rescale a series with zero volatility");
    double k = target_vol / vol;
    std::vector<std::optional<double>> out(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (returns[t]) out[t] = k * *returns[t];
    }
    return DailySeries(returns.calendar(), std::move(out), returns.name());
}

}  // namespace roro
