#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roro/backtest.hpp"
#include "roro/errors.hpp"
#include "roro/ids.hpp"
#include "roro/ingestion.hpp"
#include "roro/metrics.hpp"
#include "roro/signals.hpp"
#include "roro/ts_core.hpp"

namespace roro {

/// w_t = signal_{t-lag} (positional lag on the signal's calendar).
inline WeightSeries weights_from_signal(const SignalSeries& signal, std::size_t lag = 1,
                                        std::string asset = "asset") {
    if (lag < 1) throw std::invalid_argument("signal lag must be >= 1");
    return WeightSeries::single(shift(signal.series(), lag), std::move(asset));
}

/// w_t = appetite_{t-lag} * news_{t-lag}; both signals on one calendar.
inline WeightSeries si_news_weights(const SignalSeries& si_appetite, const SignalSeries& news,
                                    std::size_t lag = 1, std::string asset = "asset") {
    if (lag < 1) throw std::invalid_argument("signal lag must be >= 1");
    if (!(si_appetite.calendar() == news.calendar())) {
        throw AlignmentError("si_news_weights: signals are on different calendars");
    }
    std::vector<std::optional<double>> prod(news.size());
    for (std::size_t t = 0; t < news.size(); ++t) {
        if (si_appetite[t] && news[t]) prod[t] = *si_appetite[t] * *news[t];
    }
    DailySeries product(news.calendar(), std::move(prod), "si_news");
    return WeightSeries::single(shift(product, lag), std::move(asset));
}

/// Fully invested on every date.
inline WeightSeries long_only_weights(const TradingCalendar& cal, std::string asset = "asset") {
    return WeightSeries(cal, {std::move(asset)},
                        {WeightSeries::Column(cal.size(), std::optional<double>(1.0))});
}

/// P_t / P_{t-1} - 1, absent on the first date.
inline DailySeries simple_returns(const DailySeries& prices) {
    std::vector<std::optional<double>> out(prices.size());
    for (std::size_t t = 1; t < prices.size(); ++t) {
        if (prices[t] && prices[t - 1]) out[t] = *prices[t] / *prices[t - 1] - 1.0;
    }
    return DailySeries(prices.calendar(), std::move(out), prices.name());
}

/// Daily-rebalanced equal-weight basket: per-date mean of simple returns on
/// the common calendar of the chosen markets.
inline DailySeries equal_weight_basket_returns(const PriceTable& table,
                                               const std::vector<std::string>& market_ids) {
    if (market_ids.size() < 2) throw ValidationError("basket needs at least 2 markets");
    std::vector<DailySeries> levels;
    for (const auto& id : market_ids) levels.push_back(table.market(id));
    auto aligned = align(levels);
    std::vector<DailySeries> rets;
    for (const auto& s : aligned) rets.push_back(simple_returns(s));
    const auto& cal = aligned.front().calendar();
    std::vector<std::optional<double>> out(cal.size());
    for (std::size_t t = 1; t < cal.size(); ++t) {
        double sum = 0.0;
        for (const auto& r : rets) sum += *r[t];
        out[t] = sum / static_cast<double>(rets.size());
    }
    return DailySeries(cal, std::move(out), "basket");
}

inline DailySeries equal_weight_basket_returns(const PriceTable& table) {
    std::vector<std::string> ids;
    for (const auto& [id, s] : table.markets) ids.push_back(id);
    return equal_weight_basket_returns(table, ids);
}

// ---------------------------------------------------------------------------
// Dynamic SI vs SI+News selection
// ---------------------------------------------------------------------------

struct MonthSharpes {
    std::string month;  // YYYY-MM
    std::optional<double> sharpe_si;
    std::optional<double> sharpe_si_news;
};

struct MonthDecision {
    std::string month;
    std::optional<double> sharpe_si;       // measured at this month's last date
    std::optional<double> sharpe_si_news;
    StrategyId selected;                   // held during this month

    bool operator==(const MonthDecision&) const = default;
};

struct SelectionLog {
    std::vector<MonthDecision> months;
};

/// The strategy held in month k is the one with the higher Sharpe at the
/// end of month k-1. Month 0 holds SI. Ties, or an undefined Sharpe on
/// either side, keep the previous holding.
inline SelectionLog select_from_sharpes(const std::vector<MonthSharpes>& sharpes) {
    SelectionLog log;
    StrategyId held = StrategyId::SI;
    for (const auto& m : sharpes) {
        log.months.push_back({m.month, m.sharpe_si, m.sharpe_si_news, held});
        if (m.sharpe_si && m.sharpe_si_news) {
            if (*m.sharpe_si_news > *m.sharpe_si) {
                held = StrategyId::SINews;
            } else if (*m.sharpe_si > *m.sharpe_si_news) {
                held = StrategyId::SI;
            }
        }
    }
    return log;
}

enum class SelectorWindow {
    trailing,       // the last `window` daily returns ending at month end
    calendar_month, // the returns of the month just ended
};

struct SelectorParams {
    std::size_t window = 250;
    SelectorWindow mode = SelectorWindow::trailing;
    double rf_daily = 0.0;
    double annualization = kTradingDaysPerYear;
};

/// Sharpe of both candidates at every month end of `cal`. Returns series
/// must share `cal`; the first date's return is absent by construction.
inline std::vector<MonthSharpes> month_end_sharpes(const DailySeries& ret_si,
                                                   const DailySeries& ret_si_news,
                                                   const SelectorParams& p = {}) {
    if (!(ret_si.calendar() == ret_si_news.calendar())) {
        throw ValidationError("dynamic selector: candidate calendars differ");
    }
    if (p.window < 2) throw std::invalid_argument("selector window must be >= 2");
    const auto& cal = ret_si.calendar();
    std::vector<MonthSharpes> out;
    std::size_t month_start = 0;
    for (Date me : month_ends(cal)) {
        std::size_t e = *cal.index_of(me);
        std::size_t first = 0;
        bool enough = false;
        if (p.mode == SelectorWindow::trailing) {
            enough = e + 1 >= p.window;
            if (enough) first = e + 1 - p.window;
        } else {
            first = month_start;
            enough = true;
        }
        MonthSharpes ms{format_month(me), std::nullopt, std::nullopt};
        if (enough) {
            std::vector<double> a, b;
            for (std::size_t t = first; t <= e; ++t) {
                if (ret_si[t] && ret_si_news[t]) {
                    a.push_back(*ret_si[t]);
                    b.push_back(*ret_si_news[t]);
                }
            }
            if (p.mode == SelectorWindow::calendar_month || a.size() == p.window) {
                ms.sharpe_si = sharpe(a, p.rf_daily, p.annualization);
                ms.sharpe_si_news = sharpe(b, p.rf_daily, p.annualization);
            }
        }
        out.push_back(std::move(ms));
        month_start = e + 1;
    }
    return out;
}

struct DynamicSelection {
    WeightSeries weights;
    SelectionLog log;
};

/// Copies each month's weights from the candidate held that month.
inline DynamicSelection dynamic_selector(const BacktestResult& bt_si,
                                         const BacktestResult& bt_si_news,
                                         const SelectorParams& p = {}) {
    const auto& cal = bt_si.values.calendar();
    if (!(cal == bt_si_news.values.calendar()) ||
        bt_si.weights_applied.n_assets() != bt_si_news.weights_applied.n_assets()) {
        throw ValidationError("dynamic selector: candidate backtests differ in calendar or assets");
    }
    auto log = select_from_sharpes(month_end_sharpes(bt_si.daily_returns, bt_si_news.daily_returns, p));

    std::vector<WeightSeries::Column> cols(bt_si.weights_applied.n_assets(),
                                           WeightSeries::Column(cal.size()));
    std::size_t month = 0;
    for (std::size_t t = 0; t < cal.size(); ++t) {
        while (log.months[month].month != format_month(cal[t])) ++month;
        const auto& src = log.months[month].selected == StrategyId::SINews ? bt_si_news.weights_applied
                                                                           : bt_si.weights_applied;
        for (std::size_t i = 0; i < cols.size(); ++i) cols[i][t] = src.at(i, t);
    }
    return {WeightSeries(cal, bt_si.weights_applied.assets(), std::move(cols)), std::move(log)};
}

/// Share of months each candidate was held.
inline std::map<StrategyId, double> selection_frequency(const SelectionLog& log) {
    if (log.months.empty()) throw std::invalid_argument("selection_frequency: empty log");
    std::size_t si = 0, si_news = 0;
    for (const auto& m : log.months) {
        (m.selected == StrategyId::SINews ? si_news : si) += 1;
    }
    double n = static_cast<double>(log.months.size());
    return {{StrategyId::SI, static_cast<double>(si) / n},
            {StrategyId::SINews, static_cast<double>(si_news) / n}};
}

}  // namespace roro
