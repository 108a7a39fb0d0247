#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "roro/backtest.hpp"
#include "roro/csv.hpp"
#include "roro/ids.hpp"
#include "roro/metrics.hpp"

namespace roro {

struct PerfStats {
    std::optional<double> sharpe;
    std::optional<double> calmar;
    double vol = 0.0;
    double max_dd = 0.0;
    double ann_return = 0.0;
    std::optional<double> turnover;  // not reported for Long Only

    bool operator==(const PerfStats&) const = default;
};

struct PerfRow {
    StrategyId strategy;
    PerfStats stats;

    bool operator==(const PerfRow&) const = default;
};

struct MetricParams {
    double rf_daily = 0.0;
    double annualization = kTradingDaysPerYear;
};

inline PerfStats compute_perf(StrategyId id, const BacktestResult& bt, const MetricParams& p = {}) {
    auto values = present_values(bt.values);
    auto rets = present_values(bt.daily_returns);
    PerfStats s;
    s.sharpe = sharpe(rets, p.rf_daily, p.annualization);
    s.calmar = calmar(values, p.annualization);
    s.vol = annualized_vol(rets, p.annualization);
    s.max_dd = max_drawdown(values);
    s.ann_return = annualized_return(values, p.annualization);
    if (id != StrategyId::LongOnly) s.turnover = bt.turnover_annualized;
    return s;
}

/// Rows sorted by Sharpe descending; undefined Sharpe sorts last; ties keep
/// StrategyId order.
inline std::vector<PerfRow> perf_table(const std::vector<std::pair<StrategyId, BacktestResult>>& results,
                                       const MetricParams& p = {}) {
    if (results.empty()) throw std::invalid_argument("perf_table: no results");
    std::vector<PerfRow> rows;
    for (const auto& [id, bt] : results) rows.push_back({id, compute_perf(id, bt, p)});
    std::stable_sort(rows.begin(), rows.end(), [](const PerfRow& a, const PerfRow& b) {
        if (a.stats.sharpe.has_value() != b.stats.sharpe.has_value()) return a.stats.sharpe.has_value();
        if (a.stats.sharpe && *a.stats.sharpe != *b.stats.sharpe) {
            return *a.stats.sharpe > *b.stats.sharpe;
        }
        return a.strategy < b.strategy;
    });
    return rows;
}

inline const std::vector<std::string>& perf_columns() {
    static const std::vector<std::string> cols = {"Strategy", "Sharpe", "Calmar",
                                                  "Vol",      "Max DD", "Turnover"};
    return cols;
}

inline constexpr const char* kNotAvailable = "n.a.";

inline void write_perf_csv(const std::vector<PerfRow>& rows, std::ostream& out) {
    auto opt = [](const std::optional<double>& v) {
        return v ? csv::format_double(*v) : std::string(kNotAvailable);
    };
    csv::write_row(out, perf_columns());
    for (const auto& r : rows) {
        csv::write_row(out, {std::string(display_name(r.strategy)), opt(r.stats.sharpe),
                             opt(r.stats.calmar), csv::format_double(r.stats.vol),
                             csv::format_double(r.stats.max_dd), opt(r.stats.turnover)});
    }
}

/// Reads back a table written by write_perf_csv. ann_return is not part of
/// the table and comes back as 0.
inline std::vector<PerfRow> parse_perf_csv(const csv::Document& doc) {
    if (doc.header != perf_columns()) throw ValidationError("perf csv: unexpected header");
    auto opt = [](const std::string& s, std::size_t line) -> std::optional<double> {
        if (s == kNotAvailable) return std::nullopt;
        return csv::parse_double(s, line, "metric");
    };
    std::vector<PerfRow> rows;
    for (const auto& row : doc.rows) {
        auto id = parse_strategy(row.fields[0]);
        if (!id) {
            throw ValidationError("line " + std::to_string(row.line) + ": unknown strategy '" +
                                  row.fields[0] + "'");
        }
        PerfRow r{*id, {}};
        r.stats.sharpe = opt(row.fields[1], row.line);
        r.stats.calmar = opt(row.fields[2], row.line);
        r.stats.vol = csv::parse_double(row.fields[3], row.line, "Vol");
        r.stats.max_dd = csv::parse_double(row.fields[4], row.line, "Max DD");
        r.stats.turnover = opt(row.fields[5], row.line);
        rows.push_back(r);
    }
    return rows;
}

/// Aligned-column markdown in the layout of a comparative strategy table.
inline void write_perf_markdown(const std::vector<PerfRow>& rows, std::ostream& out,
                                const std::string& title = {}) {
    auto fmt = [](const char* f, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return std::string(buf);
    };
    std::vector<std::vector<std::string>> cells;
    cells.push_back(perf_columns());
    for (const auto& r : rows) {
        const auto& s = r.stats;
        cells.push_back({std::string(display_name(r.strategy)),
                         s.sharpe ? fmt("%.2f", *s.sharpe) : kNotAvailable,
                         s.calmar ? fmt("%.2f", *s.calmar) : kNotAvailable,
                         fmt("%.1f%%", s.vol * 100.0), fmt("%.0f%%", s.max_dd * 100.0),
                         s.turnover ? fmt("%.1f", *s.turnover) : kNotAvailable});
    }
    std::vector<std::size_t> width(perf_columns().size(), 3);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    if (!title.empty()) out << "### " << title << "\n\n";
    for (std::size_t r = 0; r < cells.size(); ++r) {
        out << '|';
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            const auto& cell = cells[r][c];
            std::string pad(width[c] - cell.size(), ' ');
            out << ' ' << (c == 0 ? cell + pad : pad + cell) << " |";
        }
        out << '\n';
        if (r == 0) {
            out << '|';
            for (std::size_t c = 0; c < width.size(); ++c) {
                out << (c == 0 ? ' ' + std::string(width[c], '-') + " |"
                               : ' ' + std::string(width[c] - 1, '-') + ": |");
            }
            out << '\n';
        }
    }
}

}  // namespace roro
