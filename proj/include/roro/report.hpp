#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "roro/backtest.hpp"
#include "roro/config.hpp"
#include "roro/csv.hpp"
#include "roro/digest.hpp"
#include "roro/ids.hpp"
#include "roro/ingestion.hpp"
#include "roro/perf_table.hpp"
#include "roro/signals.hpp"
#include "roro/strategies.hpp"
#include "roro/ts_core.hpp"

namespace roro {

inline constexpr const char* kArtifactName = "roro";
inline constexpr const char* kArtifactVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Inputs and signals
// ---------------------------------------------------------------------------

struct InputDigest {
    std::string name;  // config key: prices, risk, sentiment
    std::string path;
    std::string sha256;
};

struct Inputs {
    PriceTable prices;
    RiskFactorTable risk;
    std::vector<SentimentDay> sentiment;
    std::vector<InputDigest> digests;
    std::vector<std::string> warnings;
};

inline std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty()) return file;
    return (std::filesystem::path(dir) / file).generic_string();
}

/// Reads and validates the three input files. Digests cover exactly the
/// bytes that were parsed.
inline Inputs load_inputs(const ExperimentConfig& cfg, const HeadlineScorer& scorer) {
    Inputs in;
    auto slurp = [&](const std::string& name, const std::string& file) {
        std::string path = join_path(cfg.data_dir, file);
        std::string bytes = read_file_bytes(path);
        in.digests.push_back({name, path, sha256_hex(bytes)});
        std::istringstream ss(bytes);
        try {
            return std::pair{path, csv::parse(ss)};
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    };
    auto [ppath, pdoc] = slurp("prices", cfg.files.prices);
    auto [rpath, rdoc] = slurp("risk", cfg.files.risk);
    auto [spath, sdoc] = slurp("sentiment", cfg.files.sentiment);
    auto with_path = [](const std::string& path, auto&& fn) {
        try {
            return fn();
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    };
    in.prices = with_path(ppath, [&] { return parse_price_csv(pdoc); });
    in.risk = with_path(rpath, [&] { return parse_risk_csv(rdoc, cfg.ffill_limit); });
    auto sent = with_path(spath, [&] { return parse_sentiment_csv(sdoc, scorer, cfg.headline_budget); });
    in.sentiment = std::move(sent.days);
    in.warnings = std::move(sent.warnings);
    if (in.sentiment.empty()) throw ValidationError(spath + ": no sentiment days");
    return in;
}

struct Signals {
    NewsSignalStages news;
    StressIndexResult stress;
    SignalSeries appetite;
    SignalSeries vix;
};

inline Signals compute_signals(const Inputs& in, const ExperimentConfig& cfg) {
    Signals s;
    s.news = news_signal_stages(in.sentiment, cfg.news);
    s.stress = stress_index_stages(in.risk, cfg.stress);
    s.appetite = si_risk_appetite(s.stress.index, cfg.si_mode, cfg.si_threshold);
    s.vix = vix_signal(in.risk.factor(cfg.vix_factor).values, cfg.vix_quantile, cfg.vix_min_obs);
    return s;
}

// ---------------------------------------------------------------------------
// One universe
// ---------------------------------------------------------------------------

inline DailySeries universe_returns(const PriceTable& prices, Universe u, const ExperimentConfig& cfg) {
    switch (u) {
        case Universe::SP500: return simple_returns(prices.market("SP500"));
        case Universe::NASDAQ: return simple_returns(prices.market("NASDAQ"));
        case Universe::WORLD6: return equal_weight_basket_returns(prices, cfg.world_markets);
    }
    throw ValidationError("unknown universe");
}

struct UniverseRun {
    Universe universe;
    DailySeries returns;                          // full universe calendar
    std::map<StrategyId, BacktestResult> results;
    std::optional<SelectionLog> selection;
};

namespace detail {

inline std::size_t first_defined_index(const WeightSeries& w) {
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (w.defined_at(t)) return t;
    }
    return w.size();
}

inline DailySeries slice_series(const DailySeries& s, std::size_t first) {
    std::vector<Date> dates(s.calendar().begin() + static_cast<long>(first), s.calendar().end());
    std::vector<DailySeries::value_type> vals(s.values().begin() + static_cast<long>(first),
                                              s.values().end());
    return DailySeries(TradingCalendar(std::move(dates)), std::move(vals), s.name());
}

}  // namespace detail

/// Builds every requested strategy on the universe calendar and backtests it
/// from a common start: the first date on which all of them have weights,
/// pushed later by any configured per-strategy start date.
inline UniverseRun run_universe(const Signals& sig, const PriceTable& prices, Universe u,
                                const std::vector<StrategyId>& strategies, const ExperimentConfig& cfg) {
    UniverseRun run{u, universe_returns(prices, u, cfg), {}, std::nullopt};
    const auto& cal = run.returns.calendar();
    const std::string asset(to_string(u));

    auto news = SignalSeries(reindex(sig.news.signal.series(), cal), SignalKind::binary);
    auto appetite = SignalSeries(reindex(sig.appetite.series(), cal), sig.appetite.kind());
    auto vix = SignalSeries(reindex(sig.vix.series(), cal), SignalKind::binary);

    std::map<StrategyId, WeightSeries> weights;
    auto need = [&](StrategyId id) {
        if (weights.count(id)) return;
        switch (id) {
            case StrategyId::LongOnly: weights.emplace(id, long_only_weights(cal, asset)); break;
            case StrategyId::VIX: weights.emplace(id, weights_from_signal(vix, cfg.signal_lag, asset)); break;
            case StrategyId::SI: weights.emplace(id, weights_from_signal(appetite, cfg.signal_lag, asset)); break;
            case StrategyId::News: weights.emplace(id, weights_from_signal(news, cfg.signal_lag, asset)); break;
            case StrategyId::SINews:
                weights.emplace(id, si_news_weights(appetite, news, cfg.signal_lag, asset));
                break;
            case StrategyId::DynamicSINews: break;
        }
    };
    for (auto id : strategies) {
        if (id == StrategyId::DynamicSINews) {
            need(StrategyId::SI);
            need(StrategyId::SINews);
        } else {
            need(id);
        }
    }

    std::size_t common = 0;
    for (const auto& [id, w] : weights) common = std::max(common, detail::first_defined_index(w));
    if (common + 1 >= cal.size()) {
        throw ValidationError(std::string(to_string(u)) +
                              ": signals never become defined on the universe calendar");
    }
    auto start_for = [&](StrategyId id) {
        std::size_t s = common;
        if (auto it = cfg.start_dates.find(id); it != cfg.start_dates.end()) {
            s = std::max(s, static_cast<std::size_t>(
                                std::lower_bound(cal.begin(), cal.end(), it->second) - cal.begin()));
        }
        if (s + 1 >= cal.size()) {
            throw ValidationError(std::string(to_string(u)) + "/" + std::string(to_string(id)) +
                                  ": start date leaves fewer than 2 dates");
        }
        return s;
    };
    auto backtest_from = [&](const WeightSeries& w, std::size_t start) {
        return run_backtest(w.slice_from(start), {detail::slice_series(run.returns, start)},
                            cfg.cost_model(), cfg.annualization);
    };

    for (auto id : strategies) {
        std::size_t start = start_for(id);
        if (id == StrategyId::DynamicSINews) {
            auto si = backtest_from(weights.at(StrategyId::SI), start);
            auto si_news = backtest_from(weights.at(StrategyId::SINews), start);
            auto dyn = dynamic_selector(si, si_news, cfg.selector);
            run.results.emplace(id, run_backtest(dyn.weights, {detail::slice_series(run.returns, start)},
                                                 cfg.cost_model(), cfg.annualization));
            run.selection = std::move(dyn.log);
        } else {
            run.results.emplace(id, backtest_from(weights.at(id), start));
        }
    }
    return run;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

struct BenchmarkComparison {
    TradingCalendar calendar;
    std::vector<double> strategy_value;
    std::vector<double> benchmark_value;
    std::vector<double> allocation;
    double scale = 1.0;  // multiplier applied to benchmark returns
};

/// Benchmark returns scaled to the strategy's realized (ex-post, full
/// sample) volatility; both paths start at 1. `benchmark_returns` must be on
/// the strategy calendar; its first return is ignored.
inline BenchmarkComparison benchmark_comparison(const BacktestResult& strategy,
                                                const DailySeries& benchmark_returns,
                                                double annualization = kTradingDaysPerYear) {
    const auto& cal = strategy.values.calendar();
    if (cal.empty() || benchmark_returns.size() == 0) {
        throw ValidationError("benchmark comparison: empty input");
    }
    if (!(benchmark_returns.calendar() == cal)) {
        throw AlignmentError("benchmark comparison: benchmark not on the strategy calendar");
    }
    double target = annualized_vol(strategy.daily_returns, annualization);
    if (!(target > 0.0)) {
        throw ComputationError("benchmark comparison: strategy has zero volatility");
    }
    std::vector<std::optional<double>> tail(benchmark_returns.values());
    tail[0].reset();
    DailySeries bench(cal, std::move(tail), benchmark_returns.name());
    double bench_vol = annualized_vol(bench, annualization);
    if (!(bench_vol > 0.0)) throw ComputationError("benchmark comparison: benchmark has zero volatility");
    auto scaled = rescale_to_target_vol(bench, target, annualization);

    BenchmarkComparison out;
    out.calendar = cal;
    out.scale = target / bench_vol;
    double b = 1.0;
    for (std::size_t t = 0; t < cal.size(); ++t) {
        if (t > 0) b *= 1.0 + *scaled[t];
        out.strategy_value.push_back(*strategy.values[t]);
        out.benchmark_value.push_back(b);
        out.allocation.push_back(*strategy.weights_applied.total(t));
    }
    return out;
}

inline void write_benchmark_comparison(const BenchmarkComparison& c, std::ostream& out) {
    csv::write_row(out, {"date", "strategy_value", "benchmark_value", "allocation"});
    for (std::size_t t = 0; t < c.calendar.size(); ++t) {
        csv::write_row(out, {format_date(c.calendar[t]), csv::format_double(c.strategy_value[t]),
                             csv::format_double(c.benchmark_value[t]),
                             csv::format_double(c.allocation[t])});
    }
}

/// Plot data for strategy vs vol-matched benchmark: `date,strategy_value,benchmark_value,allocation`.
inline std::string emit_benchmark_comparison(const BacktestResult& strategy,
                                             const DailySeries& benchmark_returns,
                                             double annualization = kTradingDaysPerYear) {
    std::ostringstream os;
    write_benchmark_comparison(benchmark_comparison(strategy, benchmark_returns, annualization), os);
    return os.str();
}

inline void write_backtest_csv(const BacktestResult& bt, std::ostream& out) {
    csv::write_row(out, {"date", "value", "weight", "cost", "ret"});
    const auto& cal = bt.values.calendar();
    for (std::size_t t = 0; t < cal.size(); ++t) {
        csv::write_row(out, {format_date(cal[t]), csv::format_optional(bt.values[t]),
                             csv::format_optional(bt.weights_applied.total(t)),
                             csv::format_optional(bt.cost_paid[t]),
                             csv::format_optional(bt.daily_returns[t])});
    }
}

inline void write_selection_log_csv(const SelectionLog& log, std::ostream& out) {
    csv::write_row(out, {"month", "sharpe_si", "sharpe_si_news", "selected"});
    for (const auto& m : log.months) {
        csv::write_row(out, {m.month, csv::format_optional(m.sharpe_si),
                             csv::format_optional(m.sharpe_si_news),
                             std::string(display_name(m.selected))});
    }
}

/// Defined dates only: `date,value`.
inline void write_signal_csv(const DailySeries& s, std::ostream& out) {
    csv::write_row(out, {"date", "value"});
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s[t]) csv::write_row(out, {format_date(s.date(t)), csv::format_double(*s[t])});
    }
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

struct OutputFile {
    std::string path;  // relative to the output directory
    std::string content;
};

struct MatrixRun {
    nlohmann::json manifest;
    std::vector<OutputFile> files;  // manifest.json is last
    std::vector<std::string> warnings;
    std::vector<UniverseRun> universes;
};

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

/// Computes every (universe, strategy) experiment fully in memory. Nothing
/// touches the output directory; any failure propagates before a single
/// file exists.
inline MatrixRun plan_matrix(const ExperimentConfig& cfg, const HeadlineScorer& scorer) {
    cfg.validate();
    MatrixRun mr;
    Inputs in = load_inputs(cfg, scorer);

    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& d : in.digests) {
        inputs.push_back({{"name", d.name}, {"path", d.path}, {"sha256", d.sha256}});
    }
    mr.manifest["artifact"] = kArtifactName;
    mr.manifest["version"] = kArtifactVersion;
    // The output location is not an input to any result.
    mr.manifest["config"] = to_json(cfg);
    mr.manifest["config"].erase("output_dir");
    mr.manifest["inputs"] = inputs;

    mr.warnings = in.warnings;
    Signals sig = compute_signals(in, cfg);
    mr.warnings.insert(mr.warnings.end(), sig.stress.warnings.begin(), sig.stress.warnings.end());

    nlohmann::json experiments = nlohmann::json::array();
    nlohmann::json tables = nlohmann::json::object();
    for (auto u : cfg.universes) {
        const std::string un(to_string(u));
        UniverseRun run = run_universe(sig, in.prices, u, cfg.strategies, cfg);
        std::vector<std::pair<StrategyId, BacktestResult>> rows;
        for (auto id : cfg.strategies) {
            const std::string sn(to_string(id));
            const auto& bt = run.results.at(id);
            auto bench = reindex(run.returns, bt.values.calendar());
            auto cmp = benchmark_comparison(bt, bench, cfg.annualization);
            nlohmann::json e = {{"universe", un},
                                {"strategy", sn},
                                {"start", format_date(bt.values.calendar().front())},
                                {"end", format_date(bt.values.calendar().back())},
                                {"backtest", un + "/" + sn + "/backtest.csv"},
                                {"benchmark_comparison", un + "/" + sn + "/benchmark_comparison.csv"},
                                {"benchmark_scale", cmp.scale}};
            mr.files.push_back({un + "/" + sn + "/backtest.csv",
                                render([&](std::ostream& os) { write_backtest_csv(bt, os); })});
            mr.files.push_back({un + "/" + sn + "/benchmark_comparison.csv",
                                render([&](std::ostream& os) { write_benchmark_comparison(cmp, os); })});
            if (id == StrategyId::DynamicSINews && run.selection) {
                mr.files.push_back({un + "/" + sn + "/selection_log.csv",
                                    render([&](std::ostream& os) {
                                        write_selection_log_csv(*run.selection, os);
                                    })});
                e["selection_log"] = un + "/" + sn + "/selection_log.csv";
                nlohmann::json freq;
                for (auto [sid, f] : selection_frequency(*run.selection)) {
                    freq[std::string(to_string(sid))] = f;
                }
                e["selection_frequency"] = freq;
            }
            experiments.push_back(e);
            rows.emplace_back(id, bt);
        }
        auto table = perf_table(rows, cfg.metric_params());
        mr.files.push_back({un + "/perf_table.csv",
                            render([&](std::ostream& os) { write_perf_csv(table, os); })});
        mr.files.push_back({un + "/perf_table.md", render([&](std::ostream& os) {
                                write_perf_markdown(table, os, "Comparative analysis of strategies: " + un);
                            })});
        tables[un] = {{"csv", un + "/perf_table.csv"}, {"markdown", un + "/perf_table.md"}};
        mr.universes.push_back(std::move(run));
    }
    mr.manifest["experiments"] = experiments;
    mr.manifest["tables"] = tables;
    mr.manifest["warnings"] = mr.warnings;
    mr.files.push_back({"manifest.json", mr.manifest.dump(2) + "\n"});
    return mr;
}

inline void write_outputs(const std::vector<OutputFile>& files, const std::string& out_dir) {
    namespace fs = std::filesystem;
    for (const auto& f : files) {
        fs::path p = fs::path(out_dir) / f.path;
        fs::create_directories(p.parent_path());
        std::ofstream os(p, std::ios::binary | std::ios::trunc);
        if (!os) throw ComputationError("cannot write '" + p.string() + "'");
        os << f.content;
        if (!os) throw ComputationError("write failed for '" + p.string() + "'");
    }
}

/// Runs the matrix and writes all outputs, manifest last.
inline MatrixRun run_matrix(const ExperimentConfig& cfg, const HeadlineScorer& scorer,
                            const std::string& out_dir) {
    MatrixRun mr = plan_matrix(cfg, scorer);
    write_outputs(mr.files, out_dir);
    return mr;
}

/// Raw signal export: news, stress, si_appetite, vix as `date,value`.
inline std::vector<OutputFile> plan_signals(const ExperimentConfig& cfg, const HeadlineScorer& scorer) {
    cfg.validate();
    Inputs in = load_inputs(cfg, scorer);
    Signals sig = compute_signals(in, cfg);
    std::vector<OutputFile> files;
    auto add = [&](const std::string& name, const DailySeries& s) {
        files.push_back({"signals/" + name + ".csv", render([&](std::ostream& os) { write_signal_csv(s, os); })});
    };
    add("news", sig.news.signal.series());
    add("news_smoothed_z", sig.news.smoothed);
    add("stress", sig.stress.index.series());
    add("si_appetite", sig.appetite.series());
    add("vix", sig.vix.series());
    return files;
}

}  // namespace roro
