#pragma once

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roro/date.hpp"
#include "roro/errors.hpp"
#include "roro/ids.hpp"
#include "roro/ingestion.hpp"
#include "roro/metrics.hpp"
#include "roro/perf_table.hpp"
#include "roro/signals.hpp"
#include "roro/strategies.hpp"

namespace roro {

struct InputFiles {
    std::string prices = "prices.csv";
    std::string risk = "risk.csv";
    std::string sentiment = "sentiment.csv";
};

/// Everything a run needs besides the data. Every field has a default, so
/// `{}` is a valid configuration.
struct ExperimentConfig {
    std::vector<Universe> universes{kAllUniverses.begin(), kAllUniverses.end()};
    std::vector<StrategyId> strategies{kAllStrategies.begin(), kAllStrategies.end()};

    double cost_rate = 0.0002;
    bool charge_entry_cost = true;
    std::size_t signal_lag = 1;
    double annualization = kTradingDaysPerYear;
    double rf_daily = 0.0;

    NewsSignalParams news;
    StressIndexParams stress;
    AppetiteMode si_mode = AppetiteMode::proportional;
    double si_threshold = 0.5;

    std::string vix_factor = "VIX";
    double vix_quantile = 0.8;
    std::size_t vix_min_obs = 250;

    SelectorParams selector;

    std::size_t ffill_limit = 5;
    std::size_t headline_budget = kDefaultHeadlineBudget;

    std::vector<std::string> world_markets = {"SP500", "NASDAQ", "NIKKEI", "EUROSTOXX", "EM", "FTSE"};
    // Backtests start on the later of this date and the first date on which
    // every strategy of the universe has defined weights.
    std::map<StrategyId, Date> start_dates;

    InputFiles files;
    std::string data_dir = "data";
    std::string output_dir = "out";

    CostModel cost_model() const { return {cost_rate, charge_entry_cost}; }
    MetricParams metric_params() const { return {rf_daily, annualization}; }

    void validate() const {
        auto fail = [](const std::string& m) { throw ValidationError("config: " + m); };
        if (universes.empty()) fail("no universes");
        if (strategies.empty()) fail("no strategies");
        if (!(cost_rate >= 0.0)) fail("cost_rate must be >= 0");
        if (signal_lag < 1) fail("signal_lag must be >= 1");
        if (!(annualization > 0.0)) fail("annualization must be > 0");
        if (news.agg_window < 1 || news.smooth_window < 1) fail("news windows must be >= 1");
        if (news.z.min_obs < 2) fail("news z_min_obs must be >= 2");
        if (!news.z.is_expanding() && news.z.min_obs > news.z.window) fail("news z_min_obs > z_window");
        if (stress.z.min_obs < 2 || stress.z.window < stress.z.min_obs) {
            fail("stress needs z_window >= z_min_obs >= 2");
        }
        if (!(vix_quantile > 0.0 && vix_quantile < 1.0)) fail("vix quantile must lie in (0,1)");
        if (vix_min_obs < 2) fail("vix min_obs must be >= 2");
        if (selector.window < 2) fail("selector window must be >= 2");
        if (headline_budget < 1) fail("headline_budget must be >= 1");
        if (world_markets.size() < 2) fail("world_markets needs at least 2 markets");
    }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    if (!obj.is_object()) throw ValidationError("config: '" + where + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw ValidationError("config: unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config: bad value for '" + (where.empty() ? std::string(key) : where + "." + key) + "'");
    }
}

inline void read_window(const json& obj, const char* key, RollingParams& p, const std::string& where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "expanding")) {
        p.window = RollingParams::kExpanding;
    } else if (v.is_number_integer() && v.get<long long>() >= 1) {
        p.window = static_cast<std::size_t>(v.get<long long>());
    } else {
        throw ValidationError("config: '" + where + "." + key + "' must be a positive integer or \"expanding\"");
    }
}

inline json window_json(const RollingParams& p) {
    return p.is_expanding() ? json("expanding") : json(p.window);
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::read;
    ExperimentConfig c;
    if (j.is_null()) return c;
    detail::reject_unknown(j,
                           {"universes", "strategies", "cost_rate", "charge_entry_cost", "signal_lag",
                            "annualization", "risk_free_daily", "news", "stress", "vix", "selector",
                            "ingestion", "world_markets", "start_dates", "files", "data_dir",
                            "output_dir"},
                           "");
    if (j.contains("universes")) {
        std::vector<std::string> names;
        read(j, "universes", names, "");
        c.universes.clear();
        for (const auto& n : names) {
            auto u = parse_universe(n);
            if (!u) throw ValidationError("config: unknown universe '" + n + "'");
            c.universes.push_back(*u);
        }
    }
    if (j.contains("strategies")) {
        std::vector<std::string> names;
        read(j, "strategies", names, "");
        c.strategies.clear();
        for (const auto& n : names) {
            auto s = parse_strategy(n);
            if (!s) throw ValidationError("config: unknown strategy '" + n + "'");
            c.strategies.push_back(*s);
        }
    }
    read(j, "cost_rate", c.cost_rate, "");
    read(j, "charge_entry_cost", c.charge_entry_cost, "");
    read(j, "signal_lag", c.signal_lag, "");
    read(j, "annualization", c.annualization, "");
    read(j, "risk_free_daily", c.rf_daily, "");
    if (j.contains("news")) {
        const auto& n = j.at("news");
        detail::reject_unknown(n, {"agg_window", "smooth_window", "z_window", "z_min_obs", "threshold"}, "news");
        read(n, "agg_window", c.news.agg_window, "news");
        read(n, "smooth_window", c.news.smooth_window, "news");
        detail::read_window(n, "z_window", c.news.z, "news");
        read(n, "z_min_obs", c.news.z.min_obs, "news");
        read(n, "threshold", c.news.threshold, "news");
    }
    if (j.contains("stress")) {
        const auto& s = j.at("stress");
        detail::reject_unknown(s, {"z_window", "z_min_obs", "si_mode", "si_threshold"}, "stress");
        detail::read_window(s, "z_window", c.stress.z, "stress");
        read(s, "z_min_obs", c.stress.z.min_obs, "stress");
        std::string mode = "proportional";
        read(s, "si_mode", mode, "stress");
        if (mode == "proportional") {
            c.si_mode = AppetiteMode::proportional;
        } else if (mode == "threshold") {
            c.si_mode = AppetiteMode::threshold;
        } else {
            throw ValidationError("config: stress.si_mode must be proportional or threshold");
        }
        read(s, "si_threshold", c.si_threshold, "stress");
    }
    if (j.contains("vix")) {
        const auto& v = j.at("vix");
        detail::reject_unknown(v, {"factor_id", "quantile", "min_obs"}, "vix");
        read(v, "factor_id", c.vix_factor, "vix");
        read(v, "quantile", c.vix_quantile, "vix");
        read(v, "min_obs", c.vix_min_obs, "vix");
    }
    if (j.contains("selector")) {
        const auto& s = j.at("selector");
        detail::reject_unknown(s, {"window", "mode"}, "selector");
        read(s, "window", c.selector.window, "selector");
        std::string mode = "trailing";
        read(s, "mode", mode, "selector");
        if (mode == "trailing") {
            c.selector.mode = SelectorWindow::trailing;
        } else if (mode == "calendar_month") {
            c.selector.mode = SelectorWindow::calendar_month;
        } else {
            throw ValidationError("config: selector.mode must be trailing or calendar_month");
        }
    }
    if (j.contains("ingestion")) {
        const auto& i = j.at("ingestion");
        detail::reject_unknown(i, {"ffill_limit", "headline_budget"}, "ingestion");
        read(i, "ffill_limit", c.ffill_limit, "ingestion");
        read(i, "headline_budget", c.headline_budget, "ingestion");
    }
    read(j, "world_markets", c.world_markets, "");
    if (j.contains("start_dates")) {
        std::map<std::string, std::string> raw;
        read(j, "start_dates", raw, "");
        for (const auto& [k, v] : raw) {
            auto id = parse_strategy(k);
            if (!id) throw ValidationError("config: unknown strategy '" + k + "' in start_dates");
            c.start_dates[*id] = parse_date(v);
        }
    }
    if (j.contains("files")) {
        const auto& f = j.at("files");
        detail::reject_unknown(f, {"prices", "risk", "sentiment"}, "files");
        read(f, "prices", c.files.prices, "files");
        read(f, "risk", c.files.risk, "files");
        read(f, "sentiment", c.files.sentiment, "files");
    }
    read(j, "data_dir", c.data_dir, "");
    read(j, "output_dir", c.output_dir, "");
    c.selector.rf_daily = c.rf_daily;
    c.selector.annualization = c.annualization;
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

/// Full snapshot with every default made explicit.
inline nlohmann::json to_json(const ExperimentConfig& c) {
    using nlohmann::json;
    json universes = json::array(), strategies = json::array(), starts = json::object();
    for (auto u : c.universes) universes.push_back(std::string(to_string(u)));
    for (auto s : c.strategies) strategies.push_back(std::string(to_string(s)));
    for (const auto& [id, d] : c.start_dates) starts[std::string(to_string(id))] = format_date(d);
    return json{
        {"universes", universes},
        {"strategies", strategies},
        {"cost_rate", c.cost_rate},
        {"charge_entry_cost", c.charge_entry_cost},
        {"signal_lag", c.signal_lag},
        {"annualization", c.annualization},
        {"risk_free_daily", c.rf_daily},
        {"news",
         {{"agg_window", c.news.agg_window},
          {"smooth_window", c.news.smooth_window},
          {"z_window", detail::window_json(c.news.z)},
          {"z_min_obs", c.news.z.min_obs},
          {"threshold", c.news.threshold}}},
        {"stress",
         {{"z_window", detail::window_json(c.stress.z)},
          {"z_min_obs", c.stress.z.min_obs},
          {"si_mode", c.si_mode == AppetiteMode::proportional ? "proportional" : "threshold"},
          {"si_threshold", c.si_threshold}}},
        {"vix", {{"factor_id", c.vix_factor}, {"quantile", c.vix_quantile}, {"min_obs", c.vix_min_obs}}},
        {"selector",
         {{"window", c.selector.window},
          {"mode", c.selector.mode == SelectorWindow::trailing ? "trailing" : "calendar_month"}}},
        {"ingestion", {{"ffill_limit", c.ffill_limit}, {"headline_budget", c.headline_budget}}},
        {"world_markets", c.world_markets},
        {"start_dates", starts},
        {"files", {{"prices", c.files.prices}, {"risk", c.files.risk}, {"sentiment", c.files.sentiment}}},
        {"data_dir", c.data_dir},
        {"output_dir", c.output_dir},
    };
}

}  // namespace roro
