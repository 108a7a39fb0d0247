#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "roro/csv.hpp"
#include "roro/date.hpp"
#include "roro/errors.hpp"
#include "roro/ingestion.hpp"

namespace roro {

/// Synthetic market, risk and headline data driven by one latent stress
/// process. Output depends only on the parameters, never on the platform's
/// distribution implementations.
struct FixtureParams {
    std::uint64_t seed = 20240101;
    std::size_t n_days = 2500;
    Date first_day = make_date(2014, 1, 1);
    std::vector<std::string> markets = {"SP500", "NASDAQ", "NIKKEI", "EUROSTOXX", "EM", "FTSE"};
    std::size_t factors_per_category = 2;
    double holiday_rate = 0.01;  // per market and date
    double gap_rate = 0.004;     // single missing risk observation
    std::size_t headlines_per_day = 15;
};

struct FixtureFiles {
    std::string prices;
    std::string risk;
    std::string sentiment;  // per-headline schema, labels left empty
};

namespace detail {

class FixtureRng {
public:
    explicit FixtureRng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586;
        spare_ = r * std::sin(two_pi * u2);
        return r * std::cos(two_pi * u2);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

private:
    std::mt19937_64 eng_;
    std::optional<double> spare_;
};

inline constexpr std::array<const char*, 8> kSubjects = {
    "Stocks", "Treasuries", "Tech shares", "European equities",
    "Oil", "The dollar", "Bank shares", "Emerging markets",
};
inline constexpr std::array<const char*, 6> kPositivePhrases = {
    "rally on strong earnings", "surge as optimism grows", "rebound after upgrade",
    "jump, investors cheer growth", "gain on recovery hopes", "soar to record",
};
inline constexpr std::array<const char*, 6> kNegativePhrases = {
    "fall as recession fears mount", "slump on weak data", "tumble in selloff",
    "drop, concerns over crisis", "decline on downgrade", "plunge amid losses",
};
inline constexpr std::array<const char*, 6> kNeutralPhrases = {
    "hold steady ahead of data", "trade mixed, traders await minutes", "little changed",
    "flat before central bank meeting", "end session unchanged", "move sideways on light volume",
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

inline FixtureFiles generate_fixtures(const FixtureParams& p = {}) {
    if (p.n_days < 10) throw std::invalid_argument("fixtures need at least 10 days");
    detail::FixtureRng rng(p.seed);

    std::vector<Date> days;
    for (Date d = p.first_day; days.size() < p.n_days; d += std::chrono::days{1}) {
        if (is_weekday(d)) days.push_back(d);
    }
    const std::size_t n = days.size();

    // Latent stress with occasional crisis jumps, and a news mood that leads returns.
    std::vector<double> stress(n), mood(n);
    double x = 0.0, m = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        x = 0.985 * x + 0.17 * rng.normal();
        if (rng.uniform() < 0.003) x += 2.0;
        m = 0.95 * m + 0.3 * rng.normal();
        stress[t] = x;
        mood[t] = m;
    }

    FixtureFiles out;
    {
        std::ostringstream os;
        csv::write_row(os, {"date", "market_id", "level"});
        std::vector<double> level(p.markets.size(), 1000.0);
        std::vector<std::vector<bool>> open(p.markets.size(), std::vector<bool>(n, true));
        for (std::size_t k = 0; k < p.markets.size(); ++k) {
            level[k] = 1000.0 * (1.0 + static_cast<double>(k));
            for (std::size_t t = 1; t < n; ++t) open[k][t] = rng.uniform() >= p.holiday_rate;
        }
        for (std::size_t t = 0; t < n; ++t) {
            double common = rng.normal();
            double prior = t > 0 ? stress[t - 1] : 0.0;
            for (std::size_t k = 0; k < p.markets.size(); ++k) {
                double vol = 0.008 * std::exp(0.3 * prior);
                double r = 0.0004 - 0.0008 * prior + 0.0003 * (t > 0 ? mood[t - 1] : 0.0) +
                           vol * (0.75 * common + 0.66 * rng.normal());
                level[k] *= 1.0 + std::clamp(r, -0.2, 0.2);
                if (open[k][t]) {
                    csv::write_row(os, {format_date(days[t]), p.markets[k], csv::format_double(level[k])});
                }
            }
        }
        out.prices = os.str();
    }
    {
        std::ostringstream os;
        csv::write_row(os, {"date", "factor_id", "category", "value"});
        struct Factor {
            std::string id;
            RiskCategory cat;
            double base, loading, noise_level;
            double noise = 0.0;
            bool gaps;
        };
        std::vector<Factor> factors;
        for (auto cat : kAllRiskCategories) {
            for (std::size_t j = 0; j < p.factors_per_category; ++j) {
                factors.push_back({std::string(to_string(cat)) + "_" + std::to_string(j + 1), cat,
                                   50.0 + 10.0 * static_cast<double>(j), 5.0 + rng.uniform() * 5.0,
                                   2.0 + rng.uniform() * 3.0, 0.0, true});
            }
        }
        factors.push_back({"VIX", RiskCategory::equities, 17.0, 5.5, 2.0, 0.0, false});
        for (std::size_t t = 0; t < n; ++t) {
            for (auto& f : factors) {
                f.noise = 0.9 * f.noise + 0.3 * rng.normal();
                double v = f.base + f.loading * stress[t] + f.noise_level * f.noise;
                if (f.id == "VIX") v = std::max(v, 9.0);
                bool skip = f.gaps && t > 0 && t + 1 < n && rng.uniform() < p.gap_rate;
                if (!skip) {
                    csv::write_row(os, {format_date(days[t]), f.id, std::string(to_string(f.cat)),
                                        csv::format_double(v)});
                }
            }
        }
        out.risk = os.str();
    }
    {
        std::ostringstream os;
        csv::write_row(os, {"date", "headline_text", "label"});
        for (std::size_t t = 0; t < n; ++t) {
            double tone = -0.9 * stress[t] + 1.2 * mood[t];
            double p_pos = 0.45 * detail::logistic(tone);
            double p_neg = 0.45 * detail::logistic(-tone);
            std::size_t count = p.headlines_per_day - (rng.uniform() < 0.1 ? 1 : 0);
            for (std::size_t h = 0; h < count; ++h) {
                double u = rng.uniform();
                const char* subject = detail::kSubjects[rng.index(detail::kSubjects.size())];
                const char* phrase = u < p_pos ? detail::kPositivePhrases[rng.index(6)]
                                     : u < p_pos + p_neg ? detail::kNegativePhrases[rng.index(6)]
                                                         : detail::kNeutralPhrases[rng.index(6)];
                csv::write_row(os, {format_date(days[t]), std::string(subject) + " " + phrase, ""});
            }
        }
        out.sentiment = os.str();
    }
    return out;
}

inline void write_fixtures(const std::string& dir, const FixtureParams& p = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto files = generate_fixtures(p);
    auto put = [&](const char* name, const std::string& content) {
        std::ofstream os(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
        if (!os) throw ComputationError("cannot write fixture '" + std::string(name) + "'");
        os << content;
    };
    put("prices.csv", files.prices);
    put("risk.csv", files.risk);
    put("sentiment.csv", files.sentiment);
}

}  // namespace roro
