#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "roro/errors.hpp"
#include "roro/ingestion.hpp"
#include "roro/ts_core.hpp"

namespace roro {

enum class SignalKind {
    binary,    // {0, 1}
    unit_open, // (0, 1)
    unit,      // [0, 1]
};

/// A DailySeries whose defined values satisfy the range of its kind.
class SignalSeries {
public:
    SignalSeries() = default;

    SignalSeries(DailySeries series, SignalKind kind) : series_(std::move(series)), kind_(kind) {
        for (std::size_t i = 0; i < series_.size(); ++i) {
            if (!series_[i]) continue;
            double v = *series_[i];
            bool ok = false;
            switch (kind_) {
                case SignalKind::binary: ok = v == 0.0 || v == 1.0; break;
                case SignalKind::unit_open: ok = v > 0.0 && v < 1.0; break;
                case SignalKind::unit: ok = v >= 0.0 && v <= 1.0; break;
            }
            if (!ok) {
                throw ComputationError("signal '" + series_.name() + "' out of range at " +
                                       format_date(series_.date(i)) + ": " + std::to_string(v));
            }
        }
    }

    const DailySeries& series() const noexcept { return series_; }
    SignalKind kind() const noexcept { return kind_; }
    const TradingCalendar& calendar() const noexcept { return series_.calendar(); }
    std::size_t size() const noexcept { return series_.size(); }
    const DailySeries::value_type& operator[](std::size_t i) const { return series_[i]; }

    bool operator==(const SignalSeries&) const = default;

private:
    DailySeries series_;
    SignalKind kind_ = SignalKind::unit;
};

// ---------------------------------------------------------------------------
// News sentiment
// ---------------------------------------------------------------------------

inline long long daily_sentiment_score(const SentimentDay& day) {
    return day.n_pos - day.n_neg;
}

struct NewsSignalParams {
    std::size_t agg_window = 10;
    std::size_t smooth_window = 10;
    RollingParams z = RollingParams::expanding(60);
    double threshold = 0.0;
};

struct NewsSignalStages {
    DailySeries score;     // n_pos - n_neg
    DailySeries averaged;  // trailing agg_window mean
    DailySeries zscored;
    DailySeries smoothed;  // trailing smooth_window mean of z
    SignalSeries signal;   // 1 if smoothed > threshold
};

inline NewsSignalStages news_signal_stages(const std::vector<SentimentDay>& days,
                                           const NewsSignalParams& p) {
    if (p.agg_window == 0 || p.smooth_window == 0) {
        throw std::invalid_argument("news signal windows must be >= 1");
    }
    std::vector<Date> dates;
    std::vector<double> scores;
    for (const auto& d : days) {
        dates.push_back(d.date);
        scores.push_back(static_cast<double>(daily_sentiment_score(d)));
    }
    NewsSignalStages st;
    st.score = DailySeries::dense(TradingCalendar(std::move(dates)), scores, "news_score");
    st.averaged = rolling_mean(st.score, RollingParams::trailing(p.agg_window, p.agg_window));
    st.zscored = rolling_zscore(st.averaged, p.z);
    st.smoothed = rolling_mean(st.zscored, RollingParams::trailing(p.smooth_window, p.smooth_window));
    std::vector<DailySeries::value_type> bin(st.smoothed.size());
    for (std::size_t i = 0; i < bin.size(); ++i) {
        if (st.smoothed[i]) bin[i] = *st.smoothed[i] > p.threshold ? 1.0 : 0.0;
    }
    st.signal = SignalSeries(DailySeries(st.score.calendar(), std::move(bin), "news"),
                             SignalKind::binary);
    return st;
}

/// Binary news indicator on the sentiment calendar; absent during warm-up.
inline SignalSeries news_signal_pipeline(const std::vector<SentimentDay>& days,
                                         const NewsSignalParams& p = {}) {
    return news_signal_stages(days, p).signal;
}

// ---------------------------------------------------------------------------
// Stress index
// ---------------------------------------------------------------------------

struct StressIndexParams {
    RollingParams z = RollingParams::trailing(500, 250);
};

struct StressIndexResult {
    std::vector<DailySeries> factor_z;             // parallel to table.factors
    std::vector<RiskCategory> categories;
    std::vector<DailySeries> category_z;           // parallel to categories
    DailySeries grand_mean;
    SignalSeries index;
    std::vector<Date> incomplete_dates;            // some, not all, categories defined
    std::vector<std::string> warnings;
};

/// Per-factor z-score, mean within each category, mean across categories,
/// then the standard normal CDF. A date where any category lacks a defined
/// z-score is absent; partially covered dates are reported.
inline StressIndexResult stress_index_stages(const RiskFactorTable& risks,
                                             const StressIndexParams& p = {}) {
    p.z.validate();
    if (p.z.min_obs < 2) throw std::invalid_argument("stress z-score needs min_obs >= 2");
    if (risks.factors.empty()) throw ValidationError("stress index: no risk factors");
    const auto& cal = risks.calendar;

    StressIndexResult r;
    for (const auto& f : risks.factors) r.factor_z.push_back(rolling_zscore(f.values, p.z));
    r.categories = risks.categories();

    for (auto cat : r.categories) {
        std::vector<DailySeries::value_type> vals(cal.size());
        for (std::size_t t = 0; t < cal.size(); ++t) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t k = 0; k < risks.factors.size(); ++k) {
                if (risks.factors[k].category != cat || !r.factor_z[k][t]) continue;
                sum += *r.factor_z[k][t];
                ++n;
            }
            if (n > 0) vals[t] = sum / static_cast<double>(n);
        }
        r.category_z.emplace_back(cal, std::move(vals), std::string(to_string(cat)));
    }

    std::vector<DailySeries::value_type> grand(cal.size()), index(cal.size());
    for (std::size_t t = 0; t < cal.size(); ++t) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& c : r.category_z) {
            if (!c[t]) continue;
            sum += *c[t];
            ++n;
        }
        if (n == r.category_z.size()) {
            grand[t] = sum / static_cast<double>(n);
            index[t] = normal_cdf(*grand[t]);
        } else if (n > 0) {
            r.incomplete_dates.push_back(cal[t]);
        }
    }
    if (!r.incomplete_dates.empty()) {
        std::string msg = "stress index absent on " + std::to_string(r.incomplete_dates.size()) +
                          " dates with incomplete category coverage:";
        for (Date d : r.incomplete_dates) msg += " " + format_date(d);
        r.warnings.push_back(std::move(msg));
    }
    r.grand_mean = DailySeries(cal, std::move(grand), "stress_grand_mean");
    r.index = SignalSeries(DailySeries(cal, std::move(index), "stress"), SignalKind::unit_open);
    return r;
}

inline SignalSeries stress_index_pipeline(const RiskFactorTable& risks,
                                          const StressIndexParams& p = {}) {
    return stress_index_stages(risks, p).index;
}

// ---------------------------------------------------------------------------
// VIX regime and risk appetite
// ---------------------------------------------------------------------------

/// 1 (risk-on) while VIX is at or below its expanding q-th percentile.
inline SignalSeries vix_signal(const DailySeries& vix, double q = 0.8, std::size_t min_obs = 250) {
    auto pct = expanding_percentile(vix, q, min_obs);
    std::vector<DailySeries::value_type> out(vix.size());
    for (std::size_t t = 0; t < vix.size(); ++t) {
        if (vix[t] && pct[t]) out[t] = *vix[t] <= *pct[t] ? 1.0 : 0.0;
    }
    return SignalSeries(DailySeries(vix.calendar(), std::move(out), "vix"), SignalKind::binary);
}

enum class AppetiteMode { proportional, threshold };

/// Proportional: 1 - stress. Threshold: 1 if stress < theta, else 0.
inline SignalSeries si_risk_appetite(const SignalSeries& stress,
                                     AppetiteMode mode = AppetiteMode::proportional,
                                     double theta = 0.5) {
    std::vector<DailySeries::value_type> out(stress.size());
    for (std::size_t t = 0; t < stress.size(); ++t) {
        if (!stress[t]) continue;
        double s = *stress[t];
        out[t] = mode == AppetiteMode::proportional ? 1.0 - s : (s < theta ? 1.0 : 0.0);
    }
    return SignalSeries(DailySeries(stress.calendar(), std::move(out), "si_appetite"),
                        mode == AppetiteMode::proportional ? SignalKind::unit : SignalKind::binary);
}

}  // namespace roro
