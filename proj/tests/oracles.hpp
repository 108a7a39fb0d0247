#pragma once

// Reference implementations used only by the tests. They work on plain
// vectors with NaN for "absent" and deliberately share no code with the
// library paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "roro/date.hpp"
#include "roro/ts_core.hpp"

namespace oracle {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::vector<double> to_nan(const roro::DailySeries& s) {
    std::vector<double> out;
    for (const auto& v : s.values()) out.push_back(v ? *v : kNaN);
    return out;
}

inline roro::TradingCalendar weekday_calendar(roro::Date first, std::size_t n) {
    std::vector<roro::Date> d;
    for (roro::Date x = first; d.size() < n; x += std::chrono::days{1}) {
        if (roro::is_weekday(x)) d.push_back(x);
    }
    return roro::TradingCalendar(std::move(d));
}

inline roro::DailySeries random_series(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0,
                                       roro::Date first = roro::make_date(2020, 1, 1)) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return roro::DailySeries::dense(weekday_calendar(first, n), v);
}

/// Trailing window [t-w+1, t]; naive re-summation over non-NaN entries.
inline std::vector<double> rolling_mean(const std::vector<double>& x, std::size_t w, std::size_t min_obs) {
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = 0; t < x.size(); ++t) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t k = 0; k < w && k <= t; ++k) {
            double v = x[t - k];
            if (!std::isnan(v)) {
                sum += v;
                ++n;
            }
        }
        if (n >= min_obs) out[t] = sum / static_cast<double>(n);
    }
    return out;
}

/// Per-window recomputation in long double; w == 0 means expanding.
inline std::vector<double> rolling_zscore(const std::vector<double>& x, std::size_t w, std::size_t min_obs) {
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (std::isnan(x[t])) continue;
        std::vector<long double> win;
        std::size_t first = (w == 0 || t + 1 < w) ? 0 : t + 1 - w;
        for (std::size_t i = first; i <= t; ++i) {
            if (!std::isnan(x[i])) win.push_back(x[i]);
        }
        if (win.size() < min_obs) continue;
        long double mean = 0;
        for (auto v : win) mean += v;
        mean /= static_cast<long double>(win.size());
        long double var = 0;
        for (auto v : win) var += (v - mean) * (v - mean);
        var /= static_cast<long double>(win.size() - 1);
        bool flat = std::all_of(win.begin(), win.end(), [&](long double v) { return v == win.front(); });
        out[t] = flat ? 0.0 : static_cast<double>((x[t] - mean) / std::sqrt(var));
    }
    return out;
}

/// Sort-a-copy percentile with linear interpolation between order statistics.
inline double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double h = (static_cast<double>(v.size()) - 1) * q;
    std::size_t lo = static_cast<std::size_t>(h);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

/// Standard normal CDF by Simpson quadrature of the density from 0.
inline double normal_cdf_quadrature(double x) {
    const int n = 20000;
    double a = 0.0, b = std::abs(x), h = (b - a) / n, s = 0.0;
    auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * phi(a + i * h);
    }
    double area = s * h / 3.0;
    return x >= 0 ? 0.5 + area : 0.5 - area;
}

/// Naive per-date recursion of the value path with entry cost.
inline std::vector<double> backtest_values(const std::vector<std::vector<double>>& w,   // [t][asset]
                                           const std::vector<std::vector<double>>& r,   // [t][asset]
                                           double b, bool charge_entry) {
    std::vector<double> s{1.0};
    for (std::size_t t = 1; t < w.size(); ++t) {
        double port = 0.0, trade = 0.0;
        for (std::size_t i = 0; i < w[t].size(); ++i) {
            port += w[t - 1][i] * r[t][i];
            trade += std::fabs(w[t][i] - w[t - 1][i]);
        }
        if (t == 1 && charge_entry) {
            for (double x : w[0]) trade += std::fabs(x);
        }
        s.push_back(s.back() * (1.0 + port - b * trade));
    }
    return s;
}

/// max over all i <= j of 1 - S_j / S_i.
inline double max_drawdown_all_pairs(const std::vector<double>& s) {
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i; j < s.size(); ++j) best = std::max(best, 1.0 - s[j] / s[i]);
    }
    return best;
}

inline double annualized_return_logsum(const std::vector<double>& s, double factor) {
    double lg = 0.0;
    for (std::size_t t = 1; t < s.size(); ++t) lg += std::log(s[t] / s[t - 1]);
    return std::exp(lg / static_cast<double>(s.size() - 1) * factor) - 1.0;
}

/// Straight-line news chain on plain vectors: trailing mean, expanding z,
/// trailing mean, strict threshold. Sums run oldest-first, so results are
/// bit-for-bit comparable.
struct NewsStages {
    std::vector<double> score, averaged, zscored, smoothed, signal;
};

inline NewsStages news_stages(const std::vector<std::array<long long, 3>>& counts, std::size_t agg,
                              std::size_t smooth, std::size_t z_min, double threshold) {
    const std::size_t n = counts.size();
    NewsStages st;
    st.score.assign(n, kNaN);
    st.averaged.assign(n, kNaN);
    st.zscored.assign(n, kNaN);
    st.smoothed.assign(n, kNaN);
    st.signal.assign(n, kNaN);
    for (std::size_t t = 0; t < n; ++t) st.score[t] = static_cast<double>(counts[t][0] - counts[t][1]);

    auto trailing = [&](const std::vector<double>& in, std::vector<double>& out, std::size_t w) {
        for (std::size_t t = 0; t < n; ++t) {
            if (t + 1 < w) continue;
            double sum = 0.0;
            bool complete = true;
            for (std::size_t i = t + 1 - w; i <= t; ++i) {
                if (std::isnan(in[i])) complete = false;
                sum += in[i];
            }
            if (complete) out[t] = sum / static_cast<double>(w);
        }
    };
    trailing(st.score, st.averaged, agg);

    for (std::size_t t = 0; t < n; ++t) {
        if (std::isnan(st.averaged[t])) continue;
        std::vector<double> hist;
        for (std::size_t i = 0; i <= t; ++i) {
            if (!std::isnan(st.averaged[i])) hist.push_back(st.averaged[i]);
        }
        if (hist.size() < z_min) continue;
        if (*std::max_element(hist.begin(), hist.end()) == *std::min_element(hist.begin(), hist.end())) {
            st.zscored[t] = 0.0;
            continue;
        }
        double sum = 0.0;
        for (double v : hist) sum += v;
        double m = sum / static_cast<double>(hist.size());
        double ss = 0.0;
        for (double v : hist) ss += (v - m) * (v - m);
        st.zscored[t] = (st.averaged[t] - m) / std::sqrt(ss / static_cast<double>(hist.size() - 1));
    }
    trailing(st.zscored, st.smoothed, smooth);
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isnan(st.smoothed[t])) st.signal[t] = st.smoothed[t] > threshold ? 1.0 : 0.0;
    }
    return st;
}

/// Elementwise equality treating NaN == NaN.
inline bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) != std::isnan(b[i])) return false;
        if (!std::isnan(a[i]) && a[i] != b[i]) return false;
    }
    return true;
}

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double sample_std(const std::vector<double>& x) {
    double m = mean(x), ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace oracle
