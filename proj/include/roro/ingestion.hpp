#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roro/csv.hpp"
#include "roro/date.hpp"
#include "roro/errors.hpp"
#include "roro/ts_core.hpp"

namespace roro {

// ---------------------------------------------------------------------------
// Prices
// ---------------------------------------------------------------------------

/// Index levels per market id. Each market keeps its own trading calendar.
struct PriceTable {
    std::map<std::string, DailySeries> markets;

    const DailySeries& market(const std::string& id) const {
        auto it = markets.find(id);
        if (it == markets.end()) throw ValidationError("price table has no market '" + id + "'");
        return it->second;
    }

    bool operator==(const PriceTable&) const = default;
};

inline PriceTable parse_price_csv(const csv::Document& doc) {
    if (doc.header != std::vector<std::string>{"date", "market_id", "level"}) {
        throw ValidationError("price csv: expected header date,market_id,level");
    }
    std::map<std::string, std::map<Date, double>> raw;
    for (const auto& row : doc.rows) {
        Date d;
        try {
            d = parse_date(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(row.line) + ": " + e.what());
        }
        const std::string& id = row.fields[1];
        if (id.empty()) throw ValidationError("line " + std::to_string(row.line) + ": empty market_id");
        double level = csv::parse_double(row.fields[2], row.line, "level");
        if (!(level > 0.0)) {
            throw ValidationError("line " + std::to_string(row.line) + ": non-positive level for " +
                                  id);
        }
        if (!raw[id].emplace(d, level).second) {
            throw ValidationError("line " + std::to_string(row.line) + ": duplicate row for (" +
                                  row.fields[0] + ", " + id + ")");
        }
    }
    if (raw.empty()) throw ValidationError("price csv: no rows");
    PriceTable table;
    for (auto& [id, by_date] : raw) {
        std::vector<Date> dates;
        std::vector<double> levels;
        for (auto [d, v] : by_date) {
            dates.push_back(d);
            levels.push_back(v);
        }
        table.markets.emplace(id, DailySeries::dense(TradingCalendar(std::move(dates)), levels, id));
    }
    return table;
}

inline PriceTable load_price_csv(const std::string& path) {
    auto doc = csv::read_file(path);
    try {
        return parse_price_csv(doc);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void write_price_csv(const PriceTable& table, std::ostream& out) {
    csv::write_row(out, {"date", "market_id", "level"});
    // Date-major order, markets alphabetical within a date.
    std::map<Date, std::vector<std::pair<std::string, double>>> rows;
    for (const auto& [id, s] : table.markets) {
        for (std::size_t i = 0; i < s.size(); ++i) rows[s.date(i)].emplace_back(id, *s[i]);
    }
    for (const auto& [d, entries] : rows) {
        for (const auto& [id, v] : entries) {
            csv::write_row(out, {format_date(d), id, csv::format_double(v)});
        }
    }
}

// ---------------------------------------------------------------------------
// Risk factors
// ---------------------------------------------------------------------------

enum class RiskCategory {
    equities,
    emerging_bonds,
    government_bonds,
    financial_stocks,
    fx,
    commodities,
    interest_rates,
    corporate_credit,
};

inline constexpr std::array<RiskCategory, 8> kAllRiskCategories = {
    RiskCategory::equities,         RiskCategory::emerging_bonds, RiskCategory::government_bonds,
    RiskCategory::financial_stocks, RiskCategory::fx,             RiskCategory::commodities,
    RiskCategory::interest_rates,   RiskCategory::corporate_credit,
};

inline std::string_view to_string(RiskCategory c) {
    switch (c) {
        case RiskCategory::equities: return "equities";
        case RiskCategory::emerging_bonds: return "emerging_bonds";
        case RiskCategory::government_bonds: return "government_bonds";
        case RiskCategory::financial_stocks: return "financial_stocks";
        case RiskCategory::fx: return "fx";
        case RiskCategory::commodities: return "commodities";
        case RiskCategory::interest_rates: return "interest_rates";
        case RiskCategory::corporate_credit: return "corporate_credit";
    }
    return "?";
}

inline std::optional<RiskCategory> parse_risk_category(std::string_view s) {
    for (auto c : kAllRiskCategories) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

struct RiskFactor {
    std::string id;
    RiskCategory category;
    DailySeries values;  // on the table calendar; absent before first observation

    bool operator==(const RiskFactor&) const = default;
};

/// Risk prices on one union calendar, factors sorted by id.
struct RiskFactorTable {
    TradingCalendar calendar;
    std::vector<RiskFactor> factors;

    const RiskFactor& factor(const std::string& id) const {
        for (const auto& f : factors) {
            if (f.id == id) return f;
        }
        throw ValidationError("risk table has no factor '" + id + "'");
    }

    /// Categories with at least one factor, in enum order.
    std::vector<RiskCategory> categories() const {
        std::set<RiskCategory> seen;
        for (const auto& f : factors) seen.insert(f.category);
        return {seen.begin(), seen.end()};
    }

    bool operator==(const RiskFactorTable&) const = default;
};

/// Missing interior or trailing dates are forward-filled for at most
/// `ffill_limit` consecutive calendar dates; longer gaps are an error.
inline RiskFactorTable parse_risk_csv(const csv::Document& doc, std::size_t ffill_limit = 5) {
    if (doc.header != std::vector<std::string>{"date", "factor_id", "category", "value"}) {
        throw ValidationError("risk csv: expected header date,factor_id,category,value");
    }
    struct Raw {
        RiskCategory category;
        std::map<Date, double> obs;
    };
    std::map<std::string, Raw> raw;
    std::set<Date> all_dates;
    for (const auto& row : doc.rows) {
        const std::string line = "line " + std::to_string(row.line) + ": ";
        Date d;
        try {
            d = parse_date(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(line + e.what());
        }
        const std::string& id = row.fields[1];
        if (id.empty()) throw ValidationError(line + "empty factor_id");
        auto cat = parse_risk_category(row.fields[2]);
        if (!cat) throw ValidationError(line + "unknown category '" + row.fields[2] + "'");
        double v = csv::parse_double(row.fields[3], row.line, "value");
        auto [it, fresh] = raw.try_emplace(id, Raw{*cat, {}});
        if (it->second.category != *cat) {
            throw ValidationError(line + "factor '" + id + "' changes category");
        }
        if (!it->second.obs.emplace(d, v).second) {
            throw ValidationError(line + "duplicate row for (" + row.fields[0] + ", " + id + ")");
        }
        all_dates.insert(d);
    }
    if (raw.empty()) throw ValidationError("risk csv: empty category set (no rows)");

    RiskFactorTable table;
    table.calendar = TradingCalendar(std::vector<Date>(all_dates.begin(), all_dates.end()));
    const auto& cal = table.calendar;
    for (auto& [id, r] : raw) {
        std::vector<DailySeries::value_type> vals(cal.size());
        std::optional<double> last;
        std::size_t gap = 0;
        for (std::size_t i = 0; i < cal.size(); ++i) {
            auto it = r.obs.find(cal[i]);
            if (it != r.obs.end()) {
                last = it->second;
                gap = 0;
                vals[i] = last;
            } else if (last) {
                if (++gap > ffill_limit) {
                    throw ValidationError("risk factor '" + id + "': gap longer than " +
                                          std::to_string(ffill_limit) + " dates at " +
                                          format_date(cal[i]));
                }
                vals[i] = last;
            }
        }
        table.factors.push_back({id, r.category, DailySeries(cal, std::move(vals), id)});
    }
    return table;
}

inline RiskFactorTable load_risk_csv(const std::string& path, std::size_t ffill_limit = 5) {
    auto doc = csv::read_file(path);
    try {
        return parse_risk_csv(doc, ffill_limit);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void write_risk_csv(const RiskFactorTable& table, std::ostream& out) {
    csv::write_row(out, {"date", "factor_id", "category", "value"});
    for (std::size_t i = 0; i < table.calendar.size(); ++i) {
        for (const auto& f : table.factors) {
            if (!f.values[i]) continue;
            csv::write_row(out, {format_date(table.calendar[i]), f.id,
                                 std::string(to_string(f.category)),
                                 csv::format_double(*f.values[i])});
        }
    }
}

// ---------------------------------------------------------------------------
// Sentiment
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultHeadlineBudget = 15;

struct SentimentDay {
    Date date;
    long long n_pos = 0;
    long long n_neg = 0;
    long long n_neutral = 0;

    bool operator==(const SentimentDay&) const = default;
};

enum class Label { positive, negative, indecisive };

inline std::string_view to_string(Label l) {
    switch (l) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::indecisive: return "indecisive";
    }
    return "?";
}

inline std::optional<Label> parse_label(std::string_view s) {
    if (s == "positive") return Label::positive;
    if (s == "negative") return Label::negative;
    if (s == "indecisive") return Label::indecisive;
    return std::nullopt;
}

struct HeadlineRecord {
    Date date;
    std::string text;
    std::optional<Label> label;

    bool operator==(const HeadlineRecord&) const = default;
};

/// Seam for the headline tone classifier. score() receives one date's
/// headlines and returns the same records, in order, with labels filled.
/// Throwing marks the whole date as failed.
class HeadlineScorer {
public:
    virtual ~HeadlineScorer() = default;
    virtual std::vector<HeadlineRecord> score(std::span<const HeadlineRecord> headlines) const = 0;
};

/// Deterministic keyword scorer: (#positive words - #negative words) decides
/// the label, 0 is indecisive. Words match whole lowercase tokens.
class LexiconScorer : public HeadlineScorer {
public:
    static constexpr std::array<std::string_view, 24> kPositiveWords = {
        "rally",  "rallies", "gain",    "gains",   "surge",   "surges",   "rise",   "rises",
        "strong", "record",  "beat",    "beats",   "growth",  "optimism", "rebound", "rebounds",
        "upgrade", "boost",  "boosts",  "soar",    "soars",   "jump",     "jumps",  "recovery",
    };
    static constexpr std::array<std::string_view, 24> kNegativeWords = {
        "fall",   "falls",    "drop",    "drops",     "plunge",  "plunges",  "slump",  "slumps",
        "weak",   "fear",     "fears",   "loss",      "losses",  "crisis",   "downgrade", "selloff",
        "recession", "decline", "declines", "tumble", "tumbles", "crash",    "concern", "concerns",
    };

    static Label classify(std::string_view text) {
        int score = 0;
        std::string token;
        auto flush = [&] {
            if (token.empty()) return;
            if (std::find(kPositiveWords.begin(), kPositiveWords.end(), token) != kPositiveWords.end()) {
                ++score;
            } else if (std::find(kNegativeWords.begin(), kNegativeWords.end(), token) !=
                       kNegativeWords.end()) {
                --score;
            }
            token.clear();
        };
        for (char c : text) {
            auto uc = static_cast<unsigned char>(c);
            if (std::isalpha(uc)) {
                token.push_back(static_cast<char>(std::tolower(uc)));
            } else {
                flush();
            }
        }
        flush();
        if (score > 0) return Label::positive;
        if (score < 0) return Label::negative;
        return Label::indecisive;
    }

    std::vector<HeadlineRecord> score(std::span<const HeadlineRecord> headlines) const override {
        std::vector<HeadlineRecord> out(headlines.begin(), headlines.end());
        for (auto& r : out) r.label = classify(r.text);
        return out;
    }
};

struct HeadlineBatch {
    Date date;
    std::vector<HeadlineRecord> records;
};

struct ScoredHeadlines {
    std::vector<HeadlineRecord> records;  // every record labeled, date order
    std::vector<Date> excluded_dates;
    std::vector<std::string> warnings;
};

/// Labels every batch through the scorer. Pre-existing labels are kept.
/// An empty batch or a scorer failure excludes that date with a warning;
/// nothing is zero-filled.
inline ScoredHeadlines score_headlines(const HeadlineScorer& scorer,
                                       const std::vector<HeadlineBatch>& batches) {
    ScoredHeadlines out;
    for (const auto& batch : batches) {
        const std::string day = format_date(batch.date);
        if (batch.records.empty()) {
            out.excluded_dates.push_back(batch.date);
            out.warnings.push_back(day + ": no headlines, date excluded");
            continue;
        }
        std::vector<HeadlineRecord> scored;
        try {
            scored = scorer.score(batch.records);
            if (scored.size() != batch.records.size()) {
                throw ComputationError("scorer returned " + std::to_string(scored.size()) +
                                       " records for " + std::to_string(batch.records.size()));
            }
            for (std::size_t i = 0; i < scored.size(); ++i) {
                if (batch.records[i].label) scored[i].label = batch.records[i].label;
                if (!scored[i].label) throw ComputationError("scorer left a record unlabeled");
                scored[i].date = batch.date;
                scored[i].text = batch.records[i].text;
            }
        } catch (const std::exception& e) {
            out.excluded_dates.push_back(batch.date);
            out.warnings.push_back(day + ": scorer failed (" + e.what() + "), date excluded");
            continue;
        }
        out.records.insert(out.records.end(), scored.begin(), scored.end());
    }
    return out;
}

inline std::vector<HeadlineBatch> group_by_date(const std::vector<HeadlineRecord>& records) {
    std::map<Date, std::vector<HeadlineRecord>> by_date;
    for (const auto& r : records) by_date[r.date].push_back(r);
    std::vector<HeadlineBatch> out;
    for (auto& [d, rs] : by_date) out.push_back({d, std::move(rs)});
    return out;
}

inline ScoredHeadlines score_headlines(const HeadlineScorer& scorer,
                                       const std::vector<HeadlineRecord>& records) {
    return score_headlines(scorer, group_by_date(records));
}

/// Per-date label counts. Every record must carry a label.
inline std::vector<SentimentDay> reduce_to_counts(const std::vector<HeadlineRecord>& records) {
    std::map<Date, SentimentDay> days;
    for (const auto& r : records) {
        if (!r.label) {
            throw ValidationError("unlabeled headline on " + format_date(r.date));
        }
        auto& day = days[r.date];
        day.date = r.date;
        switch (*r.label) {
            case Label::positive: ++day.n_pos; break;
            case Label::negative: ++day.n_neg; break;
            case Label::indecisive: ++day.n_neutral; break;
        }
    }
    std::vector<SentimentDay> out;
    for (auto& [d, day] : days) out.push_back(day);
    return out;
}

inline std::vector<HeadlineRecord> parse_headlines_csv(const csv::Document& doc,
                                                       std::size_t budget = kDefaultHeadlineBudget) {
    if (doc.header != std::vector<std::string>{"date", "headline_text", "label"}) {
        throw ValidationError("headline csv: expected header date,headline_text,label");
    }
    std::vector<HeadlineRecord> out;
    std::map<Date, std::size_t> per_day;
    for (const auto& row : doc.rows) {
        const std::string line = "line " + std::to_string(row.line) + ": ";
        HeadlineRecord r;
        try {
            r.date = parse_date(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(line + e.what());
        }
        r.text = row.fields[1];
        if (!row.fields[2].empty()) {
            r.label = parse_label(row.fields[2]);
            if (!r.label) throw ValidationError(line + "unknown label '" + row.fields[2] + "'");
        }
        if (++per_day[r.date] > budget) {
            throw ValidationError(line + "more than " + std::to_string(budget) +
                                  " headlines on " + row.fields[0]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<HeadlineRecord> load_headlines_csv(const std::string& path,
                                                      std::size_t budget = kDefaultHeadlineBudget) {
    auto doc = csv::read_file(path);
    try {
        return parse_headlines_csv(doc, budget);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline std::vector<SentimentDay> parse_sentiment_counts(const csv::Document& doc,
                                                        std::size_t budget = kDefaultHeadlineBudget) {
    std::map<Date, SentimentDay> days;
    for (const auto& row : doc.rows) {
        const std::string line = "line " + std::to_string(row.line) + ": ";
        SentimentDay day;
        try {
            day.date = parse_date(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(line + e.what());
        }
        day.n_pos = csv::parse_int(row.fields[1], row.line, "n_pos");
        day.n_neg = csv::parse_int(row.fields[2], row.line, "n_neg");
        day.n_neutral = csv::parse_int(row.fields[3], row.line, "n_neutral");
        if (day.n_pos < 0 || day.n_neg < 0 || day.n_neutral < 0) {
            throw ValidationError(line + "negative count");
        }
        long long total = day.n_pos + day.n_neg + day.n_neutral;
        if (total == 0) throw ValidationError(line + "all counts zero");
        if (static_cast<std::size_t>(total) > budget) {
            throw ValidationError(line + "counts exceed headline budget " + std::to_string(budget));
        }
        if (!days.emplace(day.date, day).second) {
            throw ValidationError(line + "duplicate date " + row.fields[0]);
        }
    }
    std::vector<SentimentDay> out;
    for (auto& [d, day] : days) out.push_back(day);
    return out;
}

struct SentimentLoad {
    std::vector<SentimentDay> days;
    std::vector<std::string> warnings;
};

/// Accepts either `date,n_pos,n_neg,n_neutral` or `date,headline_text,label`,
/// picked by header. Unlabeled headlines go through the scorer.
inline SentimentLoad parse_sentiment_csv(const csv::Document& doc, const HeadlineScorer& scorer,
                                         std::size_t budget = kDefaultHeadlineBudget) {
    if (doc.header == std::vector<std::string>{"date", "n_pos", "n_neg", "n_neutral"}) {
        return {parse_sentiment_counts(doc, budget), {}};
    }
    if (doc.header == std::vector<std::string>{"date", "headline_text", "label"}) {
        auto scored = score_headlines(scorer, parse_headlines_csv(doc, budget));
        return {reduce_to_counts(scored.records), std::move(scored.warnings)};
    }
    throw ValidationError(
        "sentiment csv: header must be date,n_pos,n_neg,n_neutral or date,headline_text,label");
}

inline SentimentLoad load_sentiment_csv(const std::string& path, const HeadlineScorer& scorer,
                                        std::size_t budget = kDefaultHeadlineBudget) {
    auto doc = csv::read_file(path);
    try {
        return parse_sentiment_csv(doc, scorer, budget);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void write_sentiment_csv(const std::vector<SentimentDay>& days, std::ostream& out) {
    csv::write_row(out, {"date", "n_pos", "n_neg", "n_neutral"});
    for (const auto& d : days) {
        csv::write_row(out, {format_date(d.date), std::to_string(d.n_pos), std::to_string(d.n_neg),
                             std::to_string(d.n_neutral)});
    }
}

inline void write_headlines_csv(const std::vector<HeadlineRecord>& records, std::ostream& out) {
    csv::write_row(out, {"date", "headline_text", "label"});
    for (const auto& r : records) {
        csv::write_row(out, {format_date(r.date), r.text,
                             r.label ? std::string(to_string(*r.label)) : std::string{}});
    }
}

}  // namespace roro
