#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace roro {

/// The six strategies, in the order used to break Sharpe ties.
enum class StrategyId { LongOnly, VIX, SI, News, SINews, DynamicSINews };

inline constexpr std::array<StrategyId, 6> kAllStrategies = {
    StrategyId::LongOnly, StrategyId::VIX,    StrategyId::SI,
    StrategyId::News,     StrategyId::SINews, StrategyId::DynamicSINews,
};

inline std::string_view to_string(StrategyId s) {
    switch (s) {
        case StrategyId::LongOnly: return "LongOnly";
        case StrategyId::VIX: return "VIX";
        case StrategyId::SI: return "SI";
        case StrategyId::News: return "News";
        case StrategyId::SINews: return "SINews";
        case StrategyId::DynamicSINews: return "DynamicSINews";
    }
    return "?";
}

/// Row label used in performance tables.
inline std::string_view display_name(StrategyId s) {
    switch (s) {
        case StrategyId::LongOnly: return "Long Only";
        case StrategyId::VIX: return "VIX";
        case StrategyId::SI: return "SI";
        case StrategyId::News: return "News";
        case StrategyId::SINews: return "SI+News";
        case StrategyId::DynamicSINews: return "Dynamic SI+News";
    }
    return "?";
}

inline std::optional<StrategyId> parse_strategy(std::string_view s) {
    for (auto id : kAllStrategies) {
        if (to_string(id) == s || display_name(id) == s) return id;
    }
    return std::nullopt;
}

enum class Universe { SP500, NASDAQ, WORLD6 };

inline constexpr std::array<Universe, 3> kAllUniverses = {Universe::SP500, Universe::NASDAQ,
                                                          Universe::WORLD6};

inline std::string_view to_string(Universe u) {
    switch (u) {
        case Universe::SP500: return "SP500";
        case Universe::NASDAQ: return "NASDAQ";
        case Universe::WORLD6: return "WORLD6";
    }
    return "?";
}

inline std::optional<Universe> parse_universe(std::string_view s) {
    for (auto u : kAllUniverses) {
        if (to_string(u) == s) return u;
    }
    return std::nullopt;
}

}  // namespace roro
