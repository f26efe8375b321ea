#pragma once

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "corradapt/indicator.hpp"
#include "corradapt/panel.hpp"

namespace corradapt {

struct TickValue {
    Tick t = 0;
    double g = 0.0;
};

struct ScenarioScore {
    long option_id = 0;
    IntegralTotals g_total;
    std::vector<TickValue> per_tick;
};

enum class Objective { min, max };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

struct RankedOption {
    long option_id = 0;
    double value = 0.0;
    std::size_t rank = 0;  // 1-based
};

struct Ranking {
    Normalization mode = Normalization::per_tick;
    Objective objective = Objective::min;
    std::vector<RankedOption> order;  // best first
};

// Stable order by g_total[mode] under the objective, ties by ascending
// option id. Throws ConfigError on empty input.
Ranking rank_options(const std::vector<ScenarioScore>& scores, Objective objective, Normalization mode);

enum class RegimeClass { stable, stress_growth, adaptation, non_adaptation };

std::string_view to_string(RegimeClass c);

struct RegimePhase {
    Tick from = 0;
    Tick to = 0;  // inclusive
    RegimeClass regime = RegimeClass::stable;
};

struct RegimeParams {
    std::size_t window = 4;
    double rel_eps = 0.02;
};

// Classifies the smoothed slope of G(t) tick by tick and merges runs into
// phases that partition the series' tick range. A stress_growth run that
// reaches the series end becomes non_adaptation. Throws DataError when the
// series is shorter than 2 * window.
std::vector<RegimePhase> detect_regimes(const std::vector<TickValue>& series, const RegimeParams& params = {});

// Comparison document. `regimes` is keyed by option id; missing ids get an
// empty list. Throws ConfigError when the ranking does not match the scores
// under its mode.
nlohmann::ordered_json compare_report(const std::vector<ScenarioScore>& scores, const Ranking& ranking,
                                      const std::map<long, std::vector<RegimePhase>>& regimes);

}  // namespace corradapt
