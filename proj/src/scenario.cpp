#include "corradapt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "corradapt/errors.hpp"
#include "corradapt/format.hpp"

namespace corradapt {

std::string_view to_string(Objective objective) { return objective == Objective::min ? "min" : "max"; }

Objective parse_objective(std::string_view name) {
    if (name == "min") return Objective::min;
    if (name == "max") return Objective::max;
    throw ConfigError("unknown objective '" + std::string(name) + "' (min|max)");
}

std::string_view to_string(RegimeClass c) {
    switch (c) {
        case RegimeClass::stable: return "stable";
        case RegimeClass::stress_growth: return "stress_growth";
        case RegimeClass::adaptation: return "adaptation";
        case RegimeClass::non_adaptation: return "non_adaptation";
    }
    return "stable";
}

Ranking rank_options(const std::vector<ScenarioScore>& scores, Objective objective, Normalization mode) {
    if (scores.empty()) {
        throw ConfigError("rank_options: no scores to rank");
    }
    std::set<long> ids;
    Ranking ranking;
    ranking.mode = mode;
    ranking.objective = objective;
    for (const auto& s : scores) {
        if (!ids.insert(s.option_id).second) {
            throw ConfigError("rank_options: duplicate option id " + std::to_string(s.option_id));
        }
        const double v = s.g_total[mode];
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError("rank_options: option " + std::to_string(s.option_id) + " has invalid total");
        }
        ranking.order.push_back({s.option_id, v, 0});
    }
    std::stable_sort(ranking.order.begin(), ranking.order.end(), [objective](const auto& a, const auto& b) {
        if (a.value != b.value) {
            return objective == Objective::min ? a.value < b.value : a.value > b.value;
        }
        return a.option_id < b.option_id;
    });
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
        ranking.order[i].rank = i + 1;
    }
    return ranking;
}

std::vector<RegimePhase> detect_regimes(const std::vector<TickValue>& series, const RegimeParams& params) {
    const std::size_t w = params.window;
    if (w == 0) {
        throw ConfigError("detect_regimes: window must be >= 1");
    }
    if (!(params.rel_eps >= 0.0)) {
        throw ConfigError("detect_regimes: rel_eps must be >= 0");
    }
    if (series.size() < 2 * w || series.size() < 2) {
        throw DataError("detect_regimes: series of " + std::to_string(series.size()) + " ticks is shorter than " +
                        std::to_string(std::max<std::size_t>(2 * w, 2)));
    }
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].t <= series[i - 1].t) {
            throw DataError("detect_regimes: ticks must be strictly increasing");
        }
    }

    const std::size_t n = series.size();
    // Trailing moving mean, truncated at the start.
    std::vector<double> smooth(n);
    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        window_sum += series[i].g;
        if (i >= w) window_sum -= series[i - w].g;
        smooth[i] = window_sum / static_cast<double>(std::min(i + 1, w));
    }

    std::vector<RegimeClass> cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t at = std::max<std::size_t>(i, 1);
        const double slope = smooth[at] - smooth[at - 1];
        const double band = params.rel_eps * std::abs(smooth[i]);
        if (slope > band) {
            cls[i] = RegimeClass::stress_growth;
        } else if (slope < -band) {
            cls[i] = RegimeClass::adaptation;
        } else {
            cls[i] = RegimeClass::stable;
        }
    }

    std::vector<RegimePhase> phases;
    for (std::size_t i = 0; i < n; ++i) {
        if (!phases.empty() && phases.back().regime == cls[i]) {
            phases.back().to = series[i].t;
        } else {
            phases.push_back({series[i].t, series[i].t, cls[i]});
        }
    }
    // Growth that never turns is the non-adaptation outcome.
    if (phases.back().regime == RegimeClass::stress_growth) {
        phases.back().regime = RegimeClass::non_adaptation;
    }
    return phases;
}

nlohmann::ordered_json compare_report(const std::vector<ScenarioScore>& scores, const Ranking& ranking,
                                      const std::map<long, std::vector<RegimePhase>>& regimes) {
    if (scores.empty() || ranking.order.size() != scores.size()) {
        throw ConfigError("compare_report: ranking does not cover the given scores");
    }
    std::map<long, const ScenarioScore*> by_id;
    for (const auto& s : scores) by_id[s.option_id] = &s;

    double best = 0.0;
    bool first = true;
    for (const auto& entry : ranking.order) {
        const auto it = by_id.find(entry.option_id);
        if (it == by_id.end()) {
            throw ConfigError("compare_report: ranked option " + std::to_string(entry.option_id) + " has no score");
        }
        if (it->second->g_total[ranking.mode] != entry.value) {
            throw ConfigError("compare_report: mode mismatch for option " + std::to_string(entry.option_id) +
                              " (ranking is not under mode " + std::string(to_string(ranking.mode)) + ")");
        }
        best = first ? entry.value : std::min(best, entry.value);
        first = false;
    }

    nlohmann::ordered_json doc;
    doc["mode"] = std::string(to_string(ranking.mode));
    doc["objective"] = std::string(to_string(ranking.objective));
    auto options = nlohmann::ordered_json::array();
    for (const auto& entry : ranking.order) {
        nlohmann::ordered_json item;
        item["id"] = entry.option_id;
        item["g_total"] = round_significant(entry.value);
        item["rank"] = entry.rank;
        if (ranking.order.size() > 1) {
            item["delta"] = round_significant(entry.value - best);
        } else {
            item["delta"] = nullptr;
        }
        auto phases = nlohmann::ordered_json::array();
        if (const auto r = regimes.find(entry.option_id); r != regimes.end()) {
            for (const auto& p : r->second) {
                phases.push_back({{"from", p.from}, {"to", p.to}, {"class", std::string(to_string(p.regime))}});
            }
        }
        item["regimes"] = std::move(phases);
        options.push_back(std::move(item));
    }
    doc["options"] = std::move(options);
    return doc;
}

}  // namespace corradapt
