#include <algorithm>
#include <random>

#include "doctest.h"

#include "corradapt/errors.hpp"
#include "corradapt/scenario.hpp"

using namespace corradapt;

namespace {

const double table_one[6] = {186.6, 161.7, 162.0, 162.8, 162.5, 166.5};

std::vector<ScenarioScore> scores_from(const std::vector<double>& values) {
    std::vector<ScenarioScore> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioScore s;
        s.option_id = static_cast<long>(i + 1);
        s.g_total = {values[i], values[i], values[i]};
        out.push_back(s);
    }
    return out;
}

std::vector<TickValue> series(const std::vector<double>& g, Tick first = 13) {
    std::vector<TickValue> out;
    for (std::size_t i = 0; i < g.size(); ++i) out.push_back({first + static_cast<Tick>(i), g[i]});
    return out;
}

std::vector<long> ids(const Ranking& r) {
    std::vector<long> out;
    for (const auto& e : r.order) out.push_back(e.option_id);
    return out;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("ranking the tabulated integral values") {
    const auto scores = scores_from(std::vector<double>(std::begin(table_one), std::end(table_one)));
    const auto by_min = rank_options(scores, Objective::min, Normalization::per_tick);
    CHECK(by_min.order.front().option_id == 2);
    CHECK(by_min.order.front().value == 161.7);
    CHECK(ids(by_min) == std::vector<long>{2, 3, 5, 4, 6, 1});
    const auto by_max = rank_options(scores, Objective::max, Normalization::per_tick);
    CHECK(by_max.order.front().option_id == 1);
    CHECK(by_max.order.front().value == 186.6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(by_min.order[i].rank == i + 1);
}

TEST_CASE("ties fall back to ascending id") {
    const auto scores = scores_from({5, 5, 5, 5});
    CHECK(ids(rank_options(scores, Objective::min, Normalization::raw)) == std::vector<long>{1, 2, 3, 4});
    CHECK(ids(rank_options(scores, Objective::max, Normalization::raw)) == std::vector<long>{1, 2, 3, 4});
}

TEST_CASE("ranking errors") {
    CHECK_THROWS_AS(rank_options({}, Objective::min, Normalization::raw), ConfigError);
    auto dup = scores_from({1, 2});
    dup[1].option_id = 1;
    CHECK_THROWS_AS(rank_options(dup, Objective::min, Normalization::raw), ConfigError);
    CHECK_THROWS_AS(parse_objective("best"), ConfigError);
}

TEST_CASE("ranking invariance and objective duality") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.0, 500.0);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> v(6);
        for (auto& x : v) x = u(rng);
        const auto base = rank_options(scores_from(v), Objective::min, Normalization::per_cell);
        const double c = scale(rng);
        auto scaled = v;
        for (auto& x : scaled) x *= c;
        CHECK(ids(rank_options(scores_from(scaled), Objective::min, Normalization::per_cell)) == ids(base));
        auto reversed = ids(rank_options(scores_from(v), Objective::max, Normalization::per_cell));
        std::reverse(reversed.begin(), reversed.end());
        CHECK(reversed == ids(base));
    }
}

TEST_CASE("regime shapes") {
    std::vector<double> rising;
    for (int i = 0; i < 12; ++i) rising.push_back(10.0 + 5.0 * i);
    const auto up = detect_regimes(series(rising));
    REQUIRE(up.size() == 1);
    CHECK(up[0].regime == RegimeClass::non_adaptation);

    const auto flat = detect_regimes(series(std::vector<double>(12, 7.0)));
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].regime == RegimeClass::stable);
    CHECK(flat[0].from == 13);
    CHECK(flat[0].to == 24);

    std::vector<double> hump;
    for (int i = 0; i < 10; ++i) hump.push_back(10.0 + 10.0 * i);
    for (int i = 0; i < 14; ++i) hump.push_back(100.0 - 6.0 * i);
    const auto phases = detect_regimes(series(hump));
    REQUIRE(phases.size() >= 2);
    CHECK(phases.front().regime == RegimeClass::stress_growth);
    CHECK(phases.back().regime == RegimeClass::adaptation);
}

TEST_CASE("regime phases partition the series") {
    std::mt19937_64 rng(44);
    std::normal_distribution<double> z(100.0, 20.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> g(20 + rep % 30);
        for (auto& x : g) x = std::max(0.0, z(rng));
        const auto s = series(g, 5);
        const auto phases = detect_regimes(s);
        REQUIRE_FALSE(phases.empty());
        CHECK(phases.front().from == s.front().t);
        CHECK(phases.back().to == s.back().t);
        for (std::size_t i = 0; i < phases.size(); ++i) {
            CHECK(phases[i].from <= phases[i].to);
            if (i > 0) {
                CHECK(phases[i].from == phases[i - 1].to + 1);
                CHECK(phases[i].regime != phases[i - 1].regime);
            }
        }
    }
}

TEST_CASE("regime errors") {
    CHECK_THROWS_AS(detect_regimes(series({1, 2, 3, 4, 5, 6, 7})), DataError);
    auto s = series({1, 2, 3, 4, 5, 6, 7, 8});
    s[3].t = s[2].t;
    CHECK_THROWS_AS(detect_regimes(s), DataError);
}

TEST_CASE("comparison document") {
    auto scores = scores_from({3.0, 1.0, 2.0});
    const auto ranking = rank_options(scores, Objective::min, Normalization::per_tick);
    const auto doc = compare_report(scores, ranking, {});
    CHECK(doc["mode"] == "per_tick");
    CHECK(doc["objective"] == "min");
    REQUIRE(doc["options"].size() == 3);
    CHECK(doc["options"][0]["id"] == 2);
    for (const auto& entry : doc["options"]) {
        CHECK(entry["delta"].get<double>() == doctest::Approx(entry["g_total"].get<double>() - 1.0));
    }

    const auto single = scores_from({4.0});
    const auto one = compare_report(single, rank_options(single, Objective::min, Normalization::raw), {});
    CHECK(one["options"][0]["rank"] == 1);
    CHECK(one["options"][0]["delta"].is_null());

    scores[0].g_total.raw = 99.0;
    const auto by_raw = rank_options(scores, Objective::min, Normalization::raw);
    scores[0].g_total.raw = 98.0;
    CHECK_THROWS_AS(compare_report(scores, by_raw, {}), ConfigError);
}

}  // TEST_SUITE
