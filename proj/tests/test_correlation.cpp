#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"

#include "corradapt/correlation.hpp"
#include "corradapt/errors.hpp"

using namespace corradapt;

namespace {

// Panel whose window at t = k + 1 holds exactly the given rows (lag order).
TimeSeriesPanel panel_from_window(const std::vector<std::vector<double>>& lag_columns) {
    std::vector<std::vector<double>> cols;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < lag_columns.size(); ++i) {
        auto c = lag_columns[i];
        std::reverse(c.begin(), c.end());
        c.push_back(0.0);
        cols.push_back(c);
        labels.push_back("x" + std::to_string(i + 1));
    }
    return TimeSeriesPanel::from_columns(labels, 1, cols);
}

}  // namespace

TEST_SUITE("correlation") {

TEST_CASE("identical and negated columns") {
    const auto p = panel_from_window({{1, 4, 2, 8}, {1, 4, 2, 8}, {-1, -4, -2, -8}});
    const auto r = correlation_matrix(window_slice(p, 5, 4));
    CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r(1, 0) == r(0, 1));
}

TEST_CASE("x1=(1,2,3,4) against x3=(1,0,1,0)") {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{1, 0, 1, 0};
    const double expected = oracle::pearson(a, b);
    CHECK(expected == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-12));
    CHECK(pairwise_r(a, b).r == doctest::Approx(expected).epsilon(1e-12));

    const auto p = panel_from_window({a, b});
    const auto r = correlation_matrix(window_slice(p, 5, 4));
    CHECK(r(0, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r(0, 1) == doctest::Approx(-0.4472).epsilon(1e-4));
}

TEST_CASE("pairwise_r basics and errors") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{3, 2, 1};
    CHECK(pairwise_r(a, a).r == doctest::Approx(1.0));
    CHECK(pairwise_r(a, b).r == doctest::Approx(-1.0));
    const std::vector<double> c{7, 7, 7};
    CHECK(pairwise_r(a, c).r == 0.0);
    CHECK(pairwise_r(a, c).degenerate);
    const std::vector<double> shorter{1, 2};
    CHECK_THROWS_AS(pairwise_r(a, std::vector<double>{1, 2, 3, 4}), DataError);
    CHECK_THROWS_AS(pairwise_r(shorter, shorter), DataError);
}

TEST_CASE("degenerate columns give zero rows and columns") {
    const auto p = panel_from_window({{1, 2, 4, 3}, {5, 5, 5, 5}, {2, 1, 0, 3}});
    const auto r = correlation_matrix(window_slice(p, 5, 4));
    CHECK(r.degenerate()[1]);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(r(1, j) == 0.0);
        CHECK(r(j, 1) == 0.0);
    }
    CHECK(r(0, 0) == 1.0);
    CHECK(r(2, 2) == 1.0);
}

TEST_CASE("oracle equivalence on random panels") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> nd(2, 8);
    std::uniform_int_distribution<int> kd(3, 12);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = static_cast<std::size_t>(nd(rng));
        const std::size_t k = static_cast<std::size_t>(kd(rng));
        const auto p = oracle::random_panel(rng, n, k + 1);
        const Tick t = static_cast<Tick>(k) + 1;
        const auto r = correlation_matrix(window_slice(p, t, k));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double ref = i == j ? 1.0 : oracle::pearson(oracle::lagged(p, i, t, k), oracle::lagged(p, j, t, k));
                CHECK(std::abs(r(i, j) - ref) <= 1e-10);
            }
        }
    }
}

TEST_CASE("affine invariance and sign flip") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        const auto p = oracle::random_panel(rng, 5, 11);
        const auto base = correlation_matrix(window_slice(p, 11, 10));
        for (double a : {3.5, -0.25}) {
            std::vector<std::vector<double>> cols;
            for (std::size_t i = 0; i < 5; ++i) {
                std::vector<double> c(p.column(i).begin(), p.column(i).end());
                if (i == 2) {
                    for (auto& v : c) v = a * v + 17.0;
                }
                cols.push_back(c);
            }
            const auto q = TimeSeriesPanel::from_columns(p.labels(), 1, cols);
            const auto r = correlation_matrix(window_slice(q, 11, 10));
            for (std::size_t i = 0; i < 5; ++i) {
                for (std::size_t j = 0; j < 5; ++j) {
                    const bool flips = a < 0 && (i == 2) != (j == 2);
                    CHECK(std::abs(r(i, j) - (flips ? -base(i, j) : base(i, j))) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("permutation equivariance") {
    std::mt19937_64 rng(8);
    const auto p = oracle::random_panel(rng, 6, 13);
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<double>> cols;
    std::vector<std::string> labels;
    for (std::size_t i : perm) {
        cols.emplace_back(p.column(i).begin(), p.column(i).end());
        labels.push_back(p.labels()[i]);
    }
    const auto q = TimeSeriesPanel::from_columns(labels, 1, cols);
    const auto rp = correlation_matrix(window_slice(p, 13, 12));
    const auto rq = correlation_matrix(window_slice(q, 13, 12));
    for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = 0; b < 6; ++b) CHECK(rq(a, b) == rp(perm[a], perm[b]));
    }
}

TEST_CASE("near-collinear inputs stay within [-1, 1]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> tiny(-1e-13, 1e-13);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a(8);
        for (auto& v : a) v = 1e8 + tiny(rng) * 1e8;
        a[rep % 8] += 1.0;
        std::vector<double> b = a;
        for (auto& v : b) v = v * 3.0 + tiny(rng);
        std::vector<double> c = a;
        for (auto& v : c) v = -v;
        const auto p = panel_from_window({a, b, c});
        const auto r = correlation_matrix(window_slice(p, 9, 8));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(r(i, j)) <= 1.0);
        }
    }
}

TEST_CASE("matrix CSV dump") {
    const auto p = panel_from_window({{1, 2, 3}, {3, 2, 1}});
    const auto r = correlation_matrix(window_slice(p, 4, 3));
    std::ostringstream out;
    write_matrix_csv(out, r, {"x1", "x2"});
    CHECK(out.str() == "x1,x2\n1,-1\n-1,1\n");
    CHECK_THROWS_AS(write_matrix_csv(out, r, {"x1"}), DataError);
}

}  // TEST_SUITE
