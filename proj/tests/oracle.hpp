#pragma once

// Reference computations written independently of the library: long double
// accumulation, textbook formulas, no shared helpers.

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "corradapt/panel.hpp"

namespace oracle {

inline long double mean(const std::vector<double>& x) {
    long double s = 0;
    for (double v : x) s += v;
    return s / static_cast<long double>(x.size());
}

// Sample standard deviation with the k-1 divisor.
inline long double sample_sd(const std::vector<double>& x) {
    const long double m = mean(x);
    long double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<long double>(x.size() - 1));
}

// Pearson r from the covariance and the two standard deviations; 0 when
// either input is constant.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const long double ma = mean(a);
    const long double mb = mean(b);
    long double cov = 0;
    for (std::size_t l = 0; l < a.size(); ++l) cov += (a[l] - ma) * (b[l] - mb);
    cov /= static_cast<long double>(a.size() - 1);
    const long double sa = sample_sd(a);
    const long double sb = sample_sd(b);
    if (sa == 0 || sb == 0) return 0.0;
    return static_cast<double>(cov / (sa * sb));
}

// Values of parameter i at ticks t-1 .. t-k.
inline std::vector<double> lagged(const corradapt::TimeSeriesPanel& p, std::size_t i, long t, std::size_t k) {
    std::vector<double> out;
    for (std::size_t l = 1; l <= k; ++l) out.push_back(p.at(i, t - static_cast<long>(l)));
    return out;
}

// G_i(t) recomputed from raw slices.
inline double naive_gi(const corradapt::TimeSeriesPanel& p, std::size_t i, long t, std::size_t k, double r_sign) {
    const auto xi = lagged(p, i, t, k);
    double g = 0.0;
    for (std::size_t j = 0; j < p.width(); ++j) {
        if (j == i) continue;
        const double r = std::abs(pearson(xi, lagged(p, j, t, k)));
        if (r >= r_sign) g += r;
    }
    return g;
}

// Two-sided 5% critical Pearson r from published tables, keyed by df.
inline double published_critical_r(int df) {
    switch (df) {
        case 1: return 0.997;
        case 5: return 0.754;
        case 10: return 0.576;
        case 28: return 0.361;
        default: return std::nan("");
    }
}

inline corradapt::TimeSeriesPanel random_panel(std::mt19937_64& rng, std::size_t n, std::size_t T) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<std::vector<double>> cols(n, std::vector<double>(T));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("p" + std::to_string(i + 1));
        // A shared factor with random loading gives a spread of correlations.
        for (std::size_t t = 0; t < T; ++t) cols[i][t] = z(rng);
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> common(T);
    for (auto& c : common) c = z(rng);
    for (auto& col : cols) {
        const double load = u(rng) * 2.0;
        for (std::size_t t = 0; t < T; ++t) col[t] += load * common[t];
    }
    return corradapt::TimeSeriesPanel::from_columns(labels, 1, cols);
}

}  // namespace oracle
