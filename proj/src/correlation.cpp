#include "corradapt/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "corradapt/errors.hpp"
#include "corradapt/format.hpp"

namespace corradapt {

CorrelationMatrix::CorrelationMatrix(Tick anchor, std::size_t depth, std::size_t width, std::vector<double> entries,
                                     std::vector<bool> degenerate)
    : anchor_(anchor), depth_(depth), width_(width), entries_(std::move(entries)), degenerate_(std::move(degenerate)) {
    if (entries_.size() != width_ * width_ || degenerate_.size() != width_) {
        throw DataError("correlation matrix shape mismatch");
    }
}

CorrelationMatrix correlation_matrix(const WindowMatrix& window) {
    if (!window.standardized()) {
        return correlation_matrix(standardize(window));
    }
    const std::size_t k = window.depth();
    const std::size_t n = window.width();
    const auto& degenerate = window.degenerate();
    const double scale = 1.0 / static_cast<double>(k - 1);
    std::vector<double> entries(n * n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        if (degenerate[i]) continue;
        entries[i * n + i] = 1.0;
        const auto zi = window.column(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (degenerate[j]) continue;
            const auto zj = window.column(j);
            // Ascending lag order keeps the result independent of scheduling.
            double acc = 0.0;
            for (std::size_t l = 0; l < k; ++l) {
                acc += zi[l] * zj[l];
            }
            const double r = std::clamp(acc * scale, -1.0, 1.0);
            entries[i * n + j] = r;
            entries[j * n + i] = r;
        }
    }
    return CorrelationMatrix(window.anchor(), k, n, std::move(entries), degenerate);
}

PearsonResult pairwise_r(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DataError("pairwise_r: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    }
    if (a.size() < min_window_depth) {
        throw DataError("pairwise_r: need at least 3 observations");
    }
    const auto n = static_cast<double>(a.size());
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        mean_a += a[l];
        mean_b += b[l];
    }
    mean_a /= n;
    mean_b /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        const double da = a[l] - mean_a;
        const double db = b[l] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    const bool const_a = std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; });
    const bool const_b = std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; });
    if (const_a || const_b || !(saa > 0.0) || !(sbb > 0.0)) {
        return {0.0, true};
    }
    return {std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0), false};
}

void write_matrix_csv(std::ostream& out, const CorrelationMatrix& r, const std::vector<std::string>& labels,
                      int digits) {
    if (labels.size() != r.width()) {
        throw DataError("matrix dump: " + std::to_string(labels.size()) + " labels for width " +
                        std::to_string(r.width()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << (i ? "," : "") << labels[i];
    }
    out << '\n';
    for (std::size_t i = 0; i < r.width(); ++i) {
        for (std::size_t j = 0; j < r.width(); ++j) {
            out << (j ? "," : "") << format_decimal(r(i, j), digits);
        }
        out << '\n';
    }
}

}  // namespace corradapt
