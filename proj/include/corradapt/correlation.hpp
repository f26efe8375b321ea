#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "corradapt/panel.hpp"

namespace corradapt {

// R_k(t): windowed Pearson coefficients. Symmetric, unit diagonal for
// non-degenerate parameters, zero rows/columns for degenerate ones.
class CorrelationMatrix {
public:
    CorrelationMatrix(Tick anchor, std::size_t depth, std::size_t width, std::vector<double> entries,
                      std::vector<bool> degenerate);

    Tick anchor() const noexcept { return anchor_; }
    std::size_t depth() const noexcept { return depth_; }
    std::size_t width() const noexcept { return width_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * width_ + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * width_, width_}; }
    const std::vector<bool>& degenerate() const noexcept { return degenerate_; }

private:
    Tick anchor_;
    std::size_t depth_;
    std::size_t width_;
    std::vector<double> entries_;  // row-major n x n
    std::vector<bool> degenerate_;
};

// (1/(k-1)) * Z^T Z on the standardized window, clamped to [-1, 1].
// Standardizes internally when given a raw window.
CorrelationMatrix correlation_matrix(const WindowMatrix& window);

struct PearsonResult {
    double r = 0.0;
    bool degenerate = false;  // either series constant; r is 0
};

// Classical two-pass Pearson coefficient on raw series. Serves as the scalar
// reference for correlation_matrix.
PearsonResult pairwise_r(std::span<const double> a, std::span<const double> b);

// n header labels, then n rows of n decimals.
void write_matrix_csv(std::ostream& out, const CorrelationMatrix& r, const std::vector<std::string>& labels,
                      int digits = 6);

}  // namespace corradapt
