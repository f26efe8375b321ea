#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "corradapt/correlation.hpp"
#include "corradapt/panel.hpp"

namespace corradapt {

// Critical value r_sign: either a fixed magnitude or derived per depth k from
// a two-sided significance level.
class ThresholdSpec {
public:
    enum class Mode { fixed, significance };

    // Throws ConfigError unless 0 <= r <= 1.
    static ThresholdSpec fixed(double r);
    // Throws ConfigError unless 0 < alpha < 1.
    static ThresholdSpec significance(double alpha);

    Mode mode() const noexcept { return mode_; }
    double fixed_r() const noexcept { return value_; }
    double alpha() const noexcept { return value_; }

private:
    ThresholdSpec(Mode mode, double value) : mode_(mode), value_(value) {}

    Mode mode_;
    double value_;
};

std::string_view to_string(ThresholdSpec::Mode mode);

// Fixed mode returns fixed_r. Significance mode returns t / sqrt(k - 2 + t^2)
// with t the Student-t quantile at 1 - alpha/2 on k - 2 degrees of freedom,
// clamped to at most 1 - 1e-9.
double critical_r(std::size_t k, const ThresholdSpec& spec);

// G_i = sum over j != i of |r_ij| where |r_ij| >= r_sign. Zero for a
// degenerate parameter. Throws IndexError when i is out of range.
double weight_indicator(const CorrelationMatrix& r, std::size_t i, double r_sign);

enum class Normalization { raw = 0, per_tick = 1, per_cell = 2 };

inline constexpr std::array<Normalization, 3> all_normalizations{Normalization::raw, Normalization::per_tick,
                                                                 Normalization::per_cell};

std::string_view to_string(Normalization mode);
// Throws ConfigError for unknown names.
Normalization parse_normalization(std::string_view name);

struct IntegralTotals {
    double raw = 0.0;
    double per_tick = 0.0;  // raw / ticks analyzed
    double per_cell = 0.0;  // raw / (n * ticks analyzed)

    double operator[](Normalization mode) const;
};

struct IndicatorResult {
    std::size_t width = 0;
    std::size_t depth = 0;
    ThresholdSpec threshold = ThresholdSpec::significance(0.05);
    std::vector<Tick> ticks;                // analyzed ticks, ascending
    std::vector<double> threshold_used;     // r_sign per analyzed tick
    std::vector<std::vector<double>> gi;    // gi[tick index][parameter]
    std::vector<double> g_per_tick;         // G(t) = sum_i G_i(t)
    IntegralTotals g_total;

    double gi_at(std::size_t parameter, Tick t) const;
    double g_at(Tick t) const;
};

struct IndicatorOptions {
    // Worker threads for per-tick work; 0 picks the hardware concurrency.
    // Output does not depend on this value.
    unsigned threads = 1;
};

// Applies the windowed indicator to every tick with a full k-tick history.
// Throws InvalidDepth/InsufficientHistory when the panel is shorter than k+1.
IndicatorResult indicator_series(const TimeSeriesPanel& panel, std::size_t k, const ThresholdSpec& spec,
                                 const IndicatorOptions& options = {});

struct GraphEdge {
    std::size_t i = 0;  // 0-based, i < j
    std::size_t j = 0;
    double r = 0.0;
};

struct CorrelationGraph {
    Tick anchor = 0;
    std::vector<std::string> nodes;
    std::vector<GraphEdge> edges;  // ordered by (i, j)
};

// Edges are pairs i < j with |r_ij| >= r_sign, neither endpoint degenerate.
// Throws DataError when labels do not match the matrix width.
CorrelationGraph correlation_graph(const CorrelationMatrix& r, double r_sign, const std::vector<std::string>& labels);

// Exports.
void write_gi_csv(std::ostream& out, const IndicatorResult& result, const std::vector<std::string>& labels,
                  int digits = 6);
void write_dynamics_csv(std::ostream& out, const IndicatorResult& result, int digits = 6);
void write_dot(std::ostream& out, const CorrelationGraph& graph);
void write_dynamics_svg(std::ostream& out, const IndicatorResult& result);

struct ReportInfo {
    long scenario_id = 0;
    Normalization mode = Normalization::per_tick;
};

nlohmann::ordered_json indicator_report(const IndicatorResult& result, const ReportInfo& info);

}  // namespace corradapt
