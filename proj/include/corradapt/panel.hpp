#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corradapt {

using Tick = long;

// The nine business-plan blocks plus the zero (environment) block.
enum class Block : int {
    environment = 0,
    investment = 1,
    equipment = 2,
    depreciation = 3,
    products = 4,
    logistics = 5,
    staffing = 6,
    finance = 7,
    ecology = 8,
    engineering = 9,
    unassigned = -1,
};

inline constexpr int block_count = 10;

std::string_view block_name(Block b);

struct ParameterMeta {
    std::size_t index = 0;  // 1-based
    std::string label;
    Block block = Block::unassigned;
};

// n labelled parameter series over T contiguous ticks. Values are stored
// column-major: column i holds x^i(first_tick .. last_tick) contiguously.
// Immutable once constructed.
class TimeSeriesPanel {
public:
    // Validates every invariant (n >= 2, T >= 1, unique non-empty labels,
    // finite cells, column lengths equal). Throws DataError on violation.
    TimeSeriesPanel(std::vector<ParameterMeta> meta, Tick first_tick, std::vector<std::vector<double>> columns);

    // Convenience: labels only, every block unassigned.
    static TimeSeriesPanel from_columns(std::vector<std::string> labels, Tick first_tick,
                                        std::vector<std::vector<double>> columns);

    std::size_t width() const noexcept { return meta_.size(); }
    std::size_t length() const noexcept { return length_; }
    Tick first_tick() const noexcept { return first_tick_; }
    Tick last_tick() const noexcept { return first_tick_ + static_cast<Tick>(length_) - 1; }
    bool has_tick(Tick t) const noexcept { return t >= first_tick() && t <= last_tick(); }

    const std::vector<ParameterMeta>& meta() const noexcept { return meta_; }
    std::vector<std::string> labels() const;

    std::span<const double> column(std::size_t i) const;
    double at(std::size_t i, Tick t) const;

private:
    std::vector<ParameterMeta> meta_;
    Tick first_tick_;
    std::size_t length_;
    std::vector<std::vector<double>> columns_;
};

// X_k(t): the k previous observations of every parameter, most recent first.
// Stored column-major: value(l, i) is parameter i at tick t - 1 - l.
class WindowMatrix {
public:
    WindowMatrix(Tick anchor, std::size_t depth, std::size_t width, std::vector<double> data, bool standardized,
                 std::vector<bool> degenerate);

    Tick anchor() const noexcept { return anchor_; }
    std::size_t depth() const noexcept { return depth_; }
    std::size_t width() const noexcept { return width_; }
    bool standardized() const noexcept { return standardized_; }

    // Row l is lag l + 1 (0-based row index).
    double value(std::size_t row, std::size_t col) const { return data_[col * depth_ + row]; }
    std::span<const double> column(std::size_t col) const { return {data_.data() + col * depth_, depth_}; }

    // Only meaningful after standardize(); all false before.
    const std::vector<bool>& degenerate() const noexcept { return degenerate_; }

private:
    Tick anchor_;
    std::size_t depth_;
    std::size_t width_;
    std::vector<double> data_;
    bool standardized_;
    std::vector<bool> degenerate_;
};

inline constexpr std::size_t min_window_depth = 3;

// Throws FormatError for structural problems and DataError (CellError where a
// cell can be located) for content problems.
TimeSeriesPanel load_panel(std::istream& source);
TimeSeriesPanel load_panel_file(const std::string& path);

void write_panel(std::ostream& out, const TimeSeriesPanel& panel, int digits = 6);

// Rows t-1 .. t-k. Throws InvalidDepth for k < 3 and InsufficientHistory when
// any of those ticks is missing from the panel.
WindowMatrix window_slice(const TimeSeriesPanel& panel, Tick t, std::size_t k);

// Column-wise (x - mean) / sd with the 1/(k-1) variance convention.
// Constant columns become zeros and are flagged degenerate.
WindowMatrix standardize(const WindowMatrix& window);

}  // namespace corradapt
