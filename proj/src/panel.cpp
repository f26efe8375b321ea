#include "corradapt/panel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "corradapt/errors.hpp"
#include "corradapt/format.hpp"

namespace corradapt {

std::string_view block_name(Block b) {
    switch (b) {
        case Block::environment: return "external environment";
        case Block::investment: return "investment plan";
        case Block::equipment: return "equipment";
        case Block::depreciation: return "depreciation";
        case Block::products: return "products";
        case Block::logistics: return "warehouse and logistics";
        case Block::staffing: return "staffing";
        case Block::finance: return "budget and finance";
        case Block::ecology: return "ecology";
        case Block::engineering: return "engineering";
        case Block::unassigned: return "unassigned";
    }
    return "unassigned";
}

TimeSeriesPanel::TimeSeriesPanel(std::vector<ParameterMeta> meta, Tick first_tick,
                                 std::vector<std::vector<double>> columns)
    : meta_(std::move(meta)), first_tick_(first_tick), length_(0), columns_(std::move(columns)) {
    if (meta_.size() < 2) {
        throw DataError("panel needs at least 2 parameters, got " + std::to_string(meta_.size()));
    }
    if (columns_.size() != meta_.size()) {
        throw DataError("panel has " + std::to_string(meta_.size()) + " labels but " +
                        std::to_string(columns_.size()) + " columns");
    }
    length_ = columns_.front().size();
    if (length_ == 0) {
        throw DataError("panel needs at least 1 tick");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < meta_.size(); ++i) {
        auto& m = meta_[i];
        if (m.label.empty()) {
            throw DataError("empty label for parameter " + std::to_string(i + 1));
        }
        if (!seen.insert(m.label).second) {
            throw DataError("duplicate label '" + m.label + "'");
        }
        if (m.index == 0) {
            m.index = i + 1;
        } else if (m.index != i + 1) {
            throw DataError("parameter indices must be contiguous 1..n");
        }
        if (columns_[i].size() != length_) {
            throw DataError("column '" + m.label + "' has " + std::to_string(columns_[i].size()) +
                            " values, expected " + std::to_string(length_));
        }
        for (std::size_t t = 0; t < length_; ++t) {
            if (!std::isfinite(columns_[i][t])) {
                throw DataError("non-finite value in column '" + m.label + "' at tick " +
                                std::to_string(first_tick_ + static_cast<Tick>(t)));
            }
        }
    }
}

TimeSeriesPanel TimeSeriesPanel::from_columns(std::vector<std::string> labels, Tick first_tick,
                                              std::vector<std::vector<double>> columns) {
    std::vector<ParameterMeta> meta;
    meta.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        meta.push_back({i + 1, std::move(labels[i]), Block::unassigned});
    }
    return TimeSeriesPanel(std::move(meta), first_tick, std::move(columns));
}

std::vector<std::string> TimeSeriesPanel::labels() const {
    std::vector<std::string> out;
    out.reserve(meta_.size());
    for (const auto& m : meta_) {
        out.push_back(m.label);
    }
    return out;
}

std::span<const double> TimeSeriesPanel::column(std::size_t i) const {
    if (i >= columns_.size()) {
        throw IndexError("parameter index " + std::to_string(i) + " out of range");
    }
    return columns_[i];
}

double TimeSeriesPanel::at(std::size_t i, Tick t) const {
    if (!has_tick(t)) {
        throw IndexError("tick " + std::to_string(t) + " outside panel");
    }
    return column(i)[static_cast<std::size_t>(t - first_tick_)];
}

WindowMatrix::WindowMatrix(Tick anchor, std::size_t depth, std::size_t width, std::vector<double> data,
                           bool standardized, std::vector<bool> degenerate)
    : anchor_(anchor),
      depth_(depth),
      width_(width),
      data_(std::move(data)),
      standardized_(standardized),
      degenerate_(std::move(degenerate)) {
    if (data_.size() != depth_ * width_ || degenerate_.size() != width_) {
        throw DataError("window shape mismatch");
    }
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string_view field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                    : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
        fields.emplace_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool parse_full(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::fixed | std::chars_format::scientific);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

bool parse_full(std::string_view text, Tick& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

TimeSeriesPanel load_panel(std::istream& source) {
    std::string line;
    std::size_t row = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(source, line)) {
            ++row;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (row == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
                static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
                line.erase(0, 3);
            }
            return true;
        }
        return false;
    };

    if (!next_line()) {
        throw FormatError("empty panel source: missing header");
    }
    auto header = split_fields(line);
    if (header.size() < 3) {
        throw FormatError("header must be 't,<label1>,...,<labeln>' with n >= 2");
    }
    if (header.front() != "t") {
        throw FormatError("header must start with 't', got '" + header.front() + "'");
    }
    std::vector<std::string> labels(header.begin() + 1, header.end());
    {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i].empty()) {
                throw FormatError("empty label in header column " + std::to_string(i + 2));
            }
            if (!seen.insert(labels[i]).second) {
                throw DataError("duplicate label '" + labels[i] + "'");
            }
        }
    }

    const std::size_t n = labels.size();
    std::vector<std::vector<double>> columns(n);
    Tick first_tick = 0;
    Tick prev_tick = 0;
    std::size_t data_rows = 0;

    while (next_line()) {
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const auto fields = split_fields(line);
        Tick t = 0;
        if (!parse_full(fields[0], t)) {
            throw CellError(row, 1, "tick '" + fields[0] + "' is not an integer");
        }
        if (data_rows > 0 && t != prev_tick + 1) {
            throw DataError("non-contiguous ticks: " + std::to_string(prev_tick) + " followed by " +
                            std::to_string(t) + " at row " + std::to_string(row));
        }
        if (data_rows == 0) first_tick = t;
        for (std::size_t i = 0; i < n; ++i) {
            if (i + 1 >= fields.size()) {
                throw CellError(row, i + 2, "missing cell");
            }
            double v = 0.0;
            if (!parse_full(fields[i + 1], v)) {
                throw CellError(row, i + 2, "'" + fields[i + 1] + "' is not a finite decimal number");
            }
            columns[i].push_back(v);
        }
        if (fields.size() > n + 1) {
            throw CellError(row, n + 2, "unexpected extra cell");
        }
        prev_tick = t;
        ++data_rows;
    }
    if (data_rows == 0) {
        throw DataError("panel has no data rows");
    }
    return TimeSeriesPanel::from_columns(std::move(labels), first_tick, std::move(columns));
}

TimeSeriesPanel load_panel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open panel file '" + path + "'");
    }
    return load_panel(in);
}

void write_panel(std::ostream& out, const TimeSeriesPanel& panel, int digits) {
    out << 't';
    for (const auto& m : panel.meta()) {
        out << ',' << m.label;
    }
    out << '\n';
    for (std::size_t k = 0; k < panel.length(); ++k) {
        out << panel.first_tick() + static_cast<Tick>(k);
        for (std::size_t i = 0; i < panel.width(); ++i) {
            out << ',' << format_decimal(panel.column(i)[k], digits);
        }
        out << '\n';
    }
}

WindowMatrix window_slice(const TimeSeriesPanel& panel, Tick t, std::size_t k) {
    if (k < min_window_depth) {
        throw InvalidDepth("window depth k must be at least 3, got " + std::to_string(k));
    }
    const Tick oldest = t - static_cast<Tick>(k);
    if (oldest < panel.first_tick()) {
        throw InsufficientHistory("tick " + std::to_string(t) + " needs history back to tick " +
                                  std::to_string(oldest) + " but the panel starts at " +
                                  std::to_string(panel.first_tick()));
    }
    if (t - 1 > panel.last_tick()) {
        throw InsufficientHistory("tick " + std::to_string(t) + " needs tick " + std::to_string(t - 1) +
                                  " but the panel ends at " + std::to_string(panel.last_tick()));
    }
    const std::size_t n = panel.width();
    std::vector<double> data(k * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto col = panel.column(i);
        for (std::size_t l = 0; l < k; ++l) {
            const Tick src = t - 1 - static_cast<Tick>(l);
            data[i * k + l] = col[static_cast<std::size_t>(src - panel.first_tick())];
        }
    }
    return WindowMatrix(t, k, n, std::move(data), false, std::vector<bool>(n, false));
}

WindowMatrix standardize(const WindowMatrix& window) {
    const std::size_t k = window.depth();
    const std::size_t n = window.width();
    std::vector<double> data(k * n);
    std::vector<bool> degenerate = window.degenerate();

    for (std::size_t i = 0; i < n; ++i) {
        const auto col = window.column(i);
        double* dst = data.data() + i * k;

        bool constant = true;
        for (std::size_t l = 1; l < k && constant; ++l) {
            constant = col[l] == col[0];
        }
        if (constant || degenerate[i]) {
            degenerate[i] = true;
            continue;  // already zero-filled
        }

        // Two-pass mean with a correction term.
        double sum = 0.0;
        for (double v : col) sum += v;
        double mean = sum / static_cast<double>(k);
        double correction = 0.0;
        for (double v : col) correction += v - mean;
        mean += correction / static_cast<double>(k);

        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        if (!(ss > 0.0)) {
            degenerate[i] = true;
            continue;
        }
        const double sd = std::sqrt(ss / static_cast<double>(k - 1));
        for (std::size_t l = 0; l < k; ++l) {
            dst[l] = (col[l] - mean) / sd;
        }
    }
    return WindowMatrix(window.anchor(), k, n, std::move(data), true, std::move(degenerate));
}

}  // namespace corradapt
