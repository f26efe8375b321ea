#include "corradapt/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "corradapt/errors.hpp"
#include "corradapt/format.hpp"

namespace corradapt {

namespace {

constexpr double max_critical_r = 1.0 - 1e-9;

}  // namespace

ThresholdSpec ThresholdSpec::fixed(double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw ConfigError("threshold must lie in [0,1]");
    }
    return ThresholdSpec(Mode::fixed, r);
}

ThresholdSpec ThresholdSpec::significance(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0,1)");
    }
    return ThresholdSpec(Mode::significance, alpha);
}

std::string_view to_string(ThresholdSpec::Mode mode) {
    return mode == ThresholdSpec::Mode::fixed ? "fixed" : "significance";
}

double critical_r(std::size_t k, const ThresholdSpec& spec) {
    if (spec.mode() == ThresholdSpec::Mode::fixed) {
        return spec.fixed_r();
    }
    if (k < min_window_depth) {
        throw ConfigError("significance threshold needs k >= 3, got " + std::to_string(k));
    }
    const double df = static_cast<double>(k - 2);
    double t = 0.0;
    try {
        const boost::math::students_t dist(df);
        t = boost::math::quantile(boost::math::complement(dist, spec.alpha() / 2.0));
    } catch (const std::runtime_error&) {
        // overflow or evaluation failure at extreme alpha
        return max_critical_r;
    }
    if (!std::isfinite(t)) {
        return max_critical_r;
    }
    // Same as t / sqrt(df + t^2) but immune to t^2 overflowing.
    const double r = 1.0 / std::sqrt(1.0 + df / t / t);
    return std::min(r, max_critical_r);
}

double weight_indicator(const CorrelationMatrix& r, std::size_t i, double r_sign) {
    if (i >= r.width()) {
        throw IndexError("parameter index " + std::to_string(i) + " out of range for width " +
                         std::to_string(r.width()));
    }
    if (r.degenerate()[i]) {
        return 0.0;
    }
    const auto row = r.row(i);
    double g = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j == i) continue;
        const double a = std::abs(row[j]);
        if (a >= r_sign) g += a;
    }
    return g;
}

std::string_view to_string(Normalization mode) {
    switch (mode) {
        case Normalization::raw: return "raw";
        case Normalization::per_tick: return "per_tick";
        case Normalization::per_cell: return "per_cell";
    }
    return "raw";
}

Normalization parse_normalization(std::string_view name) {
    for (auto mode : all_normalizations) {
        if (to_string(mode) == name) return mode;
    }
    throw ConfigError("unknown normalization mode '" + std::string(name) + "' (raw|per_tick|per_cell)");
}

double IntegralTotals::operator[](Normalization mode) const {
    switch (mode) {
        case Normalization::raw: return raw;
        case Normalization::per_tick: return per_tick;
        case Normalization::per_cell: return per_cell;
    }
    return raw;
}

double IndicatorResult::gi_at(std::size_t parameter, Tick t) const {
    const auto it = std::lower_bound(ticks.begin(), ticks.end(), t);
    if (it == ticks.end() || *it != t) {
        throw IndexError("tick " + std::to_string(t) + " was not analyzed");
    }
    const auto& row = gi[static_cast<std::size_t>(it - ticks.begin())];
    if (parameter >= row.size()) {
        throw IndexError("parameter index " + std::to_string(parameter) + " out of range");
    }
    return row[parameter];
}

double IndicatorResult::g_at(Tick t) const {
    const auto it = std::lower_bound(ticks.begin(), ticks.end(), t);
    if (it == ticks.end() || *it != t) {
        throw IndexError("tick " + std::to_string(t) + " was not analyzed");
    }
    return g_per_tick[static_cast<std::size_t>(it - ticks.begin())];
}

IndicatorResult indicator_series(const TimeSeriesPanel& panel, std::size_t k, const ThresholdSpec& spec,
                                 const IndicatorOptions& options) {
    if (k < min_window_depth) {
        throw InvalidDepth("window depth k must be at least 3, got " + std::to_string(k));
    }
    if (panel.length() < k + 1) {
        throw InsufficientHistory("panel has " + std::to_string(panel.length()) + " ticks; depth " +
                                  std::to_string(k) + " needs at least " + std::to_string(k + 1));
    }
    const double r_sign = critical_r(k, spec);
    const std::size_t n = panel.width();
    const Tick first = panel.first_tick() + static_cast<Tick>(k);
    const std::size_t count = static_cast<std::size_t>(panel.last_tick() - first + 1);

    IndicatorResult result;
    result.width = n;
    result.depth = k;
    result.threshold = spec;
    result.ticks.resize(count);
    result.threshold_used.assign(count, r_sign);
    result.gi.assign(count, std::vector<double>(n, 0.0));
    result.g_per_tick.assign(count, 0.0);

    auto work = [&](std::size_t idx) {
        const Tick t = first + static_cast<Tick>(idx);
        const auto r = correlation_matrix(standardize(window_slice(panel, t, k)));
        auto& row = result.gi[idx];
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = weight_indicator(r, i, r_sign);
            g += row[i];
        }
        result.ticks[idx] = t;
        result.g_per_tick[idx] = g;
    };

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t idx = 0; idx < count; ++idx) work(idx);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t idx = w; idx < count; idx += threads) work(idx);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    double raw = 0.0;
    for (double g : result.g_per_tick) raw += g;
    result.g_total.raw = raw;
    result.g_total.per_tick = raw / static_cast<double>(count);
    result.g_total.per_cell = raw / (static_cast<double>(n) * static_cast<double>(count));
    return result;
}

CorrelationGraph correlation_graph(const CorrelationMatrix& r, double r_sign, const std::vector<std::string>& labels) {
    if (labels.size() != r.width()) {
        throw DataError("correlation_graph: " + std::to_string(labels.size()) + " labels for width " +
                        std::to_string(r.width()));
    }
    CorrelationGraph graph;
    graph.anchor = r.anchor();
    graph.nodes = labels;
    const auto& degenerate = r.degenerate();
    for (std::size_t i = 0; i < r.width(); ++i) {
        if (degenerate[i]) continue;
        for (std::size_t j = i + 1; j < r.width(); ++j) {
            if (degenerate[j]) continue;
            if (std::abs(r(i, j)) >= r_sign) {
                graph.edges.push_back({i, j, r(i, j)});
            }
        }
    }
    return graph;
}

void write_gi_csv(std::ostream& out, const IndicatorResult& result, const std::vector<std::string>& labels,
                  int digits) {
    if (labels.size() != result.width) {
        throw DataError("G_i export: label count does not match panel width");
    }
    out << 't';
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (std::size_t idx = 0; idx < result.ticks.size(); ++idx) {
        out << result.ticks[idx];
        for (double g : result.gi[idx]) out << ',' << format_decimal(g, digits);
        out << '\n';
    }
}

void write_dynamics_csv(std::ostream& out, const IndicatorResult& result, int digits) {
    out << "t,G\n";
    for (std::size_t idx = 0; idx < result.ticks.size(); ++idx) {
        out << result.ticks[idx] << ',' << format_decimal(result.g_per_tick[idx], digits) << '\n';
    }
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_dot(std::ostream& out, const CorrelationGraph& graph) {
    out << "graph {\n";
    for (const auto& node : graph.nodes) {
        out << "  " << dot_quote(node) << ";\n";
    }
    for (const auto& e : graph.edges) {
        out << "  " << dot_quote(graph.nodes[e.i]) << " -- " << dot_quote(graph.nodes[e.j]) << " [weight="
            << format_fixed(e.r, 2) << "];\n";
    }
    out << "}\n";
}

void write_dynamics_svg(std::ostream& out, const IndicatorResult& result) {
    constexpr double width = 800.0;
    constexpr double height = 400.0;
    constexpr double margin = 40.0;
    const auto& g = result.g_per_tick;

    double g_max = 0.0;
    for (double v : g) g_max = std::max(g_max, v);
    if (g_max <= 0.0) g_max = 1.0;
    const Tick t0 = result.ticks.empty() ? 0 : result.ticks.front();
    const Tick t1 = result.ticks.empty() ? 1 : std::max(result.ticks.back(), t0 + 1);

    auto x_of = [&](Tick t) {
        return margin + (width - 2 * margin) * static_cast<double>(t - t0) / static_cast<double>(t1 - t0);
    };
    auto y_of = [&](double v) { return height - margin - (height - 2 * margin) * v / g_max; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << margin << "\" y=\"" << margin - 10 << "\" font-size=\"12\">G max "
        << format_decimal(g_max) << "</text>\n";
    out << "  <text x=\"" << margin << "\" y=\"" << height - 10 << "\" font-size=\"12\">t " << t0 << "</text>\n";
    out << "  <text x=\"" << width - margin << "\" y=\"" << height - 10
        << "\" font-size=\"12\" text-anchor=\"end\">t " << t1 << "</text>\n";
    out << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        out << (idx ? " " : "") << format_fixed(x_of(result.ticks[idx]), 2) << ',' << format_fixed(y_of(g[idx]), 2);
    }
    out << "\"/>\n</svg>\n";
}

nlohmann::ordered_json indicator_report(const IndicatorResult& result, const ReportInfo& info) {
    nlohmann::ordered_json doc;
    doc["scenario_id"] = info.scenario_id;
    doc["n"] = result.width;
    doc["ticks_analyzed"] = result.ticks.size();
    doc["k"] = result.depth;
    doc["mode"] = std::string(to_string(info.mode));
    doc["threshold"] = {
        {"mode", std::string(to_string(result.threshold.mode()))},
        {"value_at_k", round_significant(result.threshold_used.empty() ? critical_r(result.depth, result.threshold)
                                                                       : result.threshold_used.front())},
    };
    doc["g_total"] = {
        {"raw", round_significant(result.g_total.raw)},
        {"per_tick", round_significant(result.g_total.per_tick)},
        {"per_cell", round_significant(result.g_total.per_cell)},
    };
    auto per_tick = nlohmann::ordered_json::array();
    for (std::size_t idx = 0; idx < result.ticks.size(); ++idx) {
        per_tick.push_back({{"t", result.ticks[idx]}, {"G", round_significant(result.g_per_tick[idx])}});
    }
    doc["per_tick"] = std::move(per_tick);
    return doc;
}

}  // namespace corradapt
