#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "corradapt/correlation.hpp"
#include "corradapt/enterprise.hpp"
#include "corradapt/errors.hpp"
#include "corradapt/format.hpp"
#include "corradapt/indicator.hpp"
#include "corradapt/panel.hpp"
#include "corradapt/scenario.hpp"

namespace corradapt::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Writes through a sibling temp file and renames, so readers never see a
// half-written output.
void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + path.string() + "'");
        }
        body(out);
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

void write_json(const fs::path& path, const json& doc) {
    write_atomic(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// FNV-1a over file bytes; lets a replay notice that an input changed.
std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[8192];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

json manifest(const std::string& command, const std::vector<std::string>& args, json config,
              const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
              std::optional<std::uint64_t> seed) {
    json doc;
    doc["tool"] = "corradapt";
    doc["version"] = tool_version;
    doc["command"] = command;
    doc["argv"] = args;
    doc["cwd"] = fs::current_path().string();
    doc["config"] = std::move(config);
    auto in = json::array();
    for (const auto& p : inputs) {
        in.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
    }
    doc["inputs"] = std::move(in);
    doc["outputs"] = outputs;
    if (seed) {
        doc["seed"] = *seed;
    } else {
        doc["seed"] = nullptr;
    }
    doc["timestamp"] = utc_timestamp();
    return doc;
}

fs::path sidecar(const std::string& out) { return fs::path(out + ".manifest.json"); }

ThresholdSpec threshold_from(std::optional<double> alpha, std::optional<double> fixed) {
    if (fixed) return ThresholdSpec::fixed(*fixed);
    return ThresholdSpec::significance(alpha.value_or(0.05));
}

json threshold_config(const ThresholdSpec& spec) {
    json t;
    t["mode"] = std::string(to_string(spec.mode()));
    if (spec.mode() == ThresholdSpec::Mode::fixed) {
        t["r"] = spec.fixed_r();
    } else {
        t["alpha"] = spec.alpha();
    }
    return t;
}

json option_config(const ControlOption& o) {
    return {{"id", o.id},
            {"credit_share", o.credit_share},
            {"rate", o.rate},
            {"owner_share", o.owner_share},
            {"subsidy_share", o.subsidy_share},
            {"sawlog_sale_start", o.sawlog_sale_start},
            {"products_sale_start", o.products_sale_start},
            {"asset_offset_months", o.asset_offset_months},
            {"logging_volume", o.logging_volume}};
}

std::size_t checked_window(long k) {
    if (k < static_cast<long>(min_window_depth)) {
        throw ConfigError("--window must be >= " + std::to_string(min_window_depth));
    }
    return static_cast<std::size_t>(k);
}

struct SimulateArgs {
    int option = 0;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<std::size_t> horizon;
    std::string out;
};

int do_simulate(const SimulateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    ControlOption option = builtin_option(a.option);
    SimConfig config;
    std::vector<std::string> inputs;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw IoError("cannot open config file '" + a.config_path + "'");
        apply_scenario_config(in, option, config);
        inputs.push_back(a.config_path);
    }
    if (a.seed) config.seed = *a.seed;
    if (a.n) config.n_parameters = *a.n;
    if (a.horizon) config.horizon_T = *a.horizon;
    config.validate(option);

    const TimeSeriesPanel panel = simulate(option, config);
    write_atomic(a.out, [&](std::ostream& s) { write_panel(s, panel); });

    json cfg;
    cfg["option"] = option_config(option);
    cfg["n_parameters"] = config.n_parameters;
    cfg["horizon_T"] = config.horizon_T;
    cfg["noise_scale"] = config.noise_scale;
    cfg["shock_amplitude"] = config.shock_amplitude;
    cfg["seasonal_step"] = config.seasonal_step;
    const auto man = sidecar(a.out);
    write_json(man, manifest("simulate", args, cfg, inputs, {a.out}, config.seed));
    out << "wrote " << a.out << " (" << panel.width() << " parameters, " << panel.length() << " ticks)\n";
    return exit_ok;
}

struct AnalyzeArgs {
    std::string panel;
    long window = 12;
    std::optional<double> alpha;
    std::optional<double> threshold;
    std::string mode = "per_tick";
    long scenario_id = 0;
    bool svg = false;
    unsigned threads = 0;
    std::string out;
};

int do_analyze(const AnalyzeArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    const std::size_t k = checked_window(a.window);
    const ThresholdSpec spec = threshold_from(a.alpha, a.threshold);
    const Normalization mode = parse_normalization(a.mode);

    const TimeSeriesPanel panel = load_panel_file(a.panel);
    const IndicatorResult result = indicator_series(panel, k, spec, {a.threads});

    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + a.out + "'");

    std::vector<std::string> outputs;
    auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& body) {
        const fs::path p = dir / name;
        write_atomic(p, body);
        outputs.push_back(p.string());
    };
    emit("report.json", [&](std::ostream& s) { s << indicator_report(result, {a.scenario_id, mode}).dump(2) << '\n'; });
    emit("g_dynamics.csv", [&](std::ostream& s) { write_dynamics_csv(s, result); });
    emit("gi_surface.csv", [&](std::ostream& s) { write_gi_csv(s, result, panel.labels()); });
    if (a.svg) {
        emit("g_dynamics.svg", [&](std::ostream& s) { write_dynamics_svg(s, result); });
    }

    json cfg;
    cfg["window"] = k;
    cfg["threshold"] = threshold_config(spec);
    cfg["mode"] = std::string(to_string(mode));
    cfg["scenario_id"] = a.scenario_id;
    cfg["n"] = panel.width();
    cfg["ticks_analyzed"] = result.ticks.size();
    write_json(dir / "manifest.json", manifest("analyze", args, cfg, {a.panel}, outputs, std::nullopt));
    out << "analyzed " << result.ticks.size() << " ticks; G total (" << to_string(mode)
        << ") = " << format_decimal(result.g_total[mode]) << '\n';
    return exit_ok;
}

struct GraphArgs {
    std::string panel;
    long t = 0;
    long window = 12;
    std::optional<double> alpha;
    std::optional<double> threshold;
    std::string out;
    std::string matrix;
    int digits = 6;
};

int do_graph(const GraphArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    const std::size_t k = checked_window(a.window);
    const ThresholdSpec spec = threshold_from(a.alpha, a.threshold);
    if (a.digits < 1 || a.digits > 17) throw ConfigError("--digits must lie in 1..17");

    const TimeSeriesPanel panel = load_panel_file(a.panel);
    const CorrelationMatrix r = correlation_matrix(window_slice(panel, a.t, k));
    const double r_sign = critical_r(k, spec);
    const CorrelationGraph graph = correlation_graph(r, r_sign, panel.labels());

    std::vector<std::string> outputs{a.out};
    write_atomic(a.out, [&](std::ostream& s) { write_dot(s, graph); });
    if (!a.matrix.empty()) {
        write_atomic(a.matrix, [&](std::ostream& s) { write_matrix_csv(s, r, panel.labels(), a.digits); });
        outputs.push_back(a.matrix);
    }

    json cfg;
    cfg["t"] = a.t;
    cfg["window"] = k;
    cfg["threshold"] = threshold_config(spec);
    cfg["r_sign"] = r_sign;
    cfg["digits"] = a.digits;
    write_json(sidecar(a.out), manifest("graph", args, cfg, {a.panel}, outputs, std::nullopt));
    out << "t=" << a.t << ": " << graph.edges.size() << " edges at r_sign " << format_decimal(r_sign) << '\n';
    return exit_ok;
}

struct CompareArgs {
    std::vector<std::string> reports;
    std::string objective = "min";
    std::string mode;
    std::size_t regime_window = 4;
    double regime_eps = 0.02;
    std::string out;
};

struct LoadedReport {
    ScenarioScore score;
    std::string mode;
};

LoadedReport read_report(const std::string& path, long fallback_id) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
        LoadedReport r;
        const long id = doc.at("scenario_id").get<long>();
        r.score.option_id = id != 0 ? id : fallback_id;
        r.mode = doc.at("mode").get<std::string>();
        const auto& g = doc.at("g_total");
        r.score.g_total = {g.at("raw").get<double>(), g.at("per_tick").get<double>(), g.at("per_cell").get<double>()};
        for (const auto& e : doc.at("per_tick")) {
            r.score.per_tick.push_back({e.at("t").get<Tick>(), e.at("G").get<double>()});
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed report '" + path + "': " + e.what());
    }
}

int do_compare(const CompareArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    const Objective objective = parse_objective(a.objective);
    std::vector<LoadedReport> loaded;
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        loaded.push_back(read_report(a.reports[i], static_cast<long>(i + 1)));
    }
    Normalization mode;
    if (!a.mode.empty()) {
        mode = parse_normalization(a.mode);
    } else {
        for (const auto& r : loaded) {
            if (r.mode != loaded.front().mode) {
                throw ConfigError("reports use different modes (" + loaded.front().mode + ", " + r.mode +
                                  "); pass --mode");
            }
        }
        mode = parse_normalization(loaded.front().mode);
    }

    std::vector<ScenarioScore> scores;
    std::map<long, std::vector<RegimePhase>> regimes;
    const RegimeParams params{a.regime_window, a.regime_eps};
    for (const auto& r : loaded) {
        scores.push_back(r.score);
        regimes[r.score.option_id] = detect_regimes(r.score.per_tick, params);
    }
    const Ranking ranking = rank_options(scores, objective, mode);
    write_json(a.out, compare_report(scores, ranking, regimes));

    json cfg;
    cfg["objective"] = std::string(to_string(objective));
    cfg["mode"] = std::string(to_string(mode));
    cfg["regime_window"] = a.regime_window;
    cfg["regime_eps"] = a.regime_eps;
    write_json(sidecar(a.out), manifest("compare", args, cfg, a.reports, {a.out}, std::nullopt));
    out << "best option " << ranking.order.front().option_id << " (" << to_string(mode) << " "
        << format_decimal(ranking.order.front().value) << ")\n";
    return exit_ok;
}

int do_replay(const std::string& path, std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    std::vector<std::string> argv;
    std::string cwd;
    try {
        const json doc = json::parse(in);
        argv = doc.at("argv").get<std::vector<std::string>>();
        cwd = doc.value("cwd", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest '" + path + "': " + e.what());
    }
    if (argv.empty() || argv.front() == "replay") {
        throw ConfigError("manifest does not record a replayable command");
    }
    const fs::path here = fs::current_path();
    if (!cwd.empty()) {
        std::error_code ec;
        fs::current_path(cwd, ec);
        if (ec) throw IoError("cannot enter recorded directory '" + cwd + "'");
    }
    const int code = run(argv, out, err);
    fs::current_path(here);
    return code;
}

void add_threshold_options(CLI::App* sub, std::optional<double>& alpha, std::optional<double>& threshold) {
    auto* a = sub->add_option("--alpha", alpha, "two-sided significance level for r_sign (default 0.05)");
    auto* r = sub->add_option("--threshold", threshold, "fixed r_sign in [0,1]");
    a->excludes(r);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Correlation-adaptometry analysis of enterprise time-series panels", "corradapt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic enterprise panel");
    simulate_cmd->add_option("--option", sim.option, "control option id")->required()->check(CLI::Range(1, 6));
    simulate_cmd->add_option("--config", sim.config_path, "key = value scenario overrides")->check(CLI::ExistingFile);
    simulate_cmd->add_option("--seed", sim.seed, "random seed");
    simulate_cmd->add_option("--n", sim.n, "number of parameters");
    simulate_cmd->add_option("--horizon", sim.horizon, "number of monthly ticks");
    simulate_cmd->add_option("--out", sim.out, "panel CSV path")->required();

    AnalyzeArgs ana;
    auto* analyze_cmd = app.add_subcommand("analyze", "compute the weight indicator over a panel");
    analyze_cmd->add_option("--panel", ana.panel, "panel CSV")->required();
    analyze_cmd->add_option("--window", ana.window, "window depth k")->capture_default_str();
    add_threshold_options(analyze_cmd, ana.alpha, ana.threshold);
    analyze_cmd->add_option("--mode", ana.mode, "raw | per_tick | per_cell")->capture_default_str();
    analyze_cmd->add_option("--scenario-id", ana.scenario_id, "id recorded in the report");
    analyze_cmd->add_flag("--svg", ana.svg, "also plot G(t) as SVG");
    analyze_cmd->add_option("--threads", ana.threads, "worker threads, 0 = all cores")->capture_default_str();
    analyze_cmd->add_option("--out", ana.out, "output directory")->required();

    GraphArgs gra;
    auto* graph_cmd = app.add_subcommand("graph", "export the correlation graph at one tick");
    graph_cmd->add_option("--panel", gra.panel, "panel CSV")->required();
    graph_cmd->add_option("--t", gra.t, "anchor tick")->required();
    graph_cmd->add_option("--window", gra.window, "window depth k")->capture_default_str();
    add_threshold_options(graph_cmd, gra.alpha, gra.threshold);
    graph_cmd->add_option("--out", gra.out, "DOT output path")->required();
    graph_cmd->add_option("--matrix", gra.matrix, "also dump the correlation matrix as CSV");
    graph_cmd->add_option("--digits", gra.digits, "significant digits in the matrix dump")->capture_default_str();

    CompareArgs cmp;
    auto* compare_cmd = app.add_subcommand("compare", "rank scenarios by integral indicator");
    compare_cmd->add_option("--reports", cmp.reports, "report.json files")->required()->expected(1, -1);
    compare_cmd->add_option("--objective", cmp.objective, "min | max")->capture_default_str();
    compare_cmd->add_option("--mode", cmp.mode, "raw | per_tick | per_cell (default: the reports' mode)");
    compare_cmd->add_option("--regime-window", cmp.regime_window, "smoothing width")->capture_default_str();
    compare_cmd->add_option("--regime-eps", cmp.regime_eps, "relative slope band")->capture_default_str();
    compare_cmd->add_option("--out", cmp.out, "comparison JSON path")->required();

    std::string replay_path;
    auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay_cmd->add_option("manifest", replay_path, "manifest JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*simulate_cmd) return do_simulate(sim, args, out);
        if (*analyze_cmd) return do_analyze(ana, args, out);
        if (*graph_cmd) return do_graph(gra, args, out);
        if (*compare_cmd) return do_compare(cmp, args, out);
        if (*replay_cmd) return do_replay(replay_path, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}

}  // namespace corradapt::cli
