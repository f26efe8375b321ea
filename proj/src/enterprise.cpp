#include "corradapt/enterprise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>

#include "corradapt/errors.hpp"
#include "corradapt/random.hpp"

namespace corradapt {

namespace {

// Share of columns per block, in percent; blocks 0..9.
constexpr std::array<int, block_count> block_ratio{12, 8, 16, 6, 12, 6, 10, 16, 6, 8};

// Arbitrary positive magnitudes; only structure is meaningful.
constexpr double project_cost = 5.0e9;
constexpr double required_subsidy_monthly = 2.0e7;
constexpr double base_inflation_monthly = 0.004;
constexpr int amortization_months = 120;
constexpr Tick capex_months = 12;
constexpr double baseline_logging_volume = 800.0;
constexpr double export_ban_price_factor = 0.85;

// Substream ids for common factors; column streams use column index + 1.
constexpr std::uint64_t shock_stream = 0x5A4E'C710'0000'0001ULL;

std::string_view role_slug(ColumnRole role) {
    switch (role) {
        case ColumnRole::environment_series: return "env";
        case ColumnRole::investment_spend: return "investment_spend";
        case ColumnRole::equipment_cost: return "equipment_cost";
        case ColumnRole::accumulated_depreciation: return "accumulated_depreciation";
        case ColumnRole::sawlog_revenue: return "sawlog_revenue";
        case ColumnRole::product_revenue: return "product_revenue";
        case ColumnRole::logistics_volume: return "barge_volume";
        case ColumnRole::staffing_cost: return "staffing_cost";
        case ColumnRole::credit_outstanding: return "credit_outstanding";
        case ColumnRole::credit_interest: return "credit_interest";
        case ColumnRole::credit_repayment: return "credit_repayment";
        case ColumnRole::owner_funds: return "owner_funds";
        case ColumnRole::subsidies: return "subsidies";
        case ColumnRole::cash_balance: return "cash_balance";
        case ColumnRole::ecology_cost: return "ecology_cost";
        case ColumnRole::engineering_cost: return "engineering_cost";
    }
    return "column";
}

constexpr std::array<std::string_view, 9> environment_series_names{
    "exchange_rate", "tax_rate", "fuel_price", "electricity_tariff", "inflation_rate",
    "raw_material_price", "product_price", "equipment_price", "productivity"};

constexpr std::array<ColumnRole, 6> finance_roles{ColumnRole::credit_outstanding, ColumnRole::credit_interest,
                                                  ColumnRole::credit_repayment,   ColumnRole::owner_funds,
                                                  ColumnRole::subsidies,          ColumnRole::cash_balance};

ColumnRole role_in_block(Block block, std::size_t local, std::size_t block_size) {
    switch (block) {
        case Block::environment: return ColumnRole::environment_series;
        case Block::investment: return ColumnRole::investment_spend;
        case Block::equipment: return ColumnRole::equipment_cost;
        case Block::depreciation: return ColumnRole::accumulated_depreciation;
        case Block::products:
            // First third sawlogs, the rest deep-processing products.
            return local < (block_size + 2) / 3 ? ColumnRole::sawlog_revenue : ColumnRole::product_revenue;
        case Block::logistics: return ColumnRole::logistics_volume;
        case Block::staffing: return ColumnRole::staffing_cost;
        case Block::finance: return finance_roles[local % finance_roles.size()];
        case Block::ecology: return ColumnRole::ecology_cost;
        case Block::engineering: return ColumnRole::engineering_cost;
        case Block::unassigned: break;
    }
    return ColumnRole::engineering_cost;
}

const BlockInfo& block_of(const std::vector<BlockInfo>& blocks, std::size_t column) {
    for (const auto& b : blocks) {
        if (column >= b.first_column && column < b.first_column + b.columns) return b;
    }
    throw IndexError("column " + std::to_string(column) + " outside block allocation");
}

bool shock_block(Block b) { return b == Block::equipment || b == Block::finance; }

// Cumulative seasonal price-level multiplier: a step when each seasonal
// interval opens, held afterwards.
std::vector<double> season_profile(const SimConfig& config) {
    std::vector<double> season(config.horizon_T, 1.0);
    double level = 1.0;
    for (std::size_t idx = 0; idx < season.size(); ++idx) {
        const Tick t = static_cast<Tick>(idx) + 1;
        if (std::find(seasonal_starts.begin(), seasonal_starts.end(), t) != seasonal_starts.end()) {
            level *= 1.0 + config.seasonal_step;
        }
        season[idx] = level;
    }
    return season;
}

// Sanctions multiplier: 1 outside the shock, 1 + (amplitude - 1) * u(t)
// inside, with u(t) in [0.75, 1.25] a latent draw shared by every affected
// column.
std::vector<double> shock_profile(const ControlOption& option, const SimConfig& config) {
    std::vector<double> shock(config.horizon_T, 1.0);
    Stream latent(config.seed, shock_stream);
    const bool sanctioned = option.asset_offset_months > 0;
    for (Tick t = shock_first_tick; t <= shock_last_tick; ++t) {
        // Drawn for every option so the latent path depends on the seed only.
        const double u = 0.75 + 0.5 * latent.uniform();
        if (sanctioned && static_cast<std::size_t>(t) <= shock.size()) {
            shock[static_cast<std::size_t>(t - 1)] = 1.0 + (config.shock_amplitude - 1.0) * u;
        }
    }
    return shock;
}

struct DebtState {
    double outstanding = 0.0;
    double repayment = 0.0;
};

// Equal-principal amortization starting with product sales.
DebtState debt_at(double credit, Tick products_start, Tick t) {
    DebtState d{credit, 0.0};
    if (t >= products_start) {
        const double paid = static_cast<double>(t - products_start + 1) / amortization_months;
        d.outstanding = credit * std::max(0.0, 1.0 - paid);
        d.repayment = paid <= 1.0 ? credit / amortization_months : 0.0;
    }
    return d;
}

}  // namespace

// Aggregate cash position: opening credit and owner funds, plus revenue and
// subsidies, minus capital spend, operating cost and debt service. This is
// where the scale parameters of an option (credit, rate, volume) interact.
std::vector<double> cash_position(const ControlOption& option, const SimConfig& config,
                                  const EnvironmentTimeline& env, const std::vector<double>& season) {
    const double volume_scale = option.logging_volume / baseline_logging_volume;
    const double credit = option.credit_share / 100.0 * project_cost;
    const auto products_start = static_cast<Tick>(option.products_sale_start);
    const auto sawlog_start = static_cast<Tick>(option.sawlog_sale_start);
    const Tick capex_first = 1 + option.asset_offset_months;
    const Tick capex_last = capex_first + capex_months - 1;

    std::vector<double> cash(config.horizon_T);
    double balance = credit + option.owner_share / 100.0 * project_cost;
    for (std::size_t idx = 0; idx < cash.size(); ++idx) {
        const Tick t = static_cast<Tick>(idx) + 1;
        const double price_level = env.product_price[idx] / env.product_price.front() * (1.0 + base_inflation_monthly);
        const auto debt = debt_at(credit, products_start, t);
        double flow = option.subsidy_share / 100.0 * required_subsidy_monthly;
        if (t >= sawlog_start) {
            flow += 6.0e7 * volume_scale * price_level * (env.export_ban_active[idx] ? export_ban_price_factor : 1.0);
        }
        if (t >= products_start) {
            flow += 1.8e8 * volume_scale * price_level;
        }
        if (t >= capex_first && t <= capex_last) {
            flow -= project_cost / capex_months * env.equipment_price[idx] / (1.0e6 * price_level);
        }
        flow -= 9.0e7 * volume_scale * price_level * season[idx] / season.front();
        flow -= debt.outstanding * option.rate / 1200.0 + debt.repayment;
        balance += flow;
        cash[idx] = balance;
    }
    return cash;
}

void ControlOption::validate() const {
    if (id < 1) throw ConfigError("option id must be >= 1");
    for (double pct : {credit_share, rate, owner_share, subsidy_share}) {
        if (!(pct >= 0.0) || !std::isfinite(pct)) throw ConfigError("option percentages must be finite and >= 0");
    }
    if (sawlog_sale_start < 1 || products_sale_start < 1) throw ConfigError("sale-start months must be >= 1");
    if (asset_offset_months < 0) throw ConfigError("asset_offset_months must be >= 0");
    if (!(logging_volume > 0.0) || !std::isfinite(logging_volume)) throw ConfigError("logging_volume must be > 0");
}

std::vector<ControlOption> builtin_options() {
    // id, credit %, rate %, owner %, subsidy %, sawlog start, products start, asset offset, volume
    return {
        {1, 100.0, 10.0, 0.0, 33.0, 5, 21, 0, 800.0},
        {2, 63.0, 10.0, 37.0, 100.0, 10, 21, 0, 800.0},
        {3, 63.0, 10.0, 37.0, 100.0, 10, 21, 5, 800.0},
        {4, 126.0, 13.0, 0.0, 100.0, 10, 27, 5, 800.0},
        {5, 112.0, 13.0, 0.0, 100.0, 10, 27, 5, 800.0},
        {6, 112.0, 13.0, 0.0, 100.0, 10, 27, 5, 1000.0},
    };
}

ControlOption builtin_option(int id) {
    if (id < 1 || id > 6) {
        throw ConfigError("option id must be in 1..6, got " + std::to_string(id));
    }
    return builtin_options()[static_cast<std::size_t>(id - 1)];
}

void SimConfig::validate(const ControlOption& option) const {
    option.validate();
    if (n_parameters < 20) {
        throw ConfigError("n_parameters must be >= 20, got " + std::to_string(n_parameters));
    }
    if (horizon_T < static_cast<std::size_t>(option.products_sale_start)) {
        throw ConfigError("horizon < products_sale_start (" + std::to_string(option.products_sale_start) + ")");
    }
    if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) throw ConfigError("noise_scale must be > 0");
    if (!(shock_amplitude > 0.0) || !std::isfinite(shock_amplitude)) {
        throw ConfigError("shock_amplitude must be > 0");
    }
    if (!(seasonal_step > -1.0) || !std::isfinite(seasonal_step)) {
        throw ConfigError("seasonal_step must be > -1");
    }
}

int month_of_year(Tick t) {
    const auto m = static_cast<int>(((t - 1) % 12 + 12) % 12);
    return m + 1;
}

bool navigation_open(Tick t) {
    const int m = month_of_year(t);
    return m >= 5 && m <= 9;
}

EnvironmentTimeline environment_timeline(const ControlOption& option, const SimConfig& config) {
    const std::size_t horizon = config.horizon_T;
    EnvironmentTimeline env;
    auto resize = [horizon](auto& v) { v.assign(horizon, {}); };
    resize(env.exchange_rate);
    resize(env.tax_rate);
    resize(env.fuel_price);
    resize(env.electricity_tariff);
    resize(env.inflation_rate);
    resize(env.raw_material_price);
    resize(env.product_price);
    resize(env.equipment_price);
    resize(env.productivity);
    resize(env.sanctions_active);
    resize(env.export_ban_active);
    resize(env.river_navigation_open);

    const auto season = season_profile(config);
    const auto shock = shock_profile(option, config);
    const bool export_ban = option.sawlog_sale_start > unrestricted_sawlog_start;
    const bool sanctioned = option.asset_offset_months > 0;

    double price_level = 1.0;
    double prev_season = 1.0;
    for (std::size_t idx = 0; idx < horizon; ++idx) {
        const Tick t = static_cast<Tick>(idx) + 1;
        // The seasonal step shows up as a one-month inflation spike.
        const double inflation = (1.0 + base_inflation_monthly) * season[idx] / prev_season - 1.0;
        prev_season = season[idx];
        price_level *= 1.0 + inflation;

        env.inflation_rate[idx] = inflation;
        env.exchange_rate[idx] = 75.0 * std::sqrt(price_level);
        env.tax_rate[idx] = 0.2;
        env.fuel_price[idx] = 50.0 * price_level;
        env.electricity_tariff[idx] = 4.0 * price_level;
        env.raw_material_price[idx] = 1500.0 * price_level;
        env.product_price[idx] = 12000.0 * price_level;
        env.equipment_price[idx] = 1.0e6 * price_level * shock[idx];
        env.productivity[idx] = 1.0 + 0.003 * static_cast<double>(t - 1);
        env.sanctions_active[idx] = sanctioned && t >= shock_first_tick && t <= shock_last_tick;
        env.export_ban_active[idx] = export_ban;
        env.river_navigation_open[idx] = navigation_open(t);
    }
    return env;
}

std::vector<BlockInfo> describe_blocks(std::size_t n_parameters) {
    std::vector<BlockInfo> blocks;
    blocks.reserve(block_count);
    int cumulative = 0;
    std::size_t prev_boundary = 0;
    for (int b = 0; b < block_count; ++b) {
        cumulative += block_ratio[static_cast<std::size_t>(b)];
        const std::size_t boundary = n_parameters * static_cast<std::size_t>(cumulative) / 100;
        const auto block = static_cast<Block>(b);
        blocks.push_back({block, std::string(block_name(block)), boundary - prev_boundary, prev_boundary});
        prev_boundary = boundary;
    }
    return blocks;
}

ColumnRole column_role(const std::vector<BlockInfo>& blocks, std::size_t column) {
    const auto& b = block_of(blocks, column);
    return role_in_block(b.block, column - b.first_column, b.columns);
}

TimeSeriesPanel simulate(const ControlOption& option, const SimConfig& config) {
    config.validate(option);
    const auto env = environment_timeline(option, config);
    const auto blocks = describe_blocks(config.n_parameters);
    const std::size_t horizon = config.horizon_T;
    const double volume_scale = option.logging_volume / baseline_logging_volume;
    const double credit = option.credit_share / 100.0 * project_cost;
    const auto products_start = static_cast<Tick>(option.products_sale_start);
    const auto sawlog_start = static_cast<Tick>(option.sawlog_sale_start);

    const auto season = season_profile(config);
    const auto shock = shock_profile(option, config);
    const auto cash = cash_position(option, config, env, season);

    std::vector<ParameterMeta> meta;
    meta.reserve(config.n_parameters);
    std::vector<std::vector<double>> columns;
    columns.reserve(config.n_parameters);
    std::map<std::string, std::size_t> role_counter;

    for (const auto& b : blocks) {
        for (std::size_t local = 0; local < b.columns; ++local) {
            const std::size_t column = b.first_column + local;
            const ColumnRole role = role_in_block(b.block, local, b.columns);
            Stream stream(config.seed, column + 1);
            const double base = 0.5 + stream.uniform();  // per-column magnitude in [0.5, 1.5)

            std::string slug(role_slug(role));
            std::size_t env_series = 0;
            if (role == ColumnRole::environment_series) {
                env_series = local % environment_series_names.size();
                slug = "env_" + std::string(environment_series_names[env_series]);
            }
            const std::string prefix = "b" + std::to_string(static_cast<int>(b.block)) + "_" + slug;
            const std::size_t ordinal = ++role_counter[prefix];
            meta.push_back({column + 1, prefix + "_" + std::to_string(ordinal), b.block});

            // Depreciation schedule per column, shifted by the asset offset.
            const Tick purchase = 1 + static_cast<Tick>((local * 5) % 12) + option.asset_offset_months;
            const Tick useful_life = 72 + 12 * static_cast<Tick>(local % 3);

            std::vector<double> values(horizon);
            for (std::size_t idx = 0; idx < horizon; ++idx) {
                const Tick t = static_cast<Tick>(idx) + 1;
                const double trend = std::pow(1.0 + base_inflation_monthly, static_cast<double>(t));
                double v = 0.0;
                switch (role) {
                    case ColumnRole::environment_series: {
                        switch (env_series) {
                            case 0: v = env.exchange_rate[idx]; break;
                            case 1: v = env.tax_rate[idx]; break;
                            case 2: v = env.fuel_price[idx]; break;
                            case 3: v = env.electricity_tariff[idx]; break;
                            case 4: v = env.inflation_rate[idx]; break;
                            case 5: v = env.raw_material_price[idx]; break;
                            case 6: v = env.product_price[idx]; break;
                            case 7: v = env.equipment_price[idx]; break;
                            default: v = env.productivity[idx]; break;
                        }
                        v *= base;
                        break;
                    }
                    case ColumnRole::investment_spend:
                        v = 4.0e7 * base * (1.0 + 0.2 * std::exp(-static_cast<double>(t - 1) / 24.0));
                        break;
                    case ColumnRole::equipment_cost:
                        v = 2.5e6 * base * volume_scale * (1.0 + 0.002 * static_cast<double>(t - 1)) * trend;
                        break;
                    case ColumnRole::accumulated_depreciation:
                        if (t >= purchase) {
                            v = 1.0e6 * base * static_cast<double>(std::min(t - purchase + 1, useful_life));
                        }
                        break;
                    case ColumnRole::sawlog_revenue:
                        if (t >= sawlog_start) {
                            v = 40.0 * base * volume_scale * env.raw_material_price[idx] *
                                (env.export_ban_active[idx] ? export_ban_price_factor : 1.0);
                        }
                        break;
                    case ColumnRole::product_revenue:
                        if (t >= products_start) {
                            v = 15.0 * base * volume_scale * env.product_price[idx];
                        }
                        break;
                    case ColumnRole::logistics_volume:
                        if (env.river_navigation_open[idx]) {
                            v = 1.6e5 * base * volume_scale;
                        }
                        break;
                    case ColumnRole::staffing_cost:
                        v = 3.0e6 * base * volume_scale * trend * season[idx];
                        break;
                    case ColumnRole::credit_outstanding:
                    case ColumnRole::credit_interest:
                    case ColumnRole::credit_repayment: {
                        const auto debt = debt_at(credit, products_start, t);
                        if (role == ColumnRole::credit_outstanding) v = debt.outstanding;
                        if (role == ColumnRole::credit_interest) v = debt.outstanding * option.rate / 1200.0;
                        if (role == ColumnRole::credit_repayment) v = debt.repayment;
                        v *= base;
                        break;
                    }
                    case ColumnRole::owner_funds:
                        v = base * option.owner_share / 100.0 * project_cost / static_cast<double>(horizon);
                        break;
                    case ColumnRole::subsidies:
                        v = base * option.subsidy_share / 100.0 * required_subsidy_monthly;
                        break;
                    case ColumnRole::cash_balance:
                        v = base * cash[idx];
                        break;
                    case ColumnRole::ecology_cost:
                        v = 5.0e5 * base * (1.0 + 0.001 * static_cast<double>(t - 1));
                        break;
                    case ColumnRole::engineering_cost:
                        v = 8.0e5 * base * (1.0 + 0.001 * static_cast<double>(t - 1));
                        break;
                }
                // Environment, sawlog and product columns already carry the
                // season through the price series.
                if (shock_block(b.block)) v *= shock[idx];
                // Noise is drawn for every cell so the stream never depends on gating.
                const double z = stream.normal();
                values[idx] = v * std::max(1.0 + config.noise_scale * z, 1e-3);
            }
            columns.push_back(std::move(values));
        }
    }
    return TimeSeriesPanel(std::move(meta), 1, std::move(columns));
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
    T out{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("invalid value '" + text + "' for key '" + key + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) throw ConfigError("non-finite value for key '" + key + "'");
    }
    return out;
}

}  // namespace

void apply_scenario_config(std::istream& in, ControlOption& option, SimConfig& config) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        }
        if (key == "n_parameters") config.n_parameters = parse_value<std::size_t>(key, value);
        else if (key == "horizon_T") config.horizon_T = parse_value<std::size_t>(key, value);
        else if (key == "seed") config.seed = parse_value<std::uint64_t>(key, value);
        else if (key == "noise_scale") config.noise_scale = parse_value<double>(key, value);
        else if (key == "shock_amplitude") config.shock_amplitude = parse_value<double>(key, value);
        else if (key == "seasonal_step") config.seasonal_step = parse_value<double>(key, value);
        else if (key == "id") option.id = parse_value<int>(key, value);
        else if (key == "credit_share") option.credit_share = parse_value<double>(key, value);
        else if (key == "rate") option.rate = parse_value<double>(key, value);
        else if (key == "owner_share") option.owner_share = parse_value<double>(key, value);
        else if (key == "subsidy_share") option.subsidy_share = parse_value<double>(key, value);
        else if (key == "sawlog_sale_start") option.sawlog_sale_start = parse_value<int>(key, value);
        else if (key == "products_sale_start") option.products_sale_start = parse_value<int>(key, value);
        else if (key == "asset_offset_months") option.asset_offset_months = parse_value<int>(key, value);
        else if (key == "logging_volume") option.logging_volume = parse_value<double>(key, value);
        else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
}

}  // namespace corradapt
