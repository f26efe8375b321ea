#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "corradapt/panel.hpp"

namespace corradapt {

// One enterprise-development scenario. Percentages are of the project cost,
// except subsidy_share which is a percentage of the legally required subsidy.
struct ControlOption {
    int id = 1;
    double credit_share = 0.0;
    double rate = 0.0;  // annual %, on credit
    double owner_share = 0.0;
    double subsidy_share = 0.0;
    int sawlog_sale_start = 1;    // month
    int products_sale_start = 1;  // month
    int asset_offset_months = 0;
    double logging_volume = 800.0;  // thousand m^3 / year

    // Throws ConfigError on negative percentages, months < 1, or a negative offset.
    void validate() const;

    bool operator==(const ControlOption&) const = default;
};

// The six preset control options, ids 1..6.
std::vector<ControlOption> builtin_options();
// Throws ConfigError for ids outside 1..6.
ControlOption builtin_option(int id);

struct SimConfig {
    std::size_t n_parameters = 200;
    std::size_t horizon_T = 62;
    std::uint64_t seed = 1;
    double noise_scale = 0.05;       // relative sd of idiosyncratic noise
    double shock_amplitude = 1.5;    // mean level multiplier during the sanctions shock
    double seasonal_step = 0.4;      // price-level jump at the start of each seasonal interval

    // Throws ConfigError on n < 20, horizon < products_sale_start, or
    // non-positive / non-finite scales.
    void validate(const ControlOption& option) const;
};

inline constexpr Tick shock_first_tick = 32;
inline constexpr Tick shock_last_tick = 38;
inline constexpr std::array<Tick, 2> seasonal_starts{43, 56};
inline constexpr int unrestricted_sawlog_start = 5;

// Exogenous conditions per tick (index 0 is tick 1).
struct EnvironmentTimeline {
    std::vector<double> exchange_rate;
    std::vector<double> tax_rate;
    std::vector<double> fuel_price;
    std::vector<double> electricity_tariff;
    std::vector<double> inflation_rate;
    std::vector<double> raw_material_price;
    std::vector<double> product_price;
    std::vector<double> equipment_price;
    std::vector<double> productivity;
    std::vector<bool> sanctions_active;
    std::vector<bool> export_ban_active;
    std::vector<bool> river_navigation_open;

    std::size_t length() const noexcept { return exchange_rate.size(); }
};

// Calendar convention: tick 1 is January.
int month_of_year(Tick t);
bool navigation_open(Tick t);  // May through September

EnvironmentTimeline environment_timeline(const ControlOption& option, const SimConfig& config);

struct BlockInfo {
    Block block;
    std::string name;
    std::size_t columns = 0;
    std::size_t first_column = 0;  // 0-based
};

// Column allocation for n parameters: cumulative proportional split of the
// block ratio table, so counts always sum to n.
std::vector<BlockInfo> describe_blocks(std::size_t n_parameters);

// Enterprise cash position per tick (index 0 is tick 1), before noise.
std::vector<double> cash_position(const ControlOption& option, const SimConfig& config,
                                  const EnvironmentTimeline& env, const std::vector<double>& season);

// Deterministic synthetic enterprise panel, ticks 1..horizon_T.
TimeSeriesPanel simulate(const ControlOption& option, const SimConfig& config);

// Column roles within a block, exposed so tests can find gated columns.
enum class ColumnRole {
    environment_series,
    investment_spend,
    equipment_cost,
    accumulated_depreciation,
    sawlog_revenue,
    product_revenue,
    logistics_volume,
    staffing_cost,
    credit_outstanding,
    credit_interest,
    credit_repayment,
    owner_funds,
    subsidies,
    cash_balance,
    ecology_cost,
    engineering_cost,
};

ColumnRole column_role(const std::vector<BlockInfo>& blocks, std::size_t column);

// Plain-text `key = value` scenario file. Keys are SimConfig and ControlOption
// field names; `#` starts a comment. Unknown keys and unparsable values throw
// ConfigError. Only the keys present are applied.
void apply_scenario_config(std::istream& in, ControlOption& option, SimConfig& config);

}  // namespace corradapt
