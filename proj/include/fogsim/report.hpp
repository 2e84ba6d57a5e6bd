#pragma once

#include "fogsim/core_model.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim::report {

inline constexpr std::array<std::string_view, 13> csv_columns{
    "scenario_id",      "axis_value",     "policy",          "reservation",
    "seed",             "avg_delay_s",    "total_delay_s",   "max_delay_s",
    "min_delay_s",      "avg_processing_s", "total_cost_usd", "sla_violation_pct",
    "penalty_usd",
};

/// One CSV line. `seed` holds the seed number or "mean".
struct Row {
    std::string scenario_id;
    std::string axis_value;
    std::string policy;
    bool reservation = false;
    std::string seed;
    double avg_delay_s = 0.0;
    double total_delay_s = 0.0;
    double max_delay_s = 0.0;
    double min_delay_s = 0.0;
    double avg_processing_s = 0.0;
    double total_cost_usd = 0.0;
    double sla_violation_pct = 0.0;
    double penalty_usd = 0.0;
};

Row make_row(const MetricsReport& report, std::string axis_value);

/// Column-wise mean of rows sharing scenario, axis value, policy and reservation.
Row mean_row(std::span<const Row> rows);

std::string csv_header();
std::string format_row(const Row& row);
std::optional<Row> parse_row(std::string_view line);

std::string to_csv(std::span<const Row> rows);

/// Full report including per-application and per-request figures and run
/// statistics.
std::string to_json(std::span<const MetricsReport> reports);

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace fogsim::report
