#pragma once

#include "fogsim/report.hpp"
#include "fogsim/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim::sweep {

enum class Axis { Apps, DeadlineVariation, FreeResource, Battery, Fluctuation };

std::optional<Axis> parse_axis(std::string_view name) noexcept;
std::string_view to_string(Axis axis) noexcept;

/// A grid point: `label` is what lands in the axis_value column.
struct Cell {
    std::string label;
    double value = 0.0;
};

/// apps: 70..560 step 70; deadline_variation: 10..80%; free_resource: UP1-UP6;
/// battery: BA1-BA6; fluctuation: AF1-AF9.
std::vector<Cell> cells(Axis axis);

/// The base scenario with the axis parameter set to the cell's value.
///   UPk  native utilisation drawn from [10(k-1)%, 10k%]
///   BAk  initial battery drawn from [15(k-1)%, 15k%]
///   AFk  utilisation swings drawn from [0%, 10% + 5(k-1)%]
Scenario apply(const Scenario& base, Axis axis, const Cell& cell);

struct Selection {
    std::vector<policy::PolicyKind> policies{policy::PolicyKind::MultiCriteria, policy::PolicyKind::Baseline};
    std::vector<bool> reservation{true, false};
};

/// Every policy x reservation run of one scenario, in selection order.
std::vector<MetricsReport> run_scenario(const Scenario& scenario, const Selection& selection);

struct Options {
    Axis axis = Axis::Apps;
    std::uint32_t seeds = 20;
    std::filesystem::path out_dir = "out";
    std::uint32_t workers = 1;
    Selection selection;
    std::string fingerprint; // identifies the config; part of each cell file name
};

/// Seed rows followed by a mean row for every policy x reservation pair of
/// one cell. Seeds are base.seed, base.seed + 1, ...
std::vector<report::Row> run_cell(const Scenario& base, Axis axis, const Cell& cell, std::uint32_t seeds,
                                  const Selection& selection);

struct Result {
    std::filesystem::path csv;
    std::vector<report::Row> rows;
    std::size_t cells_run = 0;
    std::size_t cells_reused = 0;
};

/// Runs the whole grid. Finished cells are kept under `<out>/cells/` and are
/// reused when the sweep is re-invoked with the same output directory.
Result run(const Scenario& base, const Options& options);

} // namespace fogsim::sweep
