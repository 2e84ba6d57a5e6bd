#include "fogsim/sweep.hpp"
#include "fogsim/engine.hpp"
#include "fogsim/error.hpp"

#include <fmt/format.h>

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fogsim::sweep {

std::optional<Axis> parse_axis(std::string_view name) noexcept
{
    if (name == "apps") return Axis::Apps;
    if (name == "deadline_variation") return Axis::DeadlineVariation;
    if (name == "free_resource") return Axis::FreeResource;
    if (name == "battery") return Axis::Battery;
    if (name == "fluctuation") return Axis::Fluctuation;
    return std::nullopt;
}

std::string_view to_string(Axis axis) noexcept
{
    switch (axis) {
    case Axis::Apps: return "apps";
    case Axis::DeadlineVariation: return "deadline_variation";
    case Axis::FreeResource: return "free_resource";
    case Axis::Battery: return "battery";
    case Axis::Fluctuation: return "fluctuation";
    }
    return "?";
}

std::vector<Cell> cells(Axis axis)
{
    std::vector<Cell> out;
    auto labelled = [&](const char* prefix, int n) {
        for (int k = 1; k <= n; ++k) out.push_back({fmt::format("{}{}", prefix, k), static_cast<double>(k)});
    };
    switch (axis) {
    case Axis::Apps:
        for (int n = 70; n <= 560; n += 70) out.push_back({std::to_string(n), static_cast<double>(n)});
        break;
    case Axis::DeadlineVariation:
        for (int v = 10; v <= 80; v += 10) out.push_back({std::to_string(v), static_cast<double>(v)});
        break;
    case Axis::FreeResource: labelled("UP", 6); break;
    case Axis::Battery: labelled("BA", 6); break;
    case Axis::Fluctuation: labelled("AF", 9); break;
    }
    return out;
}

Scenario apply(const Scenario& base, Axis axis, const Cell& cell)
{
    Scenario s = base;
    const double k = cell.value;
    switch (axis) {
    case Axis::Apps: s.workload.app_count = static_cast<std::uint32_t>(cell.value); break;
    case Axis::DeadlineVariation: s.dynamics.deadline_variation_pct = cell.value; break;
    case Axis::FreeResource: s.fleet.native_utilisation = {0.1 * (k - 1.0), 0.1 * k}; break;
    case Axis::Battery: s.fleet.battery_pct = {15.0 * (k - 1.0), 15.0 * k}; break;
    case Axis::Fluctuation: s.dynamics.utilisation_variation_pct = {0.0, 10.0 + 5.0 * (k - 1.0)}; break;
    }
    validate(s);
    return s;
}

std::vector<MetricsReport> run_scenario(const Scenario& scenario, const Selection& selection)
{
    validate(scenario);
    std::vector<MetricsReport> out;
    for (auto p : selection.policies) {
        for (bool r : selection.reservation) out.push_back(engine::run(scenario, RunSettings{p, r}));
    }
    return out;
}

std::vector<report::Row> run_cell(const Scenario& base, Axis axis, const Cell& cell, std::uint32_t seeds,
                                  const Selection& selection)
{
    const Scenario at = apply(base, axis, cell);
    const std::size_t pairs = selection.policies.size() * selection.reservation.size();
    std::vector<std::vector<report::Row>> per_pair(pairs);
    for (std::uint32_t k = 0; k < seeds; ++k) {
        Scenario s = at;
        s.seed = base.seed + k;
        const auto reports = run_scenario(s, selection);
        for (std::size_t i = 0; i < pairs; ++i) per_pair[i].push_back(report::make_row(reports[i], cell.label));
    }
    std::vector<report::Row> out;
    for (auto& rows : per_pair) {
        out.insert(out.end(), rows.begin(), rows.end());
        if (!rows.empty()) out.push_back(report::mean_row(rows));
    }
    return out;
}

namespace {

std::optional<std::vector<report::Row>> read_cell(const std::filesystem::path& path, std::size_t expected)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != report::csv_header()) return std::nullopt;
    std::vector<report::Row> rows;
    while (std::getline(in, line)) {
        auto row = report::parse_row(line);
        if (!row) return std::nullopt;
        rows.push_back(std::move(*row));
    }
    if (rows.size() != expected) return std::nullopt;
    return rows;
}

std::string selection_tag(const Selection& s)
{
    std::string tag;
    for (auto p : s.policies) tag += policy::to_string(p) == "mc" ? 'm' : 'b';
    tag += '-';
    for (bool r : s.reservation) tag += r ? '1' : '0';
    return tag;
}

} // namespace

Result run(const Scenario& base, const Options& options)
{
    if (options.seeds == 0) throw Error(ErrorKind::Usage, "--seeds must be at least 1");
    if (options.selection.policies.empty() || options.selection.reservation.empty()) {
        throw Error(ErrorKind::Usage, "empty policy or reservation selection");
    }
    const auto grid = cells(options.axis);
    for (const auto& c : grid) (void)apply(base, options.axis, c); // surface config errors before any output

    const std::size_t pairs = options.selection.policies.size() * options.selection.reservation.size();
    const std::size_t expected = pairs * (options.seeds + 1);
    const auto cell_dir = options.out_dir / "cells";
    auto cell_path = [&](const Cell& c) {
        return cell_dir / fmt::format("{}_{}_{}_s{}-{}_{}{}.csv", base.id, to_string(options.axis), c.label,
                                      base.seed, options.seeds, selection_tag(options.selection),
                                      options.fingerprint.empty() ? "" : "_" + options.fingerprint);
    };

    std::vector<std::vector<report::Row>> results(grid.size());
    std::vector<bool> reused(grid.size(), false);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (auto rows = read_cell(cell_path(grid[i]), expected)) {
            results[i] = std::move(*rows);
            reused[i] = true;
        } else {
            pending.push_back(i);
        }
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= pending.size()) return;
            const std::size_t i = pending[k];
            try {
                results[i] = run_cell(base, options.axis, grid[i], options.seeds, options.selection);
                report::write_atomic(cell_path(grid[i]), report::to_csv(results[i]));
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next = pending.size();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(pending.size(), 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    Result out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.rows.insert(out.rows.end(), results[i].begin(), results[i].end());
        (reused[i] ? out.cells_reused : out.cells_run) += 1;
    }
    out.csv = options.out_dir / fmt::format("{}_{}.csv", base.id, to_string(options.axis));
    report::write_atomic(out.csv, report::to_csv(out.rows));
    return out;
}

} // namespace fogsim::sweep
