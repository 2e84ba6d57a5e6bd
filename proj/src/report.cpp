#include "fogsim/report.hpp"
#include "fogsim/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>

namespace fogsim::report {

namespace {

std::string number(double v)
{
    if (v == 0.0) return "0"; // avoids "-0"
    return fmt::format("{:.12g}", v);
}

std::optional<double> read_number(std::string_view s)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace

Row make_row(const MetricsReport& r, std::string axis_value)
{
    Row row;
    row.scenario_id = r.scenario_id;
    row.axis_value = std::move(axis_value);
    row.policy = r.policy;
    row.reservation = r.reservation;
    row.seed = std::to_string(r.seed);
    row.avg_delay_s = r.avg_delay;
    row.total_delay_s = r.total_delay;
    row.max_delay_s = r.max_delay;
    row.min_delay_s = r.min_delay;
    row.avg_processing_s = r.avg_processing;
    row.total_cost_usd = r.total_cost;
    row.sla_violation_pct = r.sla_violation_pct;
    row.penalty_usd = r.penalty_cost;
    return row;
}

Row mean_row(std::span<const Row> rows)
{
    if (rows.empty()) throw Error(ErrorKind::Division, "mean of no rows");
    Row out = rows.front();
    out.seed = "mean";
    double* fields[] = {&out.avg_delay_s,      &out.total_delay_s,  &out.max_delay_s,
                        &out.min_delay_s,      &out.avg_processing_s, &out.total_cost_usd,
                        &out.sla_violation_pct, &out.penalty_usd};
    for (double* f : fields) *f = 0.0;
    for (const auto& r : rows) {
        out.avg_delay_s += r.avg_delay_s;
        out.total_delay_s += r.total_delay_s;
        out.max_delay_s += r.max_delay_s;
        out.min_delay_s += r.min_delay_s;
        out.avg_processing_s += r.avg_processing_s;
        out.total_cost_usd += r.total_cost_usd;
        out.sla_violation_pct += r.sla_violation_pct;
        out.penalty_usd += r.penalty_usd;
    }
    for (double* f : fields) *f /= static_cast<double>(rows.size());
    return out;
}

std::string csv_header()
{
    std::string out;
    for (auto c : csv_columns) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

std::string format_row(const Row& r)
{
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", r.scenario_id, r.axis_value, r.policy,
                       r.reservation ? "on" : "off", r.seed, number(r.avg_delay_s), number(r.total_delay_s),
                       number(r.max_delay_s), number(r.min_delay_s), number(r.avg_processing_s),
                       number(r.total_cost_usd), number(r.sla_violation_pct), number(r.penalty_usd));
}

std::optional<Row> parse_row(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (cells.size() != csv_columns.size()) return std::nullopt;
    if (cells[3] != "on" && cells[3] != "off") return std::nullopt;

    Row r;
    r.scenario_id = cells[0];
    r.axis_value = cells[1];
    r.policy = cells[2];
    r.reservation = cells[3] == "on";
    r.seed = cells[4];
    double* fields[] = {&r.avg_delay_s,      &r.total_delay_s,  &r.max_delay_s,
                        &r.min_delay_s,      &r.avg_processing_s, &r.total_cost_usd,
                        &r.sla_violation_pct, &r.penalty_usd};
    for (std::size_t i = 0; i < 8; ++i) {
        const auto v = read_number(cells[5 + i]);
        if (!v) return std::nullopt;
        *fields[i] = *v;
    }
    return r;
}

std::string to_csv(std::span<const Row> rows)
{
    std::string out = csv_header() + '\n';
    for (const auto& r : rows) out += format_row(r) + '\n';
    return out;
}

std::string to_json(std::span<const MetricsReport> reports)
{
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["scenario_id"] = r.scenario_id;
        j["policy"] = r.policy;
        j["reservation"] = r.reservation;
        j["seed"] = r.seed;
        j["empty"] = r.empty;
        j["avg_delay_s"] = r.avg_delay;
        j["total_delay_s"] = r.total_delay;
        j["max_delay_s"] = r.max_delay;
        j["min_delay_s"] = r.min_delay;
        j["avg_processing_s"] = r.avg_processing;
        j["ctu_avg_s"] = r.ctu_avg;
        j["cta_s"] = r.cta;
        j["cta_avg_s"] = r.cta_avg;
        j["tc_usd"] = r.tc;
        j["total_cost_usd"] = r.total_cost;
        j["sla_violation_pct"] = r.sla_violation_pct;
        j["penalty_usd"] = r.penalty_cost;
        const auto& s = r.stats;
        j["stats"] = {
            {"home_requests", s.home_requests},
            {"violated_requests", s.violated_requests},
            {"migrations", s.migrations},
            {"violation_flags", s.violation_flags},
            {"deadline_changes", s.deadline_changes},
            {"peer_requests", s.peer_requests},
            {"peer_admitted", s.peer_admitted},
            {"peer_declined", s.peer_declined},
            {"reservation_gate_breaches", s.reservation_gate_breaches},
            {"submitted_work_mi", s.submitted_work},
            {"completed_work_mi", s.completed_work},
            {"max_capacity_excess_mips", s.max_capacity_excess},
            {"mean_cpu_fluctuation_pct", s.mean_cpu_fluctuation_pct},
            {"makespan_s", s.makespan},
        };
        runs.push_back(std::move(j));
    }
    return runs.dump(2) + '\n';
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Config, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::Config, "cannot write '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace fogsim::report
