// fogsim command line: single runs and parameter sweeps.

#include "fogsim/config.hpp"
#include "fogsim/error.hpp"
#include "fogsim/report.hpp"
#include "fogsim/sweep.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <iostream>

namespace {

using namespace fogsim;

constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

std::string default_out_dir()
{
    const char* env = std::getenv("FOGSIM_OUT_DIR");
    return env && *env ? env : "out";
}

std::string fingerprint(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

sweep::Selection selection(const std::string& policy, const std::string& reservation, const Scenario& sc)
{
    sweep::Selection s;
    s.policies = sc.policy.policies;
    s.reservation = sc.policy.reservation;
    if (policy == "mc") s.policies = {policy::PolicyKind::MultiCriteria};
    if (policy == "baseline") s.policies = {policy::PolicyKind::Baseline};
    if (policy == "both") s.policies = {policy::PolicyKind::MultiCriteria, policy::PolicyKind::Baseline};
    if (reservation == "on") s.reservation = {true};
    if (reservation == "off") s.reservation = {false};
    if (reservation == "both") s.reservation = {true, false};
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic Fog-computing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = default_out_dir();
    std::string policy_choice;
    std::string reservation_choice;

    auto* run = app.add_subcommand("run", "run one scenario and write <id>.csv and <id>.json");
    run->add_option("config", config_path, "scenario config (JSON); 'fixtures/fd-table' is built in")->required();
    run->add_option("--out", out_dir, "output directory (default: $FOGSIM_OUT_DIR or ./out)");
    run->add_option("--policy", policy_choice)->check(CLI::IsMember({"mc", "baseline", "both"}));
    run->add_option("--reservation", reservation_choice)->check(CLI::IsMember({"on", "off", "both"}));

    std::string axis_name;
    std::uint32_t seeds = 20;
    std::uint32_t workers = 1;
    auto* sw = app.add_subcommand("sweep", "run an axis grid across seeds and write per-cell means");
    sw->add_option("config", config_path, "scenario config (JSON)")->required();
    sw->add_option("--axis", axis_name, "apps | deadline_variation | free_resource | battery | fluctuation")
        ->required();
    sw->add_option("--seeds", seeds, "seeds per cell")->check(CLI::PositiveNumber);
    sw->add_option("--out", out_dir, "output directory (default: $FOGSIM_OUT_DIR or ./out)");
    sw->add_option("--workers", workers, "concurrent cells")->check(CLI::PositiveNumber);
    sw->add_option("--policy", policy_choice)->check(CLI::IsMember({"mc", "baseline", "both"}));
    sw->add_option("--reservation", reservation_choice)->check(CLI::IsMember({"on", "off", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        const std::string text = config::read_text(config_path);
        const Scenario scenario = config::parse(text);
        const auto chosen = selection(policy_choice, reservation_choice, scenario);

        if (run->parsed()) {
            const auto reports = sweep::run_scenario(scenario, chosen);
            std::vector<report::Row> rows;
            for (const auto& r : reports) rows.push_back(report::make_row(r, "none"));
            const std::filesystem::path dir(out_dir);
            const auto csv = report::to_csv(rows);
            const auto json = report::to_json(reports);
            report::write_atomic(dir / (scenario.id + ".csv"), csv);
            report::write_atomic(dir / (scenario.id + ".json"), json);
            std::cout << csv;
            return 0;
        }

        const auto axis = sweep::parse_axis(axis_name);
        if (!axis) {
            std::cerr << "error: --axis: unknown axis '" << axis_name
                      << "' (expected apps, deadline_variation, free_resource, battery or fluctuation)\n";
            return exit_usage;
        }
        sweep::Options options;
        options.axis = *axis;
        options.seeds = seeds;
        options.out_dir = out_dir;
        options.workers = workers;
        options.selection = chosen;
        options.fingerprint = fingerprint(text);
        const auto result = sweep::run(scenario, options);
        std::cerr << fmt::format("{} cells run, {} reused -> {}\n", result.cells_run, result.cells_reused,
                                 result.csv.string());
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Usage ? exit_usage : exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
