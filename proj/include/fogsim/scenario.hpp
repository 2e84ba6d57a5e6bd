#pragma once

#include "fogsim/core_model.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/network.hpp"
#include "fogsim/policy.hpp"
#include "fogsim/scoring.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fogsim {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Explicitly configured node; when any are given they replace the generated
/// fleet entirely.
struct NodeSpec {
    std::string name;
    std::uint32_t cluster = 0;
    Tier tier = Tier::FogDevice;
    Mips mips = 1000.0;
    double native_utilisation = 0.0;
    double caf = 1.0;
    double distance_m = 0.0;
    double max_supported_distance_m = 50.0;
    double battery_pct = 100.0;
    std::vector<double> discharge_rates;
    bool mains_powered = false;
    BitsPerSecond bandwidth_bps = 1e5;
};

struct FleetSpec {
    std::uint32_t clusters = 1;
    std::uint32_t devices_per_cluster = 20;
    Range device_mips{2000.0, 6000.0};
    Mips server_mips = 10000.0;
    BitsPerSecond device_bandwidth_bps = 1e5;
    BitsPerSecond server_bandwidth_bps = 1e6;
    BitsPerSecond access_point_bandwidth_bps = 1e6;
    Range caf_pct{50.0, 130.0};           // CPU availability fluctuation factor
    Range distance_m{5.0, 40.0};
    double max_supported_distance_m = 50.0;
    Range battery_pct{20.0, 90.0};
    Range native_utilisation{0.1, 0.5};   // base native load per device
    Range native_discharge_pct_per_min{0.05, 0.25};
    double task_discharge_pct_per_min = 0.1; // added per running Fog task
    std::vector<NodeSpec> nodes;
};

struct NetworkSpec {
    double medium_throughput = 1.0;
    Bits frame_length_bits = 12000.0;
    BitsPerSecond transmission_rate_bps = 54e6;
    Seconds const_overhead_s = 0.0005;
    Seconds queuing_delay_s = 0.0;
    network::Queuing queuing = network::Queuing::Ignored;
    double cloud_distance_km = 1000.0;
    BitsPerSecond cloud_bandwidth_bps = 1e6;
    Bits control_message_bits = 4096.0;
};

/// Explicit task; when any are given they replace the generated workload.
struct TaskSpec {
    std::uint64_t app = 0;
    Mips length = 3000.0;
    double data_bytes = 5120.0;
    Seconds deadline = 4.0;
    Seconds submit = 0.0;
    bool cloud_storage = false;
};

struct WorkloadSpec {
    std::uint32_t app_count = 70;
    std::uint32_t tasks_per_app = 10;
    Mips task_length = 3000.0;
    Mips subtask_length = 500.0; // progress survives migration in whole subtasks
    Range data_bytes{5120.0, 10240.0};
    Range deadline_s{4.0, 10.0};
    Seconds min_deadline_s = 4.0;
    Seconds arrival_window_s = 1800.0;
    double response_size_ratio = 0.5;
    double cloud_storage_fraction = 0.1;
    std::vector<TaskSpec> tasks;
};

/// Scripted change of one node's native utilisation.
struct UtilisationEvent {
    Seconds time = 0.0;
    std::string node;
    double native_utilisation = 0.0;
};

struct DynamicsSpec {
    Range utilisation_variation_pct{10.0, 40.0};
    Seconds fluctuation_period_s = 2.0; // 0 disables the random process
    double deadline_variation_pct = 30.0;
    std::uint32_t deadline_changes_per_task = 1;
    Seconds min_remaining_deadline_s = 0.5;
    Seconds reservation_window_s = 60.0;
    double peer_load_factor = 0.5; // peer-cluster requests per home task
    std::uint32_t max_migrations_per_task = 2;
    Seconds max_sim_time_s = 1e5;
    std::vector<UtilisationEvent> utilisation_events;
};

struct PolicySpec {
    std::vector<policy::PolicyKind> policies{policy::PolicyKind::MultiCriteria, policy::PolicyKind::Baseline};
    std::vector<bool> reservation{true, false};
    policy::Feasibility feasibility = policy::Feasibility::Literal;
    scoring::Options scoring;
    double min_free_fraction = 0.01;
    Seconds broker_decision_s = 0.001;
    Seconds cloud_processing_s = 0.01;
};

struct SlaSpec {
    Dollars base_penalty = 0.1;
    double penalty_rate = 0.05;
};

struct Scenario {
    std::string id = "scenario";
    std::uint64_t seed = 1;
    FleetSpec fleet;
    WorkloadSpec workload;
    DynamicsSpec dynamics;
    NetworkSpec network;
    PolicySpec policy;
    PriceBook prices;
    SlaSpec sla;
    metrics::UnitCosts unit_costs;
};

/// Throws `Error(ErrorKind::Config)` naming the first offending field.
void validate(const Scenario& scenario);

/// One policy x reservation cell of a scenario.
struct RunSettings {
    policy::PolicyKind policy = policy::PolicyKind::MultiCriteria;
    bool reservation = true;
};

} // namespace fogsim
