#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace fogsim {

using Seconds = double;
using Minutes = double;
using Mips = double;
using Bits = double;
using BitsPerSecond = double;
using Dollars = double;

struct NodeId {
    std::uint32_t value = 0;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class Tier { FogDevice, FogServer, Cloud };

/// History-driven reservation bookkeeping carried by each node.
struct ReservationState {
    Mips reserved_value = 0.0;       // R_v
    Mips last_app_request = 0.0;     // L_AR
    std::uint64_t total_apps_processed = 0; // T_AP
    Mips required_reservation = 0.0; // Req_res
    double utilisation_after_reservation = 0.0; // CU_z + Req_res / CPU_s
};

struct FogNode {
    NodeId id;
    std::string name;
    Tier tier = Tier::FogDevice;
    Mips cpu_capacity = 1.0;                 // CPU_s
    double free_resource_fraction = 1.0;     // F_rs
    double native_utilisation = 0.0;         // CU_z
    double battery_charge = 100.0;           // A_b, percent
    std::vector<double> discharge_rates;     // A_dr, percent per minute
    bool mains_powered = false;
    double distance = 0.0;                   // G_d, metres
    double max_supported_distance = 1.0;     // SD_max, metres
    std::vector<double> fluctuation_history; // available-CPU fraction per interval
    double caf_score = 1.0;                  // CAF_s
    ReservationState reservation;
};

/// Returns one message per violated invariant; empty means valid.
std::vector<std::string> validate(const FogNode& node);

struct Task {
    std::uint64_t id = 0;
    std::uint64_t app_id = 0;
    Mips length = 1.0;          // J_s / t_i, in MI
    Mips completed_work = 0.0;  // t_j
    Bits data_size = 1.0;       // D_s
    Seconds deadline = 1.0;     // T_d, relative to submit_time
    Seconds submit_time = 0.0;

    Mips remaining_work() const noexcept { return length - completed_work; } // t_n
};

struct Application {
    std::uint64_t id = 0;
    std::uint64_t user_id = 0;
    std::vector<Task> tasks;
    double deadline_variation = 0.0; // percent
};

struct NetworkLink {
    BitsPerSecond bandwidth_a = 1.0;      // b_w at C_A
    BitsPerSecond bandwidth_b = 1.0;      // b_w at C_B
    BitsPerSecond capacity = 1.0;         // C
    std::uint32_t sharing_users = 1;      // N_u
    double medium_throughput = 1.0;       // M_th
    Seconds queuing_delay = 0.0;          // Q_d
    Seconds transmission_delay = 0.0;     // T_d
    Seconds propagation_delay = 0.0;      // P_d
    Seconds processing_delay = 0.0;       // PR_d
    Bits frame_length = 12000.0;          // L
    BitsPerSecond transmission_rate = 54e6; // T_r
    Seconds const_overhead = 0.0;         // A_n
};

struct NetworkPath {
    std::vector<NetworkLink> links;

    std::size_t hop_count() const noexcept { return links.size(); }            // h
    std::size_t intermediate_link_count() const noexcept { return links.size(); } // k
};

struct ScoreCard {
    NodeId node_id;
    Seconds execution_time = 0.0;       // E_t
    Seconds migration_time = 0.0;       // M_t
    Seconds response_time = 0.0;        // R_t
    Minutes availability = 0.0;         // A_v
    double throughput_by_distance = 0.0; // T_bd / t_h
    Seconds completion_time = 0.0;      // C_t
    double availability_score = 0.0;   // A_s
};

struct PriceBook {
    Dollars connectivity_unit = 0.08; // CP, per million minutes
    Dollars messaging_unit = 1.00;    // MP, per million messages
    Dollars registry_unit = 1.25;     // SP, per million operations
    Dollars processing_unit = 0.15;   // PP, per million rules
    double data_unit_kb = 5.0;        // U
    double server_divisor = 2.0;      // FS_x
    double device_divisor = 3.0;      // FD_x
};

/// Per-tier usage; the three-element arrays are indexed by `Tier`.
struct UsageLedger {
    struct PerTier {
        Minutes connectivity_minutes = 0.0;
        std::vector<double> message_kb;
        double registry_kb = 0.0;
        std::vector<double> processing_kb;
    };

    PerTier cloud;
    PerTier server;
    PerTier device;

    PerTier& tier(Tier t) noexcept;
    const PerTier& tier(Tier t) const noexcept;
    void merge(const UsageLedger& other);
};

/// Packet counts and leg times for one user request. Response counters are
/// tracked separately from forward counters; the engine mirrors them.
struct TrafficCounters {
    std::uint64_t user_packets = 0;                    // P_u
    std::uint64_t cloud_packets = 0;                   // PC_u
    std::uint64_t cloud_response_packets = 0;          // PC_u^r
    std::uint64_t fog_response_packets = 0;            // (P_u - PC_u)^r
    std::uint64_t internal_fog_packets = 0;            // P_ip^Fog
    std::uint64_t internal_fog_response_packets = 0;   // P_ip^rFog
    std::uint64_t internal_cloud_packets = 0;          // P_ip^Cloud
    std::uint64_t internal_cloud_response_packets = 0; // P_ip^rCloud

    Seconds user_send_time = 0.0;               // tP_u
    Seconds cloud_send_time = 0.0;              // tPC_u
    Seconds cloud_response_time = 0.0;          // tPC_u^r
    Seconds fog_response_time = 0.0;            // (tP_u - tPC_u)^r
    Seconds internal_fog_time = 0.0;            // tP_ip^Fog
    Seconds internal_fog_response_time = 0.0;   // tP_ip^rFog
    Seconds internal_cloud_time = 0.0;          // tP_ip^Cloud
    Seconds internal_cloud_response_time = 0.0; // tP_ip^rCloud

    Seconds device_processing_time = 0.0; // tP_fd
    Seconds server_processing_time = 0.0; // tP_fs
    Seconds cloud_processing_time = 0.0;  // tP_c
};

struct SlaTerms {
    Dollars base_penalty = 0.0; // alpha
    double penalty_rate = 0.0;  // beta, dollars per second
    Seconds delay_time = 0.0;   // DT
};

/// Engine-side bookkeeping that backs the simulator invariants.
struct RunStats {
    std::uint64_t home_requests = 0;
    std::uint64_t violated_requests = 0;
    std::uint64_t migrations = 0;
    std::uint64_t violation_flags = 0;
    std::uint64_t deadline_changes = 0;
    std::uint64_t peer_requests = 0;
    std::uint64_t peer_admitted = 0;
    std::uint64_t peer_declined = 0;
    std::uint64_t reservation_gate_breaches = 0;
    Mips submitted_work = 0.0;
    Mips completed_work = 0.0;
    Mips max_capacity_excess = 0.0; // max over events of allocated + native - capacity
    double mean_cpu_fluctuation_pct = 0.0;
    Seconds makespan = 0.0;
};

struct MetricsReport {
    std::string scenario_id;
    std::string policy;
    bool reservation = false;
    std::uint64_t seed = 0;

    Seconds avg_delay = 0.0;
    Seconds total_delay = 0.0;
    Seconds max_delay = 0.0;
    Seconds min_delay = 0.0;
    Seconds avg_processing = 0.0;
    bool empty = true; // no requests: averages reported as 0

    Seconds ctu_avg = 0.0;
    std::vector<Seconds> cta; // per application
    Seconds cta_avg = 0.0;

    std::vector<Dollars> tc_req;
    Dollars tc = 0.0;          // time-weighted cost
    Dollars total_cost = 0.0;  // sum of per-application AT_cost

    double sla_violation_pct = 0.0;
    Dollars penalty_cost = 0.0;

    RunStats stats;
};

} // namespace fogsim
