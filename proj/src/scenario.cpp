#include "fogsim/scenario.hpp"
#include "fogsim/error.hpp"
#include "fogsim/pricing.hpp"

#include <cmath>
#include <set>
#include <string>

namespace fogsim {

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& why)
{
    throw Error(ErrorKind::Config, field + ": " + why);
}

void positive(double v, const char* field)
{
    if (!(v > 0.0) || !std::isfinite(v)) reject(field, "must be positive");
}

void non_negative(double v, const char* field)
{
    if (!(v >= 0.0) || !std::isfinite(v)) reject(field, "must be non-negative");
}

void range(const Range& r, const char* field, double lo, double hi)
{
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) reject(field, "must be finite");
    if (r.lo > r.hi) reject(field, "lower bound exceeds upper bound");
    if (r.lo < lo || r.hi > hi) reject(field, "outside the allowed interval");
}

} // namespace

void validate(const Scenario& s)
{
    if (s.id.empty()) reject("scenario.id", "must not be empty");
    for (char c : s.id) {
        if (c == '/' || c == '\\' || c == ',' || c == '"' || c == '\n') reject("scenario.id", "contains a reserved character");
    }

    const auto& f = s.fleet;
    const double inf = std::numeric_limits<double>::max();
    if (f.nodes.empty()) {
        if (f.clusters == 0) reject("fleet.clusters", "must be at least 1");
        if (f.devices_per_cluster == 0) reject("fleet.devices_per_cluster", "must be at least 1");
        range(f.device_mips, "fleet.device_mips", 1e-9, inf);
        range(f.caf_pct, "fleet.caf_pct", 1e-9, inf);
        range(f.distance_m, "fleet.distance_m", 0.0, f.max_supported_distance_m);
        range(f.battery_pct, "fleet.battery_pct", 0.0, 100.0);
        range(f.native_utilisation, "fleet.native_utilisation", 0.0, 0.95);
        range(f.native_discharge_pct_per_min, "fleet.native_discharge_pct_per_min", 0.0, inf);
    } else {
        std::set<std::string> names;
        for (const auto& n : f.nodes) {
            const std::string at = "fleet.nodes[" + n.name + "]";
            if (n.name.empty()) reject("fleet.nodes.name", "must not be empty");
            if (!names.insert(n.name).second) reject(at + ".name", "duplicate node name");
            if (n.tier == Tier::Cloud) reject(at + ".tier", "cloud is not a fleet tier");
            if (!(n.mips > 0.0)) reject(at + ".mips", "must be positive");
            if (!(n.native_utilisation >= 0.0 && n.native_utilisation < 1.0)) reject(at + ".native_utilisation", "must lie in [0, 1)");
            if (!(n.caf > 0.0)) reject(at + ".caf", "must be positive");
            if (!(n.max_supported_distance_m > 0.0)) reject(at + ".max_supported_distance_m", "must be positive");
            if (!(n.distance_m >= 0.0 && n.distance_m <= n.max_supported_distance_m)) reject(at + ".distance_m", "must lie in [0, max_supported_distance_m]");
            if (!(n.battery_pct >= 0.0 && n.battery_pct <= 100.0)) reject(at + ".battery_pct", "must lie in [0, 100]");
            for (double r : n.discharge_rates) {
                if (!(r >= 0.0)) reject(at + ".discharge_rates", "must be non-negative");
            }
            if (!(n.bandwidth_bps > 0.0)) reject(at + ".bandwidth_bps", "must be positive");
        }
    }
    positive(f.max_supported_distance_m, "fleet.max_supported_distance_m");
    positive(f.server_mips, "fleet.server_mips");
    positive(f.device_bandwidth_bps, "fleet.device_bandwidth_bps");
    positive(f.server_bandwidth_bps, "fleet.server_bandwidth_bps");
    positive(f.access_point_bandwidth_bps, "fleet.access_point_bandwidth_bps");
    non_negative(f.task_discharge_pct_per_min, "fleet.task_discharge_pct_per_min");

    const auto& w = s.workload;
    if (w.tasks.empty()) {
        if (w.tasks_per_app == 0 && w.app_count > 0) reject("workload.tasks_per_app", "must be at least 1");
        positive(w.task_length, "workload.task_length");
        range(w.data_bytes, "workload.data_bytes", 1e-9, inf);
        range(w.deadline_s, "workload.deadline_s", 1e-9, inf);
        non_negative(w.arrival_window_s, "workload.arrival_window_s");
    } else {
        for (std::size_t i = 0; i < w.tasks.size(); ++i) {
            const auto& t = w.tasks[i];
            const std::string at = "workload.tasks[" + std::to_string(i) + "]";
            if (!(t.length > 0.0)) reject(at + ".length", "must be positive");
            if (!(t.data_bytes > 0.0)) reject(at + ".data_bytes", "must be positive");
            if (!(t.deadline > 0.0)) reject(at + ".deadline", "must be positive");
            if (!(t.submit >= 0.0)) reject(at + ".submit", "must be non-negative");
        }
    }
    non_negative(w.subtask_length, "workload.subtask_length");
    positive(w.min_deadline_s, "workload.min_deadline_s");
    non_negative(w.response_size_ratio, "workload.response_size_ratio");
    if (!(w.cloud_storage_fraction >= 0.0 && w.cloud_storage_fraction <= 1.0)) {
        reject("workload.cloud_storage_fraction", "must lie in [0, 1]");
    }

    const auto& d = s.dynamics;
    range(d.utilisation_variation_pct, "dynamics.utilisation_variation_pct", 0.0, 100.0);
    non_negative(d.fluctuation_period_s, "dynamics.fluctuation_period_s");
    if (!(d.deadline_variation_pct >= 0.0 && d.deadline_variation_pct < 100.0)) {
        reject("dynamics.deadline_variation_pct", "must lie in [0, 100)");
    }
    positive(d.min_remaining_deadline_s, "dynamics.min_remaining_deadline_s");
    positive(d.reservation_window_s, "dynamics.reservation_window_s");
    non_negative(d.peer_load_factor, "dynamics.peer_load_factor");
    positive(d.max_sim_time_s, "dynamics.max_sim_time_s");
    for (std::size_t i = 0; i < d.utilisation_events.size(); ++i) {
        const auto& e = d.utilisation_events[i];
        const std::string at = "dynamics.utilisation_events[" + std::to_string(i) + "]";
        if (!(e.time >= 0.0)) reject(at + ".time", "must be non-negative");
        if (!(e.native_utilisation >= 0.0 && e.native_utilisation < 1.0)) reject(at + ".native_utilisation", "must lie in [0, 1)");
        if (e.node.empty()) reject(at + ".node", "must name a node");
    }

    const auto& n = s.network;
    if (!(n.medium_throughput > 0.0 && n.medium_throughput <= 1.0)) reject("network.medium_throughput", "must lie in (0, 1]");
    positive(n.frame_length_bits, "network.frame_length_bits");
    positive(n.transmission_rate_bps, "network.transmission_rate_bps");
    non_negative(n.const_overhead_s, "network.const_overhead_s");
    non_negative(n.queuing_delay_s, "network.queuing_delay_s");
    non_negative(n.cloud_distance_km, "network.cloud_distance_km");
    positive(n.cloud_bandwidth_bps, "network.cloud_bandwidth_bps");
    positive(n.control_message_bits, "network.control_message_bits");

    const auto& p = s.policy;
    if (p.policies.empty()) reject("policy.policies", "must list at least one policy");
    if (p.reservation.empty()) reject("policy.reservation", "must list at least one setting");
    if (!(p.min_free_fraction > 0.0 && p.min_free_fraction <= 1.0)) reject("policy.min_free_fraction", "must lie in (0, 1]");
    non_negative(p.broker_decision_s, "policy.broker_decision_s");
    non_negative(p.cloud_processing_s, "policy.cloud_processing_s");
    positive(p.scoring.mains_availability, "policy.mains_availability_min");

    try {
        pricing::validate(s.prices);
    } catch (const Error& e) {
        reject("prices", e.what());
    }
    non_negative(s.sla.base_penalty, "sla.base_penalty");
    non_negative(s.sla.penalty_rate, "sla.penalty_rate");
    if (s.unit_costs.fog) non_negative(*s.unit_costs.fog, "unit_costs.fog");
    if (s.unit_costs.cloud) non_negative(*s.unit_costs.cloud, "unit_costs.cloud");
}

} // namespace fogsim
