#pragma once

#include "fogsim/core_model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fogsim::metrics {

/// One timed communication or processing step of a request, as logged by the
/// engine. Summing legs per request yields its `TrafficCounters`.
enum class Leg {
    UserSend,
    CloudSend,
    CloudResponse,
    FogResponse,
    InternalFog,
    InternalFogResponse,
    InternalCloud,
    InternalCloudResponse,
    DeviceProcessing,
    ServerProcessing,
    CloudProcessing,
};

struct LegRecord {
    std::uint64_t request_id = 0;
    Leg leg = Leg::UserSend;
    std::uint64_t packets = 0;
    Seconds duration = 0.0;
};

struct RequestRecord {
    std::uint64_t request_id = 0;
    std::uint64_t app_id = 0;
    TrafficCounters traffic;
    Seconds submit_time = 0.0;
    Seconds finish_time = 0.0;
    Seconds deadline = 0.0; // relative to submit, after any change

    Seconds observed_completion() const noexcept { return finish_time - submit_time; }
    bool violated() const noexcept { return observed_completion() > deadline; }
};

void add_leg(TrafficCounters& counters, const LegRecord& leg);

struct PacketTotals {
    std::uint64_t transmissions = 0;          // TP
    std::uint64_t internal_transmissions = 0; // TIP
};

/// An average over an empty denominator is reported as 0 with `empty` set.
struct Averaged {
    double total = 0.0;
    double average = 0.0;
    bool empty = false;
};

PacketTotals packet_totals(const TrafficCounters& tc);
Averaged delay_totals(const TrafficCounters& tc);          // DP_total, DP_avg
Averaged internal_delay_totals(const TrafficCounters& tc); // DIP_total, DIP_avg
Seconds total_processing_time(const TrafficCounters& tc) noexcept; // TPT

/// Network delay attributed to one request: DP_total + DIP_total.
Seconds request_delay(const TrafficCounters& tc);

struct CompletionMetrics {
    Seconds ctu_avg = 0.0;        // mean over requests of the per-packet completion time
    std::vector<Seconds> cta;     // per application, in ascending app id order
    Seconds cta_avg = 0.0;
    Seconds total_processing = 0.0; // sum of TPT
};

CompletionMetrics completion_metrics(std::span<const RequestRecord> trace);

/// Unit costs for the time-weighted request cost. Unset values fall back to the
/// request's application AT_cost.
struct UnitCosts {
    std::optional<Dollars> fog;
    std::optional<Dollars> cloud;
};

struct CostMetrics {
    std::vector<Dollars> tc_req;
    Dollars tc = 0.0;
};

CostMetrics cost_metrics(std::span<const RequestRecord> trace, const std::function<Dollars(std::uint64_t)>& app_cost,
                         const UnitCosts& units = {});

/// alpha + beta * DT for one violated request.
Dollars sla_penalty(const SlaTerms& terms);

double sla_violation_rate(std::span<const RequestRecord> trace);

/// Summed penalty over the violated requests of a trace.
Dollars total_penalty(std::span<const RequestRecord> trace, Dollars base_penalty, double penalty_rate);

/// Delay and processing aggregates plus completion, cost and SLA figures.
MetricsReport summarize(std::span<const RequestRecord> trace, const std::function<Dollars(std::uint64_t)>& app_cost,
                        Dollars base_penalty, double penalty_rate, const UnitCosts& units = {});

} // namespace fogsim::metrics
