#include "fogsim/metrics.hpp"
#include "fogsim/error.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace fogsim::metrics {

void add_leg(TrafficCounters& tc, const LegRecord& leg)
{
    switch (leg.leg) {
    case Leg::UserSend:
        tc.user_packets += leg.packets;
        tc.user_send_time += leg.duration;
        break;
    case Leg::CloudSend:
        tc.cloud_packets += leg.packets;
        tc.cloud_send_time += leg.duration;
        break;
    case Leg::CloudResponse:
        tc.cloud_response_packets += leg.packets;
        tc.cloud_response_time += leg.duration;
        break;
    case Leg::FogResponse:
        tc.fog_response_packets += leg.packets;
        tc.fog_response_time += leg.duration;
        break;
    case Leg::InternalFog:
        tc.internal_fog_packets += leg.packets;
        tc.internal_fog_time += leg.duration;
        break;
    case Leg::InternalFogResponse:
        tc.internal_fog_response_packets += leg.packets;
        tc.internal_fog_response_time += leg.duration;
        break;
    case Leg::InternalCloud:
        tc.internal_cloud_packets += leg.packets;
        tc.internal_cloud_time += leg.duration;
        break;
    case Leg::InternalCloudResponse:
        tc.internal_cloud_response_packets += leg.packets;
        tc.internal_cloud_response_time += leg.duration;
        break;
    case Leg::DeviceProcessing: tc.device_processing_time += leg.duration; break;
    case Leg::ServerProcessing: tc.server_processing_time += leg.duration; break;
    case Leg::CloudProcessing: tc.cloud_processing_time += leg.duration; break;
    }
}

PacketTotals packet_totals(const TrafficCounters& tc)
{
    if (tc.cloud_packets > tc.user_packets) {
        throw Error(ErrorKind::InconsistentCounters, "cloud packets exceed user packets");
    }
    PacketTotals out;
    out.transmissions = tc.user_packets + tc.cloud_packets + tc.cloud_response_packets + tc.fog_response_packets
                      + tc.cloud_response_packets;
    out.internal_transmissions = tc.internal_fog_packets + tc.internal_cloud_packets
                               + tc.internal_fog_response_packets + tc.internal_cloud_response_packets;
    return out;
}

Averaged delay_totals(const TrafficCounters& tc)
{
    Averaged out;
    out.total = tc.user_send_time + tc.cloud_send_time + tc.cloud_response_time + tc.fog_response_time
              + tc.cloud_response_time;
    if (tc.user_packets == 0) {
        out.empty = true;
    } else {
        out.average = out.total / static_cast<double>(tc.user_packets);
    }
    return out;
}

Averaged internal_delay_totals(const TrafficCounters& tc)
{
    Averaged out;
    out.total = tc.internal_fog_time + tc.internal_fog_response_time + tc.internal_cloud_time
              + tc.internal_cloud_response_time;
    const auto count = tc.internal_fog_packets + tc.internal_cloud_packets;
    if (count == 0) {
        out.empty = true;
    } else {
        out.average = out.total / static_cast<double>(count);
    }
    return out;
}

Seconds total_processing_time(const TrafficCounters& tc) noexcept
{
    return tc.device_processing_time + tc.server_processing_time + tc.cloud_processing_time;
}

Seconds request_delay(const TrafficCounters& tc)
{
    return delay_totals(tc).total + internal_delay_totals(tc).total;
}

CompletionMetrics completion_metrics(std::span<const RequestRecord> trace)
{
    CompletionMetrics out;
    std::map<std::uint64_t, Seconds> per_app;
    double ctu_sum = 0.0;
    std::size_t ctu_count = 0;
    for (const auto& r : trace) {
        const Seconds tpt = total_processing_time(r.traffic);
        const Seconds whole = delay_totals(r.traffic).total + internal_delay_totals(r.traffic).total + tpt;
        per_app[r.app_id] += whole;
        out.total_processing += tpt;
        if (r.traffic.user_packets > 0) {
            ctu_sum += whole / static_cast<double>(r.traffic.user_packets);
            ++ctu_count;
        }
    }
    out.ctu_avg = ctu_count ? ctu_sum / static_cast<double>(ctu_count) : 0.0;
    double cta_sum = 0.0;
    for (const auto& [app, cta] : per_app) {
        out.cta.push_back(cta);
        cta_sum += cta;
    }
    out.cta_avg = trace.empty() ? 0.0 : cta_sum / static_cast<double>(trace.size());
    return out;
}

CostMetrics cost_metrics(std::span<const RequestRecord> trace, const std::function<Dollars(std::uint64_t)>& app_cost,
                         const UnitCosts& units)
{
    CostMetrics out;
    out.tc_req.reserve(trace.size());
    for (const auto& r : trace) {
        const auto& tc = r.traffic;
        const Dollars at_cost = app_cost(r.app_id);
        const Dollars fog = units.fog.value_or(at_cost);
        const Dollars cloud = units.cloud.value_or(at_cost);
        const Seconds fog_time =
            delay_totals(tc).total + internal_delay_totals(tc).total + total_processing_time(tc);
        const Seconds cloud_time = tc.cloud_send_time + tc.cloud_response_time + tc.internal_cloud_time
                                 + tc.internal_cloud_response_time + tc.cloud_processing_time;
        const Dollars cost = fog_time * fog + cloud_time * cloud;
        out.tc_req.push_back(cost);
        out.tc += cost;
    }
    return out;
}

Dollars sla_penalty(const SlaTerms& terms)
{
    if (terms.delay_time < 0.0) throw Error(ErrorKind::InvalidDelay, "delay time must be non-negative");
    return terms.base_penalty + terms.penalty_rate * terms.delay_time;
}

double sla_violation_rate(std::span<const RequestRecord> trace)
{
    if (trace.empty()) return 0.0;
    const auto violated = std::count_if(trace.begin(), trace.end(), [](const auto& r) { return r.violated(); });
    return static_cast<double>(violated) / static_cast<double>(trace.size()) * 100.0;
}

Dollars total_penalty(std::span<const RequestRecord> trace, Dollars base_penalty, double penalty_rate)
{
    Dollars total = 0.0;
    for (const auto& r : trace) {
        if (!r.violated()) continue;
        total += sla_penalty({base_penalty, penalty_rate, r.observed_completion() - r.deadline});
    }
    return total;
}

MetricsReport summarize(std::span<const RequestRecord> trace, const std::function<Dollars(std::uint64_t)>& app_cost,
                        Dollars base_penalty, double penalty_rate, const UnitCosts& units)
{
    MetricsReport report;
    report.empty = trace.empty();
    if (!trace.empty()) {
        report.min_delay = std::numeric_limits<double>::infinity();
        for (const auto& r : trace) {
            const Seconds d = request_delay(r.traffic);
            report.total_delay += d;
            report.max_delay = std::max(report.max_delay, d);
            report.min_delay = std::min(report.min_delay, d);
        }
        report.avg_delay = report.total_delay / static_cast<double>(trace.size());
    }

    const auto completion = completion_metrics(trace);
    report.ctu_avg = completion.ctu_avg;
    report.cta = completion.cta;
    report.cta_avg = completion.cta_avg;
    report.avg_processing = trace.empty() ? 0.0 : completion.total_processing / static_cast<double>(trace.size());

    auto costs = cost_metrics(trace, app_cost, units);
    report.tc_req = std::move(costs.tc_req);
    report.tc = costs.tc;

    report.sla_violation_pct = sla_violation_rate(trace);
    report.penalty_cost = total_penalty(trace, base_penalty, penalty_rate);
    return report;
}

} // namespace fogsim::metrics
