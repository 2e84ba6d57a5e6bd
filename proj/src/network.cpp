#include "fogsim/network.hpp"
#include "fogsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace fogsim::network {

namespace {

void require_non_empty(const NetworkPath& path)
{
    if (path.links.empty()) throw Error(ErrorKind::EmptyPath, "path has no links");
}

void require_delays(const NetworkLink& link)
{
    if (link.queuing_delay < 0.0 || link.transmission_delay < 0.0 || link.propagation_delay < 0.0
        || link.processing_delay < 0.0 || link.const_overhead < 0.0) {
        throw Error(ErrorKind::InvalidDelay, "negative delay component");
    }
}

Seconds one_way(const NetworkLink& link)
{
    require_delays(link);
    return link.queuing_delay + link.transmission_delay + link.propagation_delay + link.processing_delay;
}

} // namespace

BitsPerSecond link_bandwidth(const NetworkLink& link)
{
    if (!(link.bandwidth_a > 0.0) || !(link.bandwidth_b > 0.0)) {
        throw Error(ErrorKind::InvalidLink, "endpoint bandwidth must be positive");
    }
    return std::min(link.bandwidth_a, link.bandwidth_b);
}

BitsPerSecond path_bandwidth(const NetworkPath& path)
{
    require_non_empty(path);
    BitsPerSecond out = link_bandwidth(path.links.front());
    for (const auto& link : path.links) out = std::min(out, link_bandwidth(link));
    return out;
}

namespace {

BitsPerSecond fair_share(const NetworkLink& link)
{
    if (link.sharing_users == 0) throw Error(ErrorKind::InvalidSharing, "sharing_users must be >= 1");
    return link_bandwidth(link) / static_cast<double>(link.sharing_users);
}

void require_throughput(double m)
{
    if (!(m > 0.0) || m > 1.0) throw Error(ErrorKind::InvalidLink, "medium throughput must lie in (0, 1]");
}

} // namespace

BitsPerSecond available_bandwidth(const NetworkLink& link)
{
    require_throughput(link.medium_throughput);
    return fair_share(link) * link.medium_throughput;
}

BitsPerSecond available_bandwidth(const NetworkPath& path, double medium_throughput)
{
    require_non_empty(path);
    require_throughput(medium_throughput);
    BitsPerSecond share = fair_share(path.links.front());
    for (const auto& link : path.links) share = std::min(share, fair_share(link));
    return share * medium_throughput;
}

Seconds link_delay(const NetworkLink& link)
{
    return 2.0 * one_way(link);
}

Seconds path_delay(const NetworkPath& path)
{
    require_non_empty(path);
    Seconds queuing = 0.0, transmission = 0.0, propagation = 0.0, processing = 0.0;
    for (const auto& link : path.links) {
        require_delays(link);
        queuing += link.queuing_delay;
        transmission += link.transmission_delay;
        propagation += link.propagation_delay;
        processing += link.processing_delay;
    }
    return queuing + transmission + propagation + processing;
}

Seconds processing_delay(Bits frame_length, BitsPerSecond transmission_rate)
{
    if (!(transmission_rate > 0.0)) throw Error(ErrorKind::InvalidRate, "transmission rate must be positive");
    if (frame_length < 0.0) throw Error(ErrorKind::InvalidRate, "frame length must be non-negative");
    return frame_length / transmission_rate;
}

Seconds propagation_delay(double distance_km, Medium medium) noexcept
{
    const double per_km = medium == Medium::Wired ? wired_seconds_per_km : microwave_seconds_per_km;
    return distance_km * per_km;
}

Seconds packetized_delay(Bits packet_size, const NetworkPath& path, Queuing queuing)
{
    require_non_empty(path);
    if (packet_size < 0.0) throw Error(ErrorKind::InvalidCapacity, "packet size must be non-negative");
    double inverse_capacity = 0.0;
    Seconds processing = 0.0, overhead = 0.0, queue = 0.0;
    for (const auto& link : path.links) {
        if (!(link.capacity > 0.0)) throw Error(ErrorKind::InvalidCapacity, "link capacity must be positive");
        require_delays(link);
        inverse_capacity += 1.0 / link.capacity;
        processing += link.processing_delay;
        overhead += link.const_overhead;
        queue += link.queuing_delay;
    }
    const double rounds = std::ceil(packet_size * inverse_capacity);
    const Seconds per_round = (queuing == Queuing::Enabled ? queue : 0.0) + processing + overhead;
    return rounds * per_round;
}

NetworkPath concat(const NetworkPath& a, const NetworkPath& b)
{
    NetworkPath out = a;
    out.links.insert(out.links.end(), b.links.begin(), b.links.end());
    return out;
}

} // namespace fogsim::network
