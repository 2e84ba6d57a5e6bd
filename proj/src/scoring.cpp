#include "fogsim/scoring.hpp"
#include "fogsim/error.hpp"
#include "fogsim/network.hpp"

#include <cmath>
#include <numeric>

namespace fogsim::scoring {

Seconds execution_time(const Task& task, const FogNode& node)
{
    if (!(node.cpu_capacity > 0.0)) throw Error(ErrorKind::InvalidNode, "cpu capacity must be positive");
    return task.remaining_work() / node.cpu_capacity;
}

Seconds migration_time(Bits data_size, BitsPerSecond bandwidth, double throughput)
{
    if (!(bandwidth > 0.0) || !(throughput > 0.0)) {
        throw Error(ErrorKind::InvalidLink, "migration needs positive bandwidth and throughput");
    }
    return data_size / (bandwidth * throughput);
}

Seconds migration_time(const Task& task, const NetworkLink& link, double throughput)
{
    return migration_time(task.data_size, network::available_bandwidth(link), throughput);
}

Seconds response_time(Seconds migration, Seconds execution, Seconds network_delay)
{
    return migration + execution + network_delay;
}

Minutes availability(const FogNode& node, const Options& options)
{
    if (node.mains_powered) return options.mains_availability;
    if (node.battery_charge <= 0.0) return 0.0;
    const double drain = std::accumulate(node.discharge_rates.begin(), node.discharge_rates.end(), 0.0);
    if (!(drain > 0.0)) throw Error(ErrorKind::UndefinedAvailability, "battery node without discharge rates");
    return node.battery_charge / drain;
}

double throughput_by_distance(const FogNode& node, ThroughputMode mode)
{
    if (!(node.max_supported_distance > 0.0)) throw Error(ErrorKind::OutOfRange, "SD_max must be positive");
    if (node.distance < 0.0 || node.distance > node.max_supported_distance) {
        throw Error(ErrorKind::OutOfRange, "distance outside [0, SD_max]");
    }
    const double ratio = node.distance / node.max_supported_distance;
    return mode == ThroughputMode::Literal ? ratio : 1.0 - ratio;
}

double cpu_fluctuation_rate(std::span<const double> history)
{
    if (history.size() < 2) throw Error(ErrorKind::InsufficientHistory, "need at least two samples");
    double sum = 0.0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        const double prev = history[i - 1];
        if (!(prev > 0.0)) throw Error(ErrorKind::OutOfRange, "available-CPU samples must be positive");
        sum += std::abs(history[i] - prev) / prev * 100.0;
    }
    return sum / static_cast<double>(history.size() - 1);
}

Seconds completion_time(Seconds execution, double free_resource, double caf, double throughput)
{
    if (!(free_resource > 0.0) || !(caf > 0.0) || !(throughput > 0.0)) {
        throw Error(ErrorKind::InvalidFactor, "de-rating factors must be positive");
    }
    return execution / (free_resource * caf * throughput);
}

double availability_score(Minutes availability, Seconds completion)
{
    if (!(completion > 0.0)) throw Error(ErrorKind::Division, "completion time must be positive");
    return availability / completion;
}

ScoreCard score_device(const Task& task, const FogNode& node, const NetworkLink& link, const Options& options)
{
    ScoreCard card;
    card.node_id = node.id;
    card.execution_time = execution_time(task, node);
    card.throughput_by_distance = throughput_by_distance(node, options.throughput);
    card.migration_time = migration_time(task, link, card.throughput_by_distance);
    card.response_time = response_time(card.migration_time, card.execution_time, network::link_delay(link));
    card.availability = availability(node, options);
    card.completion_time = completion_time(card.execution_time, node.free_resource_fraction, node.caf_score,
                                           card.throughput_by_distance);
    card.availability_score = availability_score(card.availability, card.completion_time);
    return card;
}

} // namespace fogsim::scoring
