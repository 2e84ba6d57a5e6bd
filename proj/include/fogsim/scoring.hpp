#pragma once

#include "fogsim/core_model.hpp"

#include <span>

namespace fogsim::scoring {

/// How throughput relates to distance. `Decreasing` (1 - G_d/SD_max) falls
/// as a device moves away; `Literal` (G_d/SD_max) keeps the ratio as written
/// when reproducing the hand-worked device table.
enum class ThroughputMode { Decreasing, Literal };

inline constexpr Minutes default_mains_availability = 1e6;

struct Options {
    ThroughputMode throughput = ThroughputMode::Decreasing;
    Minutes mains_availability = default_mains_availability;
};

/// Remaining work over raw capacity.
Seconds execution_time(const Task& task, const FogNode& node);

Seconds migration_time(Bits data_size, BitsPerSecond bandwidth, double throughput);

/// Uses the link's fair-share bandwidth.
Seconds migration_time(const Task& task, const NetworkLink& link, double throughput);

Seconds response_time(Seconds migration, Seconds execution, Seconds network_delay);

/// Battery charge over summed discharge rates, in minutes. Mains-powered nodes
/// report `options.mains_availability`.
Minutes availability(const FogNode& node, const Options& options = {});

double throughput_by_distance(const FogNode& node, ThroughputMode mode = ThroughputMode::Decreasing);

/// Mean of the per-interval relative changes |x_i - x_{i-1}| / x_{i-1}, in
/// percent.
double cpu_fluctuation_rate(std::span<const double> history);

/// Execution time de-rated by free share, fluctuation factor and throughput.
Seconds completion_time(Seconds execution, double free_resource, double caf, double throughput);

double availability_score(Minutes availability, Seconds completion);

/// Full score card for running `task` on `node` reached over `link`.
ScoreCard score_device(const Task& task, const FogNode& node, const NetworkLink& link,
                       const Options& options = {});

} // namespace fogsim::scoring
