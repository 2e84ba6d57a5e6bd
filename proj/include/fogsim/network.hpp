#pragma once

#include "fogsim/core_model.hpp"

namespace fogsim::network {

enum class Medium { Wired, Microwave };

/// Queue handling for the packetized delay: the default treats service time as
/// zero so no queue forms; `Enabled` adds the summed queuing delay back in.
enum class Queuing { Ignored, Enabled };

inline constexpr double wired_seconds_per_km = 5e-6;
inline constexpr double microwave_seconds_per_km = 3e-6;

/// Bottleneck of the two port bandwidths.
BitsPerSecond link_bandwidth(const NetworkLink& link);

/// Bottleneck over every link of the path.
BitsPerSecond path_bandwidth(const NetworkPath& path);

/// Max-min fair share of a link for one of `sharing_users`, de-rated by the
/// medium throughput.
BitsPerSecond available_bandwidth(const NetworkLink& link);

/// Path variant: smallest per-link fair share, de-rated once by
/// `medium_throughput`.
BitsPerSecond available_bandwidth(const NetworkPath& path, double medium_throughput);

/// Round-trip latency of one communication unit over a link.
Seconds link_delay(const NetworkLink& link);

/// One-way delay summed over the intermediate links of a path.
Seconds path_delay(const NetworkPath& path);

Seconds processing_delay(Bits frame_length, BitsPerSecond transmission_rate);

Seconds propagation_delay(double distance_km, Medium medium) noexcept;

/// ceil(W * sum 1/C_i) serialization rounds, each paying the path's processing
/// delay plus the per-link constants (and queuing, when enabled).
Seconds packetized_delay(Bits packet_size, const NetworkPath& path, Queuing queuing = Queuing::Ignored);

/// Concatenates two paths, preserving link order.
NetworkPath concat(const NetworkPath& a, const NetworkPath& b);

} // namespace fogsim::network
