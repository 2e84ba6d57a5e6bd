#include "fogsim/core_model.hpp"
#include "fogsim/error.hpp"

#include <fmt/format.h>

namespace fogsim {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidLink: return "invalid-link";
    case ErrorKind::EmptyPath: return "empty-path";
    case ErrorKind::InvalidSharing: return "invalid-sharing";
    case ErrorKind::InvalidDelay: return "invalid-delay";
    case ErrorKind::InvalidRate: return "invalid-rate";
    case ErrorKind::InvalidCapacity: return "invalid-capacity";
    case ErrorKind::InvalidUnit: return "invalid-unit";
    case ErrorKind::InvalidNode: return "invalid-node";
    case ErrorKind::InvalidFactor: return "invalid-factor";
    case ErrorKind::Division: return "division";
    case ErrorKind::UndefinedAvailability: return "undefined-availability";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::InsufficientHistory: return "insufficient-history";
    case ErrorKind::InconsistentCounters: return "inconsistent-counters";
    case ErrorKind::Config: return "config";
    case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

std::vector<std::string> validate(const FogNode& node)
{
    std::vector<std::string> out;
    auto fail = [&out](std::string msg) { out.push_back(std::move(msg)); };

    if (!(node.cpu_capacity > 0.0)) fail("cpu_capacity <= 0");
    if (node.free_resource_fraction < 0.0) fail("free_resource_fraction < 0");
    if (node.free_resource_fraction > 1.0) fail("free_resource_fraction > 1");
    if (node.native_utilisation < 0.0) fail("native_utilisation < 0");
    if (node.native_utilisation > 1.0) fail("native_utilisation > 1");
    if (node.battery_charge < 0.0) fail("battery_charge < 0");
    if (node.battery_charge > 100.0) fail("battery_charge > 100");
    for (std::size_t i = 0; i < node.discharge_rates.size(); ++i) {
        if (!(node.discharge_rates[i] > 0.0)) fail(fmt::format("discharge_rates[{}] <= 0", i));
    }
    if (!(node.max_supported_distance > 0.0)) fail("max_supported_distance <= 0");
    if (node.distance < 0.0) fail("distance < 0");
    if (node.distance > node.max_supported_distance) fail("distance exceeds SD_max");
    if (!(node.caf_score > 0.0)) fail("caf_score <= 0");
    const auto& r = node.reservation;
    if (r.reserved_value < 0.0 || r.last_app_request < 0.0 || r.required_reservation < 0.0) {
        fail("reservation values < 0");
    }
    return out;
}

UsageLedger::PerTier& UsageLedger::tier(Tier t) noexcept
{
    switch (t) {
    case Tier::Cloud: return cloud;
    case Tier::FogServer: return server;
    case Tier::FogDevice: break;
    }
    return device;
}

const UsageLedger::PerTier& UsageLedger::tier(Tier t) const noexcept
{
    return const_cast<UsageLedger*>(this)->tier(t);
}

void UsageLedger::merge(const UsageLedger& other)
{
    for (Tier t : {Tier::Cloud, Tier::FogServer, Tier::FogDevice}) {
        auto& mine = tier(t);
        const auto& theirs = other.tier(t);
        mine.connectivity_minutes += theirs.connectivity_minutes;
        mine.message_kb.insert(mine.message_kb.end(), theirs.message_kb.begin(), theirs.message_kb.end());
        mine.registry_kb += theirs.registry_kb;
        mine.processing_kb.insert(mine.processing_kb.end(), theirs.processing_kb.begin(),
                                  theirs.processing_kb.end());
    }
}

} // namespace fogsim
