#pragma once

#include "fogsim/core_model.hpp"
#include "fogsim/policy.hpp"

#include <map>
#include <string>
#include <vector>

namespace fogsim::testing {

struct FdRow {
    const char* name;
    Mips mips;
    double free;    // F_rs
    double caf;
    double distance; // with SD_max 40 the decreasing t_h gives the tabulated T_bd
    double battery;
    double rate;
    double ct;      // expected C_t
    double as;      // expected A_s
};

// Capacities are chosen so a 1000 MI task gives the tabulated E_t
// (FD4 0.5, FD5 1/3); the listed 200/300 MIPS would give 5 and 3.33.
inline const std::vector<FdRow>& fd_rows()
{
    static const std::vector<FdRow> rows{
        {"FD1", 1000, 0.5, 0.5, 4, 50, 5, 4.44, 2.25},
        {"FD2", 500, 0.6, 0.8, 8, 60, 5, 5.21, 2.304},
        {"FD3", 100, 0.3, 1.0, 20, 80, 4, 66.67, 0.3},
        {"FD4", 2000, 0.4, 1.3, 12, 90, 3, 1.37, 21.84},
        {"FD5", 3000, 0.2, 0.9, 18, 20, 4, 3.37, 1.485},
    };
    return rows;
}

inline FogNode fd_node(std::size_t i)
{
    const auto& r = fd_rows()[i];
    FogNode n;
    n.id = NodeId{static_cast<std::uint32_t>(i + 1)};
    n.name = r.name;
    n.cpu_capacity = r.mips;
    n.free_resource_fraction = r.free;
    n.native_utilisation = 1.0 - r.free;
    n.caf_score = r.caf;
    n.distance = r.distance;
    n.max_supported_distance = 40.0;
    n.battery_charge = r.battery;
    n.discharge_rates = {r.rate};
    return n;
}

inline NetworkLink fast_link()
{
    NetworkLink l;
    l.bandwidth_a = l.bandwidth_b = l.capacity = 1e9;
    return l;
}

inline Task fd_task()
{
    Task t;
    t.id = 1;
    t.length = 1000.0;
    t.data_size = 8000.0;
    t.deadline = 5.0;
    return t;
}

inline std::vector<policy::Candidate> fd_candidates()
{
    std::vector<policy::Candidate> out;
    for (std::size_t i = 0; i < fd_rows().size(); ++i) out.push_back({fd_node(i), fast_link(), std::nullopt});
    return out;
}

// Pairwise transfer times out of FD4, from the device table.
inline std::vector<policy::Candidate> fd_candidates_from_fd4()
{
    const std::map<std::string, double> from_fd4{{"FD1", 3}, {"FD2", 2}, {"FD3", 4}, {"FD5", 1}};
    auto out = fd_candidates();
    for (auto& c : out) {
        const auto it = from_fd4.find(c.node.name);
        if (it != from_fd4.end()) c.migration_time = it->second;
    }
    return out;
}

} // namespace fogsim::testing
