#include "fogsim/policy.hpp"
#include "fogsim/network.hpp"

#include <algorithm>
#include <numeric>

namespace fogsim::policy {

std::string_view to_string(PolicyKind kind) noexcept
{
    return kind == PolicyKind::MultiCriteria ? "mc" : "baseline";
}

std::optional<PolicyKind> parse_policy(std::string_view name) noexcept
{
    if (name == "mc") return PolicyKind::MultiCriteria;
    if (name == "baseline") return PolicyKind::Baseline;
    return std::nullopt;
}

namespace {

RankedNode score(const Task& task, const Candidate& c, const scoring::Options& options)
{
    RankedNode out{c.node.id, scoring::score_device(task, c.node, c.link, options), 0.0};
    if (c.migration_time) {
        out.score.migration_time = *c.migration_time;
        out.score.response_time = scoring::response_time(*c.migration_time, out.score.execution_time,
                                                         network::link_delay(c.link));
    }
    return out;
}

void sort_by_estimate(std::vector<RankedNode>& nodes)
{
    std::stable_sort(nodes.begin(), nodes.end(), [](const RankedNode& a, const RankedNode& b) {
        if (a.estimate != b.estimate) return a.estimate < b.estimate;
        return a.id < b.id;
    });
}

} // namespace

std::optional<std::vector<RankedNode>> mc_allocate(const Task& task, std::span<const Candidate> candidates,
                                                   RequestKind kind, const scoring::Options& options)
{
    if (candidates.empty()) return std::nullopt;

    std::vector<Candidate> snapshot(candidates.begin(), candidates.end());
    if (kind == RequestKind::Migration) {
        // "Update parameters" means the caller hands in fresh snapshots; the
        // reservation is then recomputed from each node's history.
        std::vector<FogNode> nodes;
        nodes.reserve(snapshot.size());
        for (const auto& c : snapshot) nodes.push_back(c.node);
        reserve(nodes, {});
        for (std::size_t i = 0; i < nodes.size(); ++i) snapshot[i].node.reservation = nodes[i].reservation;
    }

    std::vector<RankedNode> ranked;
    ranked.reserve(snapshot.size());
    for (const auto& c : snapshot) {
        auto r = score(task, c, options);
        r.estimate = r.score.completion_time;
        ranked.push_back(r);
    }
    sort_by_estimate(ranked);
    return ranked;
}

std::vector<RankedNode> baseline_allocate(const Task& task, std::span<const Candidate> candidates,
                                          const scoring::Options& options)
{
    std::vector<RankedNode> ranked;
    ranked.reserve(candidates.size());
    for (const auto& c : candidates) {
        auto r = score(task, c, options);
        r.estimate = r.score.execution_time + network::link_delay(c.link);
        ranked.push_back(r);
    }
    sort_by_estimate(ranked);
    return ranked;
}

std::vector<RankedNode> rank(PolicyKind kind, const Task& task, std::span<const Candidate> candidates,
                             const scoring::Options& options)
{
    if (kind == PolicyKind::Baseline) return baseline_allocate(task, candidates, options);
    return mc_allocate(task, candidates, RequestKind::Fresh, options).value_or(std::vector<RankedNode>{});
}

ReservationStatus reserve(std::span<FogNode> devices, const std::map<NodeId, double>& current_util)
{
    if (devices.empty()) return ReservationStatus::Failed;
    for (auto& device : devices) {
        auto& r = device.reservation;
        const auto it = current_util.find(device.id);
        const double cu = it != current_util.end() ? it->second : device.native_utilisation;
        r.required_reservation = r.total_apps_processed == 0
                                     ? 0.0
                                     : (r.reserved_value + r.last_app_request)
                                           / static_cast<double>(r.total_apps_processed);
        r.utilisation_after_reservation = cu + r.required_reservation / device.cpu_capacity;
    }
    return ReservationStatus::Success;
}

Mips history_reservation_value(std::span<const Mips> requests) noexcept
{
    if (requests.empty()) return 0.0;
    const double mean = std::accumulate(requests.begin(), requests.end(), 0.0) / static_cast<double>(requests.size());
    return static_cast<double>(requests.size()) * mean;
}

bool peer_admissible(const FogNode& node, Mips committed, Mips request) noexcept
{
    const Mips spare = node.cpu_capacity * (1.0 - node.native_utilisation)
                     - node.reservation.required_reservation - committed;
    return request <= spare;
}

MigrationDecision handle_deadline_change(const Task& task, const DeadlineChange& change,
                                         std::span<const Candidate> candidates, PolicyKind kind,
                                         Feasibility feasibility, const scoring::Options& options)
{
    MigrationDecision decision;
    if (change.current_projection < change.time_left) return decision;

    std::vector<Candidate> others;
    for (const auto& c : candidates) {
        if (c.node.id != change.current) others.push_back(c);
    }
    decision.tentative = rank(kind, task, others, options);

    auto gated = [&](const RankedNode& n) {
        const Seconds m = n.score.migration_time;
        return feasibility == Feasibility::Literal ? n.estimate < change.time_left + m
                                                   : n.estimate < change.time_left - m;
    };

    const RankedNode* chosen = nullptr;
    for (const auto& n : decision.tentative) {
        if (!gated(n)) continue;
        if (kind == PolicyKind::Baseline) {
            chosen = &n;
            break;
        }
        if (!chosen) chosen = &n;
        // Prefer deadline-feasible nodes, and among those the most available.
        const bool meets = n.estimate < change.time_left;
        const bool chosen_meets = chosen->estimate < change.time_left;
        if (meets && (!chosen_meets || n.score.availability_score > chosen->score.availability_score)) {
            chosen = &n;
        }
    }

    if (!chosen) {
        decision.outcome = MigrationDecision::Outcome::Violation;
        return decision;
    }

    // Second pass of the allocator for the chosen target, as a migration request.
    const auto target = std::find_if(others.begin(), others.end(),
                                     [&](const Candidate& c) { return c.node.id == chosen->id; });
    const auto confirmed = mc_allocate(task, std::span<const Candidate>(&*target, 1), RequestKind::Migration, options);
    decision.outcome = MigrationDecision::Outcome::Migrate;
    decision.target = chosen->id;
    decision.migration_time = confirmed ? confirmed->front().score.migration_time : chosen->score.migration_time;
    return decision;
}

} // namespace fogsim::policy
