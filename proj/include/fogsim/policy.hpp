#pragma once

#include "fogsim/core_model.hpp"
#include "fogsim/scoring.hpp"

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fogsim::policy {

enum class PolicyKind { MultiCriteria, Baseline };
enum class RequestKind { Fresh, Migration };

/// `Literal` admits a migration target when TE_T < deadline + M_t, as the
/// handler is written; `Strict` requires TE_T < deadline - M_t.
enum class Feasibility { Literal, Strict };

std::string_view to_string(PolicyKind kind) noexcept;
std::optional<PolicyKind> parse_policy(std::string_view name) noexcept;

/// A node snapshot plus the link that reaches it. `migration_time` overrides
/// the link-derived transfer time (used for tabulated pairwise times).
struct Candidate {
    FogNode node;
    NetworkLink link;
    std::optional<Seconds> migration_time;
};

struct RankedNode {
    NodeId id;
    ScoreCard score;
    Seconds estimate = 0.0; // the policy's sort key
};

/// Scores every candidate and orders them by ascending completion time, ties by
/// node id. Migration requests refresh each candidate's reservation first.
/// Returns nullopt for an empty candidate list.
std::optional<std::vector<RankedNode>> mc_allocate(const Task& task, std::span<const Candidate> candidates,
                                                   RequestKind kind, const scoring::Options& options = {});

/// Comparison policy: orders by raw execution time plus link round trip,
/// ignoring load, fluctuation, distance and battery. Ties go to the lower id.
std::vector<RankedNode> baseline_allocate(const Task& task, std::span<const Candidate> candidates,
                                          const scoring::Options& options = {});

std::vector<RankedNode> rank(PolicyKind kind, const Task& task, std::span<const Candidate> candidates,
                             const scoring::Options& options = {});

enum class ReservationStatus { Success, Failed };

/// Req_res = (R_v + L_AR) / T_AP per device, zero while no history exists.
/// Each device's post-reservation utilisation becomes CU_z + Req_res/capacity,
/// where CU_z comes from `current_util` (falling back to the node's own value).
ReservationStatus reserve(std::span<FogNode> devices, const std::map<NodeId, double>& current_util);

/// Capacity to hold back for a window that saw `requests`: count x mean size.
Mips history_reservation_value(std::span<const Mips> requests) noexcept;

/// Peer-cluster admission: the request must fit in what is left after native
/// load, the reservation and already-committed work.
bool peer_admissible(const FogNode& node, Mips committed, Mips request) noexcept;

struct MigrationDecision {
    enum class Outcome { Stay, Migrate, Violation };
    Outcome outcome = Outcome::Stay;
    std::optional<NodeId> target;
    Seconds migration_time = 0.0;
    std::vector<RankedNode> tentative;
};

struct DeadlineChange {
    NodeId current;
    Seconds time_left = 0.0;          // Usr_req
    Seconds current_projection = 0.0; // time to finish where the task sits now
};

/// Handles a deadline change (or a congestion-triggered reassessment): keeps
/// the task when its node still makes it, otherwise scans the policy ordering
/// for nodes passing the feasibility gate. Under the multi-criteria policy the
/// deadline-feasible node with the highest availability score wins; the
/// baseline takes the first gated node.
MigrationDecision handle_deadline_change(const Task& task, const DeadlineChange& change,
                                         std::span<const Candidate> candidates, PolicyKind kind,
                                         Feasibility feasibility = Feasibility::Literal,
                                         const scoring::Options& options = {});

} // namespace fogsim::policy
