#include "fogsim/policy.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace fogsim;
using namespace fogsim::policy;
using fogsim::testing::fd_candidates;
using fogsim::testing::fd_candidates_from_fd4;
using fogsim::testing::fd_task;

namespace {

std::string name_of(NodeId id) { return fogsim::testing::fd_rows()[id.value - 1].name; }

} // namespace

TEST(McAllocate, FreshPicksFd4)
{
    const auto cands = fd_candidates();
    const auto ranked = mc_allocate(fd_task(), cands, RequestKind::Fresh);
    ASSERT_TRUE(ranked);
    ASSERT_EQ(ranked->size(), 5u);
    EXPECT_EQ(name_of(ranked->front().id), "FD4");
    std::vector<std::string> order;
    for (const auto& r : *ranked) order.push_back(name_of(r.id));
    EXPECT_EQ(order, (std::vector<std::string>{"FD4", "FD5", "FD1", "FD2", "FD3"}));
}

TEST(McAllocate, SingletonAndEmpty)
{
    const auto cands = fd_candidates();
    const auto one = mc_allocate(fd_task(), std::span(cands).subspan(2, 1), RequestKind::Fresh);
    ASSERT_TRUE(one);
    ASSERT_EQ(one->size(), 1u);
    EXPECT_EQ(name_of(one->front().id), "FD3");
    EXPECT_FALSE(mc_allocate(fd_task(), std::span<const Candidate>{}, RequestKind::Fresh));
}

TEST(McAllocate, MigrationRefreshesReservation)
{
    auto cands = fd_candidates();
    cands[0].node.reservation.reserved_value = 100;
    cands[0].node.reservation.last_app_request = 50;
    cands[0].node.reservation.total_apps_processed = 3;
    const auto fresh = mc_allocate(fd_task(), cands, RequestKind::Fresh);
    const auto moved = mc_allocate(fd_task(), cands, RequestKind::Migration);
    ASSERT_TRUE(fresh && moved);
    EXPECT_EQ(fresh->front().id, moved->front().id);
}

TEST(HandleDeadlineChange, CongestedFd4MovesToFd1)
{
    const auto cands = fd_candidates_from_fd4();
    const DeadlineChange change{NodeId{4}, 5.0, 50.0};
    const auto d = handle_deadline_change(fd_task(), change, cands, PolicyKind::MultiCriteria);
    ASSERT_EQ(d.outcome, MigrationDecision::Outcome::Migrate);
    EXPECT_EQ(name_of(*d.target), "FD1");
    EXPECT_EQ(d.migration_time, 3.0);
    for (const auto& n : d.tentative) EXPECT_NE(name_of(n.id), "FD4");
}

TEST(HandleDeadlineChange, StaysWhenCurrentNodeStillMakesIt)
{
    const auto cands = fd_candidates_from_fd4();
    const DeadlineChange change{NodeId{4}, 5.0, 1.37};
    const auto d = handle_deadline_change(fd_task(), change, cands, PolicyKind::MultiCriteria);
    EXPECT_EQ(d.outcome, MigrationDecision::Outcome::Stay);
    EXPECT_FALSE(d.target);
}

TEST(HandleDeadlineChange, OneSecondDeadlineIsAViolation)
{
    const auto cands = fd_candidates_from_fd4();
    const DeadlineChange change{NodeId{4}, 1.0, 1.3736};
    const auto d = handle_deadline_change(fd_task(), change, cands, PolicyKind::MultiCriteria);
    EXPECT_EQ(d.outcome, MigrationDecision::Outcome::Violation);
    EXPECT_FALSE(d.target);
}

TEST(HandleDeadlineChange, BaselineTrustsRawExecutionTime)
{
    // FD5 runs 1000 MI in 1/3 s when idle, which the baseline takes at face value: 1/3 < 1 + 1.
    const auto cands = fd_candidates_from_fd4();
    const DeadlineChange change{NodeId{4}, 1.0, 1.3736};
    const auto d = handle_deadline_change(fd_task(), change, cands, PolicyKind::Baseline);
    ASSERT_EQ(d.outcome, MigrationDecision::Outcome::Migrate);
    EXPECT_EQ(name_of(*d.target), "FD5");
}

TEST(HandleDeadlineChange, StrictGateSubtractsMigrationTime)
{
    const auto cands = fd_candidates_from_fd4();
    // Strict: FD5 needs 3.37 < 5 - 1, FD1 needs 4.44 < 5 - 3. Only FD5 passes.
    const DeadlineChange change{NodeId{4}, 5.0, 50.0};
    const auto d = handle_deadline_change(fd_task(), change, cands, PolicyKind::MultiCriteria, Feasibility::Strict);
    ASSERT_EQ(d.outcome, MigrationDecision::Outcome::Migrate);
    EXPECT_EQ(name_of(*d.target), "FD5");
}

TEST(HandleDeadlineChange, BaselineTakesFirstGatedNode)
{
    const auto cands = fd_candidates_from_fd4();
    const DeadlineChange change{NodeId{4}, 5.0, 50.0};
    const auto d = handle_deadline_change(fd_task(), change, cands, PolicyKind::Baseline);
    ASSERT_EQ(d.outcome, MigrationDecision::Outcome::Migrate);
    // raw E_t order without FD4: FD5 (0.33), FD1 (1), FD2 (2), FD3 (10)
    EXPECT_EQ(name_of(*d.target), "FD5");
}

TEST(BaselineAllocate, OrdersByRawExecutionTimePlusRoundTrip)
{
    auto cands = fd_candidates();
    auto ranked = baseline_allocate(fd_task(), cands);
    EXPECT_EQ(name_of(ranked.front().id), "FD5");

    // a slow link pushes FD5 behind FD4 (0.5 s raw)
    cands[4].link.propagation_delay = 0.1;
    ranked = baseline_allocate(fd_task(), cands);
    EXPECT_EQ(name_of(ranked.front().id), "FD4");
    EXPECT_NEAR(ranked[1].estimate, 1.0 / 3.0 + 0.2, 1e-12);
}

TEST(BaselineAllocate, TiesKeepIdOrder)
{
    auto cands = fd_candidates();
    for (auto& c : cands) c.node.cpu_capacity = 1000;
    std::swap(cands[0], cands[3]);
    const auto ranked = baseline_allocate(fd_task(), cands);
    for (std::size_t i = 0; i < ranked.size(); ++i) EXPECT_EQ(ranked[i].id.value, i + 1);

    const auto single = baseline_allocate(fd_task(), std::span(cands).subspan(1, 1));
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].id, cands[1].node.id);
}

TEST(Reserve, RequiredReservation)
{
    std::vector<FogNode> nodes(2);
    nodes[0].id = NodeId{1};
    nodes[0].cpu_capacity = 1000;
    nodes[0].reservation.reserved_value = 100;
    nodes[0].reservation.last_app_request = 50;
    nodes[0].reservation.total_apps_processed = 3;
    nodes[1].id = NodeId{2};
    nodes[1].cpu_capacity = 1000;
    nodes[1].native_utilisation = 0.3;
    nodes[1].reservation.reserved_value = 80; // no history yet

    EXPECT_EQ(reserve(nodes, {{NodeId{1}, 0.2}}), ReservationStatus::Success);
    EXPECT_DOUBLE_EQ(nodes[0].reservation.required_reservation, 50.0);
    EXPECT_DOUBLE_EQ(nodes[0].reservation.utilisation_after_reservation, 0.25);
    EXPECT_EQ(nodes[1].reservation.required_reservation, 0.0);
    EXPECT_DOUBLE_EQ(nodes[1].reservation.utilisation_after_reservation, 0.3);

    EXPECT_EQ(reserve(std::span<FogNode>{}, {}), ReservationStatus::Failed);
}

TEST(Reserve, WindowOfFiveTwentyUnitRequests)
{
    const std::vector<Mips> window(5, 20.0);
    EXPECT_DOUBLE_EQ(history_reservation_value(window), 100.0);
    EXPECT_EQ(history_reservation_value(std::span<const Mips>{}), 0.0);
}

TEST(PeerAdmissible, OnlyWhatIsLeftAfterReservation)
{
    FogNode n;
    n.cpu_capacity = 1000;
    n.native_utilisation = 0.5;
    n.reservation.required_reservation = 300;
    EXPECT_TRUE(peer_admissible(n, 100, 100));
    EXPECT_FALSE(peer_admissible(n, 100, 101));
    EXPECT_TRUE(peer_admissible(n, 0, 200));
    n.reservation.required_reservation = 0;
    EXPECT_TRUE(peer_admissible(n, 100, 400));
}

TEST(PolicyNames, RoundTrip)
{
    EXPECT_EQ(parse_policy(to_string(PolicyKind::MultiCriteria)), PolicyKind::MultiCriteria);
    EXPECT_EQ(parse_policy(to_string(PolicyKind::Baseline)), PolicyKind::Baseline);
    EXPECT_FALSE(parse_policy("fifo"));
}
