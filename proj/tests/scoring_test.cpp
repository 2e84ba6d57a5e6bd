#include "fogsim/error.hpp"
#include "fogsim/scoring.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace fogsim;
using namespace fogsim::scoring;
using fogsim::testing::fd_node;
using fogsim::testing::fd_rows;

namespace {

Task job(double length)
{
    Task t;
    t.length = length;
    return t;
}

FogNode cpu(double mips)
{
    FogNode n;
    n.cpu_capacity = mips;
    return n;
}

} // namespace

TEST(ExecutionTime, RemainingOverCapacity)
{
    EXPECT_EQ(execution_time(job(1000), cpu(1000)), 1.0);
    EXPECT_EQ(execution_time(job(1000), cpu(100)), 10.0);
    EXPECT_EQ(execution_time(job(3000), cpu(6000)), 0.5);

    auto half_done = job(1000);
    half_done.completed_work = 500;
    EXPECT_EQ(execution_time(half_done, cpu(1000)), 0.5);
    EXPECT_THROW(execution_time(job(1), cpu(0)), Error);
}

TEST(MigrationTime, DataOverEffectiveBandwidth)
{
    EXPECT_NEAR(migration_time(40960, 100000, 0.8), 0.512, 1e-12);
    EXPECT_EQ(migration_time(5e5, 5e5, 1.0), 1.0);
    EXPECT_EQ(migration_time(0, 5e5, 1.0), 0.0);
    EXPECT_THROW(migration_time(1, 0, 1), Error);
    EXPECT_THROW(migration_time(1, 1, 0), Error);
}

TEST(ResponseTime, Sum)
{
    EXPECT_NEAR(response_time(0.5, 1.0, 0.01), 1.51, 1e-12);
    EXPECT_EQ(response_time(0, 0, 0), 0.0);
    EXPECT_EQ(response_time(0, 2.5, 0), 2.5);
}

TEST(Availability, BatteryOverDrain)
{
    FogNode n;
    n.battery_charge = 60;
    n.discharge_rates = {0.5, 0.2, 0.3};
    EXPECT_NEAR(availability(n), 60.0, 1e-12);

    n.battery_charge = 90;
    n.discharge_rates = {0.9};
    EXPECT_NEAR(availability(n), 100.0, 1e-12);

    n.battery_charge = 0;
    EXPECT_EQ(availability(n), 0.0);

    n.battery_charge = 50;
    n.discharge_rates.clear();
    try {
        availability(n);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UndefinedAvailability);
    }

    n.mains_powered = true;
    EXPECT_EQ(availability(n), default_mains_availability);
}

TEST(ThroughputByDistance, BothModes)
{
    FogNode n;
    n.max_supported_distance = 40;
    n.distance = 4;
    EXPECT_NEAR(throughput_by_distance(n), 0.9, 1e-12);
    n.distance = 0;
    EXPECT_EQ(throughput_by_distance(n), 1.0);
    n.distance = 36;
    EXPECT_NEAR(throughput_by_distance(n, ThroughputMode::Literal), 0.9, 1e-12);
    n.distance = 41;
    try {
        throughput_by_distance(n);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
}

TEST(CpuFluctuationRate, MeanOfStepChanges)
{
    const std::vector<double> h{0.10, 0.20, 0.05, 0.30, 0.20};
    // steps 100, 75, 500, 33.33
    EXPECT_NEAR(cpu_fluctuation_rate(std::span(h).subspan(0, 2)), 100.0, 1e-9);
    EXPECT_NEAR(cpu_fluctuation_rate(std::span(h).subspan(1, 2)), 75.0, 1e-9);
    EXPECT_NEAR(cpu_fluctuation_rate(std::span(h).subspan(2, 2)), 500.0, 1e-9);
    EXPECT_NEAR(cpu_fluctuation_rate(std::span(h).subspan(3, 2)), 100.0 / 3.0, 1e-9);
    EXPECT_NEAR(cpu_fluctuation_rate(h), 177.08, 0.005);

    const std::vector<double> flat{0.4, 0.4, 0.4};
    EXPECT_EQ(cpu_fluctuation_rate(flat), 0.0);

    const std::vector<double> one{0.4};
    try {
        cpu_fluctuation_rate(one);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientHistory);
    }
}

TEST(CompletionTime, Derated)
{
    EXPECT_NEAR(completion_time(1, 0.5, 0.5, 0.9), 4.44, 0.005);
    EXPECT_NEAR(completion_time(10, 0.3, 1.0, 0.5), 66.67, 0.005);
    EXPECT_EQ(completion_time(3.5, 1, 1, 1), 3.5);
    EXPECT_THROW(completion_time(1, 0, 1, 1), Error);
}

TEST(AvailabilityScore, AvailabilityOverCompletion)
{
    EXPECT_NEAR(availability_score(10, 4.44), 2.25, 0.005);
    EXPECT_NEAR(availability_score(30, 1.37), 21.84, 0.06); // 1.37 is itself rounded
    EXPECT_NEAR(availability_score(30, 0.5 / (0.4 * 1.3 * 0.7)), 21.84, 0.005);
    EXPECT_EQ(availability_score(0, 7), 0.0);
    EXPECT_THROW(availability_score(1, 0), Error);
}

TEST(ScoreDevice, GoldenTable)
{
    const auto link = fogsim::testing::fast_link();
    const auto task = fogsim::testing::fd_task();
    for (std::size_t i = 0; i < fd_rows().size(); ++i) {
        const auto& row = fd_rows()[i];
        const auto card = score_device(task, fd_node(i), link);
        EXPECT_NEAR(card.completion_time, row.ct, 0.01) << row.name;
        EXPECT_NEAR(card.availability_score, row.as, 0.01) << row.name;
    }
}

TEST(ScoreDevice, Fd5NeedsTheUnroundedExecutionTime)
{
    // The table prints FD5's E_t as 0.33 but its C_t and A_s only follow
    // from 1/3. With 0.33 verbatim both drift past the 0.01 tolerance.
    const double rounded = completion_time(0.33, 0.2, 0.9, 0.55);
    EXPECT_NEAR(rounded, 3.333, 0.001);
    EXPECT_GT(std::abs(rounded - 3.37), 0.01);
    EXPECT_GT(std::abs(availability_score(5, rounded) - 1.485), 0.01);

    const double exact = completion_time(1.0 / 3.0, 0.2, 0.9, 0.55);
    EXPECT_NEAR(exact, 3.37, 0.01);
    EXPECT_NEAR(availability_score(5, exact), 1.485, 0.01);
}

TEST(ScoreDevice, Fd4AndFd5ExecutionTimesDisagreeWithListedCapacity)
{
    // 1000 MI on the listed 200 and 300 MIPS would give 5 and 3.33 s.
    EXPECT_EQ(execution_time(job(1000), cpu(200)), 5.0);
    EXPECT_NEAR(execution_time(job(1000), cpu(300)), 3.33, 0.01);
    EXPECT_EQ(execution_time(job(1000), fd_node(3)), 0.5);
}

TEST(ScoreDevice, UnitFactorsReduceToExecutionTime)
{
    FogNode n = cpu(2000);
    n.max_supported_distance = 10;
    n.battery_charge = 50;
    n.discharge_rates = {1};
    const auto card = score_device(job(1000), n, fogsim::testing::fast_link());
    EXPECT_EQ(card.completion_time, 0.5);
    EXPECT_EQ(card.availability_score, 100.0);
}
