#pragma once

#include "fogsim/core_model.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/scenario.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fogsim::engine {

enum class EventKind {
    AppSubmitted,
    PeerSubmitted,
    TaskStarted,
    TaskCompleted,
    UtilisationChanged,
    DeadlineChanged,
    MigrationCompleted,
    ReservationRotated,
};

/// Events are processed in (time, sequence) order; `version` lets the engine
/// drop completion checks made stale by later changes on the same device.
/// For TaskStarted and MigrationCompleted, `subject` is the task and `detail`
/// the device index (configured nodes first, in order, then cluster servers).
struct Event {
    Seconds time = 0.0;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::AppSubmitted;
    std::uint64_t subject = 0;
    std::uint64_t detail = 0;
    std::uint64_t version = 0;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const noexcept
    {
        if (a.time != b.time) return a.time > b.time;
        return a.sequence > b.sequence;
    }
};

/// All applications of a scenario, drawn from the "workload" stream (or copied
/// from the explicit task list).
std::vector<Application> generate_workload(const Scenario& scenario);

struct UtilisationSample {
    Seconds time = 0.0;
    double native_utilisation = 0.0;
};

/// Next native utilisation for a device whose base load is `base`: a swing of
/// random sign whose magnitude lies in the variation band, clamped to [0, 0.95].
double next_utilisation(double base, const Range& variation_pct, Rng& rng);

/// Periodic native-utilisation trace of one device up to `horizon`.
std::vector<UtilisationSample> fluctuation_process(double base, const DynamicsSpec& dynamics, Seconds horizon,
                                                   Rng& rng);

struct DeadlineChangeSample {
    Seconds time = 0.0;
    double factor = 1.0; // applied to the remaining time to deadline
};

/// Deadline changes for one task: each lands within the first 60% of the
/// task's window and scales what remains by a factor in 1 +/- variation.
std::vector<DeadlineChangeSample> deadline_change_process(const Task& task, double variation_pct,
                                                          std::uint32_t changes, Rng& rng);

/// Observer hooks, mainly for invariant checks in tests.
struct Probes {
    std::function<void(const Event&)> on_event;
    std::function<void(const metrics::LegRecord&)> on_leg;
};

/// Runs one policy x reservation cell. Deterministic for a given scenario.
MetricsReport run(const Scenario& scenario, const RunSettings& settings, const Probes& probes = {});

/// Trace-level output of a run: the per-request records plus the raw legs.
struct RunTrace {
    std::vector<metrics::RequestRecord> requests;
    std::vector<metrics::LegRecord> legs;
    MetricsReport report;
};

RunTrace run_traced(const Scenario& scenario, const RunSettings& settings, const Probes& probes = {});

} // namespace fogsim::engine
