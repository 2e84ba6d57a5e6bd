#include "fogsim/engine.hpp"
#include "fogsim/error.hpp"
#include "fogsim/network.hpp"
#include "fogsim/policy.hpp"
#include "fogsim/pricing.hpp"
#include "fogsim/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>

namespace fogsim::engine {

namespace {

constexpr double bits_per_byte = 8.0;
constexpr double kilo = 1024.0;
constexpr double infinity = std::numeric_limits<double>::infinity();

} // namespace

std::vector<Application> generate_workload(const Scenario& scenario)
{
    const auto& w = scenario.workload;
    std::vector<Application> apps;

    if (!w.tasks.empty()) {
        std::map<std::uint64_t, std::size_t> index;
        std::uint64_t next_id = 0;
        for (const auto& spec : w.tasks) {
            auto [it, inserted] = index.try_emplace(spec.app, apps.size());
            if (inserted) {
                Application app;
                app.id = spec.app;
                app.user_id = spec.app;
                app.deadline_variation = scenario.dynamics.deadline_variation_pct;
                apps.push_back(app);
            }
            Task t;
            t.id = next_id++;
            t.app_id = spec.app;
            t.length = spec.length;
            t.data_size = spec.data_bytes * bits_per_byte;
            t.deadline = spec.deadline;
            t.submit_time = spec.submit;
            apps[it->second].tasks.push_back(t);
        }
        return apps;
    }

    Rng rng(scenario.seed, "workload");
    apps.reserve(w.app_count);
    for (std::uint32_t a = 0; a < w.app_count; ++a) {
        Application app;
        app.id = a;
        app.user_id = a;
        app.deadline_variation = scenario.dynamics.deadline_variation_pct;
        const Seconds submit = rng.uniform(0.0, w.arrival_window_s);
        for (std::uint32_t k = 0; k < w.tasks_per_app; ++k) {
            Task t;
            t.id = static_cast<std::uint64_t>(a) * w.tasks_per_app + k;
            t.app_id = a;
            t.length = w.task_length;
            t.data_size = rng.uniform(w.data_bytes.lo, w.data_bytes.hi) * bits_per_byte;
            t.deadline = std::max(w.min_deadline_s, rng.uniform(w.deadline_s.lo, w.deadline_s.hi));
            t.submit_time = submit;
            app.tasks.push_back(t);
        }
        apps.push_back(std::move(app));
    }
    return apps;
}

double next_utilisation(double base, const Range& variation_pct, Rng& rng)
{
    const double swing = rng.uniform(variation_pct.lo, variation_pct.hi) / 100.0;
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    return std::clamp(base + sign * swing, 0.0, 0.95);
}

std::vector<UtilisationSample> fluctuation_process(double base, const DynamicsSpec& dynamics, Seconds horizon,
                                                   Rng& rng)
{
    std::vector<UtilisationSample> out;
    if (!(dynamics.fluctuation_period_s > 0.0)) return out;
    for (Seconds t = dynamics.fluctuation_period_s; t <= horizon; t += dynamics.fluctuation_period_s) {
        out.push_back({t, next_utilisation(base, dynamics.utilisation_variation_pct, rng)});
    }
    return out;
}

std::vector<DeadlineChangeSample> deadline_change_process(const Task& task, double variation_pct,
                                                          std::uint32_t changes, Rng& rng)
{
    std::vector<DeadlineChangeSample> out;
    if (!(variation_pct > 0.0)) return out;
    for (std::uint32_t k = 0; k < changes; ++k) {
        DeadlineChangeSample s;
        s.time = task.submit_time + rng.uniform(0.1, 0.6) * task.deadline;
        s.factor = 1.0 + rng.uniform(-variation_pct, variation_pct) / 100.0;
        out.push_back(s);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
    return out;
}

namespace {

using metrics::Leg;
using policy::Candidate;

struct Device {
    FogNode node;
    NetworkLink link;
    std::uint32_t cluster = 0;
    bool server = false;
    bool alive = true;
    double base_native = 0.0;
    double native_discharge = 0.0;
    std::vector<std::size_t> running;
    Mips committed = 0.0;     // demand rate of everything placed here
    std::size_t assigned = 0; // running plus in transit towards this device
    std::uint64_t version = 0;
    Seconds last_update = 0.0;
    std::optional<Rng> fluctuation;
    std::vector<double> history; // available-CPU fraction per interval
    std::vector<Mips> window;    // home-request demand since the last rotation
};

struct TaskRun {
    enum class State { Pending, Transit, Running, Done };

    Task task;
    bool peer = false;
    std::uint32_t cluster = 0;
    State state = State::Pending;
    std::size_t device = 0;
    Mips demand = 0.0; // MIPS needed to finish by the initial deadline
    Seconds abs_deadline = 0.0;
    Seconds segment_start = 0.0;
    std::uint32_t migrations = 0;
    bool cloud_storage = false;
    bool flagged = false;
    Seconds finish = 0.0;
    TrafficCounters traffic;
    std::vector<DeadlineChangeSample> changes;
};

class Simulation {
public:
    Simulation(const Scenario& scenario, const RunSettings& settings, const Probes& probes)
        : sc_(scenario), settings_(settings), probes_(probes)
    {
        validate(scenario);
        build_fleet();
        build_network();
        build_workload();
    }

    RunTrace execute()
    {
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            if (ev.time > sc_.dynamics.max_sim_time_s) break;
            now_ = ev.time;
            if (probes_.on_event) probes_.on_event(ev);
            dispatch(ev);
        }
        return finish_run();
    }

private:
    // ---- setup -------------------------------------------------------------

    void build_fleet()
    {
        const auto& f = sc_.fleet;
        const auto mode = sc_.policy.scoring.throughput;
        auto add = [&](FogNode node, BitsPerSecond bw, std::uint32_t cluster, bool server, double discharge) {
            node.id = NodeId{static_cast<std::uint32_t>(devices_.size())};
            Device d;
            d.node = std::move(node);
            d.link = access_link(bw, d.node.distance);
            d.cluster = cluster;
            d.server = server;
            d.base_native = d.node.native_utilisation;
            d.native_discharge = discharge;
            if (!server && sc_.dynamics.fluctuation_period_s > 0.0) {
                d.fluctuation.emplace(sc_.seed, "fluctuation", devices_.size());
            }
            devices_.push_back(std::move(d));
        };
        auto server_node = [&](std::uint32_t c) {
            FogNode n;
            n.name = "FS" + std::to_string(c);
            n.tier = Tier::FogServer;
            n.cpu_capacity = f.server_mips;
            n.mains_powered = true;
            n.max_supported_distance = f.max_supported_distance_m;
            n.distance = mode == scoring::ThroughputMode::Literal ? n.max_supported_distance : 0.0;
            return n;
        };

        if (!f.nodes.empty()) {
            std::uint32_t clusters = 0;
            for (const auto& spec : f.nodes) clusters = std::max(clusters, spec.cluster + 1);
            std::vector<bool> has_server(clusters, false);
            for (const auto& spec : f.nodes) {
                FogNode n;
                n.name = spec.name;
                n.tier = spec.tier;
                n.cpu_capacity = spec.mips;
                n.native_utilisation = spec.native_utilisation;
                n.free_resource_fraction = 1.0 - spec.native_utilisation;
                n.caf_score = spec.caf;
                n.distance = spec.distance_m;
                n.max_supported_distance = spec.max_supported_distance_m;
                n.battery_charge = spec.battery_pct;
                n.mains_powered = spec.mains_powered || spec.tier != Tier::FogDevice;
                double discharge = 0.0;
                for (double r : spec.discharge_rates) discharge += r;
                const bool server = spec.tier == Tier::FogServer;
                if (server) has_server[spec.cluster] = true;
                add(std::move(n), spec.bandwidth_bps, spec.cluster, server, discharge);
            }
            for (std::uint32_t c = 0; c < clusters; ++c) {
                if (!has_server[c]) add(server_node(c), f.server_bandwidth_bps, c, true, 0.0);
            }
            clusters_ = clusters;
        } else {
            Rng rng(sc_.seed, "fleet");
            for (std::uint32_t c = 0; c < f.clusters; ++c) {
                add(server_node(c), f.server_bandwidth_bps, c, true, 0.0);
                for (std::uint32_t k = 0; k < f.devices_per_cluster; ++k) {
                    FogNode n;
                    n.name = "FD" + std::to_string(c) + "." + std::to_string(k);
                    n.cpu_capacity = rng.uniform(f.device_mips.lo, f.device_mips.hi);
                    n.caf_score = rng.uniform(f.caf_pct.lo, f.caf_pct.hi) / 100.0;
                    n.max_supported_distance = f.max_supported_distance_m;
                    n.distance = rng.uniform(f.distance_m.lo, f.distance_m.hi);
                    n.battery_charge = rng.uniform(f.battery_pct.lo, f.battery_pct.hi);
                    n.native_utilisation = rng.uniform(f.native_utilisation.lo, f.native_utilisation.hi);
                    n.free_resource_fraction = 1.0 - n.native_utilisation;
                    const double discharge =
                        rng.uniform(f.native_discharge_pct_per_min.lo, f.native_discharge_pct_per_min.hi);
                    add(std::move(n), f.device_bandwidth_bps, c, false, discharge);
                }
            }
            clusters_ = f.clusters;
        }

        for (std::size_t i = 0; i < devices_.size(); ++i) {
            auto& d = devices_[i];
            d.history.push_back(1.0 - d.node.native_utilisation);
            if (d.fluctuation) push(sc_.dynamics.fluctuation_period_s, EventKind::UtilisationChanged, i, 0);
        }
        for (std::size_t k = 0; k < sc_.dynamics.utilisation_events.size(); ++k) {
            const auto& ev = sc_.dynamics.utilisation_events[k];
            const auto it = std::find_if(devices_.begin(), devices_.end(),
                                         [&](const Device& d) { return d.node.name == ev.node; });
            if (it == devices_.end()) {
                throw Error(ErrorKind::Config, "dynamics.utilisation_events: unknown node '" + ev.node + "'");
            }
            push(ev.time, EventKind::UtilisationChanged, static_cast<std::size_t>(it - devices_.begin()), k + 1);
        }
    }

    NetworkLink access_link(BitsPerSecond bw, double distance_m) const
    {
        const auto& n = sc_.network;
        NetworkLink link;
        link.bandwidth_a = bw;
        link.bandwidth_b = sc_.fleet.access_point_bandwidth_bps;
        link.capacity = std::min(link.bandwidth_a, link.bandwidth_b);
        link.medium_throughput = n.medium_throughput;
        link.queuing_delay = n.queuing == network::Queuing::Enabled ? n.queuing_delay_s : 0.0;
        link.propagation_delay = network::propagation_delay(distance_m / 1000.0, network::Medium::Microwave);
        link.frame_length = n.frame_length_bits;
        link.transmission_rate = n.transmission_rate_bps;
        link.processing_delay = network::processing_delay(n.frame_length_bits, n.transmission_rate_bps);
        link.const_overhead = n.const_overhead_s;
        return link;
    }

    void build_network()
    {
        const auto& n = sc_.network;
        NetworkLink ap = access_link(sc_.fleet.access_point_bandwidth_bps, 0.0);
        NetworkLink server = access_link(sc_.fleet.server_bandwidth_bps, 0.0);
        server.bandwidth_b = sc_.fleet.server_bandwidth_bps;
        server.capacity = sc_.fleet.server_bandwidth_bps;
        control_path_.links = {ap, server};
        control_delay_ = network::packetized_delay(n.control_message_bits, control_path_, n.queuing);
        cloud_propagation_ = network::propagation_delay(n.cloud_distance_km, network::Medium::Wired);
    }

    void build_workload()
    {
        apps_ = generate_workload(sc_);
        Rng deadlines(sc_.seed, "deadlines");
        Rng storage(sc_.seed, "storage");
        std::map<std::uint64_t, bool> explicit_storage;
        if (!sc_.workload.tasks.empty()) {
            for (std::size_t i = 0; i < sc_.workload.tasks.size(); ++i) {
                explicit_storage[i] = sc_.workload.tasks[i].cloud_storage;
            }
        }

        std::vector<std::uint64_t> home_per_cluster(clusters_, 0);
        app_tasks_.resize(apps_.size());
        for (std::size_t a = 0; a < apps_.size(); ++a) {
            const auto& app = apps_[a];
            const std::uint32_t cluster = static_cast<std::uint32_t>(a % clusters_);
            for (const auto& task : app.tasks) {
                TaskRun run;
                run.task = task;
                run.cluster = cluster;
                run.demand = task.length / task.deadline;
                run.abs_deadline = task.submit_time + task.deadline;
                const bool stored = storage.bernoulli(sc_.workload.cloud_storage_fraction);
                run.cloud_storage = explicit_storage.empty() ? stored : explicit_storage[task.id];
                run.changes = deadline_change_process(task, sc_.dynamics.deadline_variation_pct,
                                                      sc_.dynamics.deadline_changes_per_task, deadlines);
                app_tasks_[a].push_back(tasks_.size());
                tasks_.push_back(std::move(run));
                ++home_per_cluster[cluster];
            }
            std::vector<Seconds> times;
            for (const auto& task : app.tasks) times.push_back(task.submit_time);
            std::sort(times.begin(), times.end());
            times.erase(std::unique(times.begin(), times.end()), times.end());
            for (Seconds t : times) push(t, EventKind::AppSubmitted, a, 0);
        }
        home_count_ = tasks_.size();

        for (std::size_t i = 0; i < home_count_; ++i) {
            for (std::size_t k = 0; k < tasks_[i].changes.size(); ++k) {
                push(tasks_[i].changes[k].time, EventKind::DeadlineChanged, i, k);
            }
        }

        const auto& w = sc_.workload;
        for (std::uint32_t c = 0; c < clusters_; ++c) {
            Rng rng(sc_.seed, "peer", c);
            const auto count = static_cast<std::uint64_t>(
                std::llround(sc_.dynamics.peer_load_factor * static_cast<double>(home_per_cluster[c])));
            for (std::uint64_t k = 0; k < count; ++k) {
                TaskRun run;
                run.peer = true;
                run.cluster = c;
                run.task.id = tasks_.size();
                run.task.length = w.task_length;
                run.task.data_size = w.data_bytes.lo * bits_per_byte;
                run.task.submit_time = rng.uniform(0.0, w.arrival_window_s);
                run.task.deadline = std::max(w.min_deadline_s, rng.uniform(w.deadline_s.lo, w.deadline_s.hi));
                run.demand = run.task.length / run.task.deadline;
                run.abs_deadline = run.task.submit_time + run.task.deadline;
                push(run.task.submit_time, EventKind::PeerSubmitted, tasks_.size(), 0);
                tasks_.push_back(std::move(run));
            }
        }
        unfinished_ = tasks_.size();

        if (settings_.reservation && sc_.dynamics.reservation_window_s > 0.0) {
            push(sc_.dynamics.reservation_window_s, EventKind::ReservationRotated, 0, 0);
        }
    }

    // ---- event plumbing ----------------------------------------------------

    void push(Seconds time, EventKind kind, std::uint64_t subject, std::uint64_t detail, std::uint64_t version = 0)
    {
        queue_.push(Event{time, sequence_++, kind, subject, detail, version});
    }

    void dispatch(const Event& ev)
    {
        switch (ev.kind) {
        case EventKind::AppSubmitted: on_app_submitted(ev.subject); break;
        case EventKind::PeerSubmitted: on_peer_submitted(ev.subject); break;
        case EventKind::TaskStarted:
        case EventKind::MigrationCompleted: on_task_arrived(ev.subject); break;
        case EventKind::TaskCompleted: on_completion_check(ev.subject, ev.version); break;
        case EventKind::UtilisationChanged: on_utilisation_changed(ev.subject, ev.detail); break;
        case EventKind::DeadlineChanged: on_deadline_changed(ev.subject, ev.detail); break;
        case EventKind::ReservationRotated: on_reservation_rotated(); break;
        }
    }

    // ---- device model ------------------------------------------------------

    double throughput(const Device& d) const
    {
        return std::max(scoring::throughput_by_distance(d.node, sc_.policy.scoring.throughput), 1e-3);
    }

    /// Work rate available to Fog tasks on the device, in MI per second.
    Mips effective_capacity(const Device& d) const
    {
        if (!d.alive) return 0.0;
        // a fluctuation factor above 1 cannot lift work past the free capacity
        const Mips free = d.node.cpu_capacity * (1.0 - d.node.native_utilisation);
        return std::min(free, free * d.node.caf_score * throughput(d));
    }

    Mips share(const Device& d) const
    {
        return d.running.empty() ? 0.0 : effective_capacity(d) / static_cast<double>(d.running.size());
    }

    std::vector<double> discharge_rates(const Device& d) const
    {
        std::vector<double> rates;
        if (d.native_discharge > 0.0) rates.push_back(d.native_discharge);
        if (sc_.fleet.task_discharge_pct_per_min > 0.0) {
            rates.insert(rates.end(), d.running.size(), sc_.fleet.task_discharge_pct_per_min);
        }
        return rates;
    }

    void advance(Device& d)
    {
        const Seconds dt = now_ - d.last_update;
        if (dt > 0.0) {
            const Mips rate = share(d);
            for (std::size_t ti : d.running) {
                auto& t = tasks_[ti].task;
                t.completed_work = std::min(t.length, t.completed_work + rate * dt);
            }
            if (!d.node.mains_powered) {
                double drain = 0.0;
                for (double r : discharge_rates(d)) drain += r;
                d.node.battery_charge = std::max(0.0, d.node.battery_charge - drain * dt / 60.0);
            }
        }
        d.last_update = now_;
    }

    void reschedule(std::size_t di)
    {
        auto& d = devices_[di];
        ++d.version;
        if (d.running.empty()) return;

        // executed MIPS + native load must stay within capacity
        const Mips rate = share(d);
        const Mips allocated = rate * static_cast<double>(d.running.size());
        stats_.max_capacity_excess = std::max(
            stats_.max_capacity_excess, allocated + d.node.native_utilisation * d.node.cpu_capacity - d.node.cpu_capacity);

        if (!(rate > 0.0)) return;
        Seconds earliest = infinity;
        for (std::size_t ti : d.running) earliest = std::min(earliest, tasks_[ti].task.remaining_work() / rate);
        push(now_ + earliest, EventKind::TaskCompleted, di, 0, d.version);
    }

    Candidate snapshot(const Device& d) const
    {
        Candidate c;
        c.node = d.node;
        c.node.discharge_rates = discharge_rates(d);
        // the share a newcomer would get under equal processor sharing
        c.node.free_resource_fraction = std::clamp((1.0 - d.node.native_utilisation) / static_cast<double>(d.assigned + 1),
                                                   sc_.policy.min_free_fraction, 1.0);
        c.link = d.link;
        c.link.sharing_users = static_cast<std::uint32_t>(d.assigned + 1);
        return c;
    }

    std::vector<Candidate> candidates(std::uint32_t cluster) const
    {
        std::vector<Candidate> out;
        for (const auto& d : devices_) {
            if (d.cluster == cluster && !d.server && d.alive) out.push_back(snapshot(d));
        }
        if (out.empty()) {
            for (const auto& d : devices_) {
                if (d.cluster == cluster && d.server) out.push_back(snapshot(d));
            }
        }
        return out;
    }

    Seconds transfer_time(Bits bits, const Device& d) const
    {
        NetworkLink link = d.link;
        link.sharing_users = static_cast<std::uint32_t>(d.running.size() + 1);
        return bits / (network::available_bandwidth(link) * throughput(d))
             + network::path_delay(NetworkPath{{link}});
    }

    std::uint64_t packets(Bits bits) const
    {
        return static_cast<std::uint64_t>(std::ceil(bits / sc_.network.frame_length_bits));
    }

    void leg(TaskRun& run, Leg kind, std::uint64_t count, Seconds duration)
    {
        if (run.peer) return;
        metrics::LegRecord rec{run.task.id, kind, count, duration};
        metrics::add_leg(run.traffic, rec);
        legs_.push_back(rec);
        if (probes_.on_leg) probes_.on_leg(rec);
    }

    void bill(const TaskRun& run)
    {
        auto& ledger = ledgers_[run.task.app_id];
        const double data_kb = run.task.data_size / bits_per_byte / kilo;
        const double result_kb = data_kb * sc_.workload.response_size_ratio;
        const double control_kb = sc_.network.control_message_bits / bits_per_byte / kilo;
        ledger.device.connectivity_minutes += std::ceil(run.task.deadline / 60.0);
        ledger.device.message_kb.push_back(data_kb);
        ledger.device.message_kb.push_back(result_kb);
        ledger.device.processing_kb.push_back(data_kb);
        ledger.server.message_kb.push_back(control_kb);
        ledger.server.message_kb.push_back(control_kb);
        if (run.cloud_storage) {
            ledger.cloud.message_kb.push_back(result_kb);
            ledger.cloud.processing_kb.push_back(result_kb);
        }
    }

    // ---- handlers ----------------------------------------------------------

    void on_app_submitted(std::size_t app_index)
    {
        for (std::size_t ti : app_tasks_[app_index]) {
            const auto& run = tasks_[ti];
            if (run.state == TaskRun::State::Pending && run.task.submit_time <= now_) start_home_task(ti);
        }
    }

    void start_home_task(std::size_t ti)
    {
        auto& run = tasks_[ti];
        bill(run);
        stats_.submitted_work += run.task.length;
        ++stats_.home_requests;

        leg(run, Leg::InternalFog, 1, control_delay_);
        leg(run, Leg::ServerProcessing, 0, sc_.policy.broker_decision_s);
        leg(run, Leg::InternalFogResponse, 1, control_delay_);

        const auto cands = candidates(run.cluster);
        const auto ranked = policy::rank(settings_.policy, run.task, cands, sc_.policy.scoring);
        const std::size_t di = ranked.front().id.value;
        auto& d = devices_[di];
        d.window.push_back(run.demand);
        d.committed += run.demand;
        ++d.assigned;
        run.device = di;
        run.state = TaskRun::State::Transit;

        const Seconds upload = transfer_time(run.task.data_size, d);
        leg(run, Leg::UserSend, packets(run.task.data_size), upload);
        push(now_ + 2.0 * control_delay_ + sc_.policy.broker_decision_s + upload, EventKind::TaskStarted, ti, di);
    }

    void on_peer_submitted(std::size_t ti)
    {
        auto& run = tasks_[ti];
        ++stats_.peer_requests;
        const auto cands = candidates(run.cluster);
        const auto ranked = policy::rank(settings_.policy, run.task, cands, sc_.policy.scoring);

        std::optional<std::size_t> chosen;
        if (!settings_.reservation) {
            chosen = ranked.front().id.value;
        } else {
            for (const auto& r : ranked) {
                const auto& d = devices_[r.id.value];
                if (policy::peer_admissible(d.node, d.committed, run.demand)) {
                    chosen = r.id.value;
                    break;
                }
            }
        }
        if (!chosen) {
            ++stats_.peer_declined;
            run.state = TaskRun::State::Done;
            --unfinished_;
            return;
        }

        auto& d = devices_[*chosen];
        if (settings_.reservation) {
            // independent re-check of the admission gate
            const Mips spare = d.node.cpu_capacity * (1.0 - d.node.native_utilisation)
                             - d.node.reservation.required_reservation - d.committed;
            if (run.demand > spare) ++stats_.reservation_gate_breaches;
        }
        ++stats_.peer_admitted;
        stats_.submitted_work += run.task.length;
        d.committed += run.demand;
        ++d.assigned;
        run.device = *chosen;
        on_task_arrived(ti);
    }

    void on_task_arrived(std::size_t ti)
    {
        auto& run = tasks_[ti];
        auto& d = devices_[run.device];
        advance(d);
        d.running.push_back(ti);
        run.state = TaskRun::State::Running;
        run.segment_start = now_;
        reschedule(run.device);
    }

    void on_completion_check(std::size_t di, std::uint64_t version)
    {
        auto& d = devices_[di];
        if (version != d.version) return;
        advance(d);
        std::vector<std::size_t> done;
        for (std::size_t ti : d.running) {
            const auto& t = tasks_[ti].task;
            if (t.remaining_work() <= 1e-9 * t.length) done.push_back(ti);
        }
        for (std::size_t ti : done) finish_task(ti);
        reschedule(di);
    }

    void detach(std::size_t ti)
    {
        auto& run = tasks_[ti];
        auto& d = devices_[run.device];
        d.running.erase(std::find(d.running.begin(), d.running.end(), ti));
        d.committed = std::max(0.0, d.committed - run.demand);
        --d.assigned;
    }

    void finish_task(std::size_t ti)
    {
        auto& run = tasks_[ti];
        detach(ti);
        run.task.completed_work = run.task.length;
        run.state = TaskRun::State::Done;
        --unfinished_;
        stats_.completed_work += run.task.length;
        if (run.peer) return;

        const auto& d = devices_[run.device];
        leg(run, Leg::DeviceProcessing, 0, now_ - run.segment_start);

        const Bits result = run.task.data_size * sc_.workload.response_size_ratio;
        const std::uint64_t user_packets = run.traffic.user_packets;
        std::uint64_t cloud_packets = 0;
        if (run.cloud_storage) {
            cloud_packets = std::min(packets(result), user_packets);
            const auto& n = sc_.network;
            const Seconds to_server = result / sc_.fleet.server_bandwidth_bps + network::path_delay(control_path_);
            const Seconds ack_server = n.control_message_bits / sc_.fleet.server_bandwidth_bps
                                     + network::path_delay(control_path_);
            leg(run, Leg::InternalCloud, cloud_packets, to_server);
            leg(run, Leg::CloudSend, cloud_packets, result / n.cloud_bandwidth_bps + cloud_propagation_);
            leg(run, Leg::CloudProcessing, 0, sc_.policy.cloud_processing_s);
            leg(run, Leg::CloudResponse, cloud_packets,
                n.control_message_bits / n.cloud_bandwidth_bps + cloud_propagation_);
            leg(run, Leg::InternalCloudResponse, cloud_packets, ack_server);
        }
        const Seconds response = transfer_time(result, d);
        leg(run, Leg::FogResponse, user_packets - cloud_packets, response);
        run.finish = now_ + response;
        record(run);
    }

    void record(const TaskRun& run)
    {
        metrics::RequestRecord r;
        r.request_id = run.task.id;
        r.app_id = run.task.app_id;
        r.traffic = run.traffic;
        r.submit_time = run.task.submit_time;
        r.finish_time = run.finish;
        r.deadline = run.abs_deadline - run.task.submit_time;
        records_.push_back(r);
    }

    void on_utilisation_changed(std::size_t di, std::uint64_t detail)
    {
        auto& d = devices_[di];
        advance(d);
        if (detail == 0) {
            d.node.native_utilisation =
                next_utilisation(d.base_native, sc_.dynamics.utilisation_variation_pct, *d.fluctuation);
        } else {
            d.node.native_utilisation = sc_.dynamics.utilisation_events[detail - 1].native_utilisation;
        }
        d.history.push_back(1.0 - d.node.native_utilisation);
        if (!d.node.mains_powered && d.node.battery_charge <= 0.0) d.alive = false;
        reschedule(di);
        monitor(di);
        if (detail == 0 && unfinished_ > 0) {
            push(now_ + sc_.dynamics.fluctuation_period_s, EventKind::UtilisationChanged, di, 0);
        }
    }

    void monitor(std::size_t di)
    {
        const auto running = devices_[di].running;
        for (std::size_t ti : running) {
            auto& run = tasks_[ti];
            if (run.state != TaskRun::State::Running) continue;
            const Seconds time_left = run.abs_deadline - now_;
            const Seconds projected = projected_time(run);
            if (!devices_[di].alive) {
                reassess(ti, projected, time_left, true);
            } else if (!run.peer && projected >= time_left) {
                reassess(ti, projected, time_left, false);
            }
        }
    }

    Seconds projected_time(const TaskRun& run) const
    {
        const Mips rate = share(devices_[run.device]);
        return rate > 0.0 ? run.task.remaining_work() / rate : infinity;
    }

    void flag(TaskRun& run)
    {
        if (run.peer || run.flagged) return;
        run.flagged = true;
        ++stats_.violation_flags;
    }

    void reassess(std::size_t ti, Seconds projected, Seconds time_left, bool forced)
    {
        auto& run = tasks_[ti];
        if (!forced && (run.migrations >= sc_.dynamics.max_migrations_per_task || !(time_left > 0.0))) {
            flag(run);
            return;
        }
        Task moved = run.task;
        moved.completed_work = checkpoint(moved);
        const auto cands = candidates(run.cluster);
        const policy::DeadlineChange change{NodeId{static_cast<std::uint32_t>(run.device)}, time_left, projected};
        const auto decision = policy::handle_deadline_change(moved, change, cands, settings_.policy,
                                                             sc_.policy.feasibility, sc_.policy.scoring);
        using Outcome = policy::MigrationDecision::Outcome;
        if (decision.outcome == Outcome::Migrate) {
            const auto& pick = *std::find_if(decision.tentative.begin(), decision.tentative.end(),
                                             [&](const auto& r) { return r.id == *decision.target; });
            // only move when the target is expected to finish sooner than staying
            if (forced || pick.score.completion_time + decision.migration_time < projected) {
                migrate(ti, decision.target->value, decision.migration_time);
            } else {
                flag(run);
            }
            return;
        }
        if (decision.outcome == Outcome::Violation) flag(run);
        if (forced && !decision.tentative.empty()) {
            migrate(ti, decision.tentative.front().id.value, decision.tentative.front().score.migration_time);
        }
    }

    Mips checkpoint(const Task& t) const
    {
        const Mips sub = sc_.workload.subtask_length;
        return sub > 0.0 ? std::floor(t.completed_work / sub + 1e-9) * sub : t.completed_work;
    }

    void migrate(std::size_t ti, std::size_t target, Seconds migration_time)
    {
        auto& run = tasks_[ti];
        const std::size_t from = run.device;
        advance(devices_[from]);
        detach(ti);
        leg(run, Leg::DeviceProcessing, 0, now_ - run.segment_start);
        run.task.completed_work = checkpoint(run.task);
        reschedule(from);

        devices_[target].committed += run.demand;
        ++devices_[target].assigned;
        run.device = target;
        run.state = TaskRun::State::Transit;
        ++run.migrations;
        ++stats_.migrations;
        leg(run, Leg::InternalFog, packets(run.task.data_size), migration_time);
        push(now_ + migration_time, EventKind::MigrationCompleted, ti, target);
    }

    void on_deadline_changed(std::size_t ti, std::uint64_t k)
    {
        auto& run = tasks_[ti];
        if (run.state == TaskRun::State::Done) return;
        const Seconds left = run.abs_deadline - now_;
        if (!(left > 0.0)) return;
        const Seconds updated = std::max(left * run.changes[k].factor, sc_.dynamics.min_remaining_deadline_s);
        run.abs_deadline = now_ + updated;
        ++stats_.deadline_changes;
        if (run.state != TaskRun::State::Running) return;
        advance(devices_[run.device]);
        const Seconds projected = projected_time(run);
        if (projected >= updated) reassess(ti, projected, updated, false);
    }

    void on_reservation_rotated()
    {
        std::vector<FogNode> nodes;
        std::vector<std::size_t> index;
        std::map<NodeId, double> current;
        for (std::size_t i = 0; i < devices_.size(); ++i) {
            auto& d = devices_[i];
            if (d.server) continue;
            auto& r = d.node.reservation;
            if (d.window.empty()) {
                r = ReservationState{};
            } else {
                const std::span<const Mips> earlier(d.window.data(), d.window.size() - 1);
                r.reserved_value = policy::history_reservation_value(earlier);
                r.last_app_request = d.window.back();
                r.total_apps_processed = 1; // one slice of history behind R_v
            }
            d.window.clear();
            current[d.node.id] = d.node.native_utilisation;
            nodes.push_back(d.node);
            index.push_back(i);
        }
        policy::reserve(nodes, current);
        for (std::size_t k = 0; k < nodes.size(); ++k) devices_[index[k]].node.reservation = nodes[k].reservation;
        if (unfinished_ > 0) push(now_ + sc_.dynamics.reservation_window_s, EventKind::ReservationRotated, 0, 0);
    }

    // ---- wrap-up -----------------------------------------------------------

    RunTrace finish_run()
    {
        for (std::size_t ti = 0; ti < home_count_; ++ti) {
            auto& run = tasks_[ti];
            if (run.state == TaskRun::State::Done) continue;
            if (run.state == TaskRun::State::Pending) continue;
            run.finish = now_;
            record(run);
        }
        std::sort(records_.begin(), records_.end(),
                  [](const auto& a, const auto& b) { return a.request_id < b.request_id; });

        std::map<std::uint64_t, Dollars> app_cost;
        for (const auto& [app, ledger] : ledgers_) app_cost[app] = pricing::total_app_cost(ledger, sc_.prices);

        RunTrace out;
        out.report = metrics::summarize(
            records_, [&](std::uint64_t app) { return app_cost.at(app); }, sc_.sla.base_penalty,
            sc_.sla.penalty_rate, sc_.unit_costs);
        for (const auto& [app, cost] : app_cost) out.report.total_cost += cost;

        stats_.violated_requests = static_cast<std::uint64_t>(
            std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.violated(); }));
        for (const auto& r : records_) stats_.makespan = std::max(stats_.makespan, r.finish_time);
        double fluctuation = 0.0;
        std::size_t sampled = 0;
        for (const auto& d : devices_) {
            if (d.server || d.history.size() < 2) continue;
            if (std::any_of(d.history.begin(), d.history.end(), [](double x) { return !(x > 0.0); })) continue;
            fluctuation += scoring::cpu_fluctuation_rate(d.history);
            ++sampled;
        }
        stats_.mean_cpu_fluctuation_pct = sampled ? fluctuation / static_cast<double>(sampled) : 0.0;

        out.report.scenario_id = sc_.id;
        out.report.policy = std::string(policy::to_string(settings_.policy));
        out.report.reservation = settings_.reservation;
        out.report.seed = sc_.seed;
        out.report.stats = stats_;
        out.requests = std::move(records_);
        out.legs = std::move(legs_);
        return out;
    }

    const Scenario& sc_;
    RunSettings settings_;
    Probes probes_;

    std::vector<Device> devices_;
    std::uint32_t clusters_ = 1;
    std::vector<Application> apps_;
    std::vector<std::vector<std::size_t>> app_tasks_;
    std::vector<TaskRun> tasks_;
    std::size_t home_count_ = 0;
    std::size_t unfinished_ = 0;

    NetworkPath control_path_;
    Seconds control_delay_ = 0.0;
    Seconds cloud_propagation_ = 0.0;

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::uint64_t sequence_ = 0;
    Seconds now_ = 0.0;

    std::vector<metrics::LegRecord> legs_;
    std::vector<metrics::RequestRecord> records_;
    std::map<std::uint64_t, UsageLedger> ledgers_;
    RunStats stats_;
};

} // namespace

RunTrace run_traced(const Scenario& scenario, const RunSettings& settings, const Probes& probes)
{
    Simulation sim(scenario, settings, probes);
    return sim.execute();
}

MetricsReport run(const Scenario& scenario, const RunSettings& settings, const Probes& probes)
{
    return run_traced(scenario, settings, probes).report;
}

} // namespace fogsim::engine
