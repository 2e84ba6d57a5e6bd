#include "fogsim/config.hpp"
#include "fogsim/error.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace fogsim::config {

namespace {

using nlohmann::json;

constexpr std::string_view fd_table_json = R"json({
  "scenario": { "id": "fd-table", "seed": 1 },
  "fleet": {
    "max_supported_distance_m": 40,
    "task_discharge_pct_per_min": 0,
    "server_bandwidth_bps": 1e9,
    "access_point_bandwidth_bps": 1e9,
    "nodes": [
      { "name": "FD1", "mips": 1000, "native_utilisation": 0.5, "caf": 0.5, "distance_m": 4,
        "max_supported_distance_m": 40, "battery_pct": 50, "discharge_rates": [5], "bandwidth_bps": 1e9 },
      { "name": "FD2", "mips": 500, "native_utilisation": 0.4, "caf": 0.8, "distance_m": 8,
        "max_supported_distance_m": 40, "battery_pct": 60, "discharge_rates": [5], "bandwidth_bps": 1e9 },
      { "name": "FD3", "mips": 100, "native_utilisation": 0.7, "caf": 1.0, "distance_m": 20,
        "max_supported_distance_m": 40, "battery_pct": 80, "discharge_rates": [4], "bandwidth_bps": 1e9 },
      { "name": "FD4", "mips": 2000, "native_utilisation": 0.6, "caf": 1.3, "distance_m": 12,
        "max_supported_distance_m": 40, "battery_pct": 90, "discharge_rates": [3], "bandwidth_bps": 1e9 },
      { "name": "FD5", "mips": 3000, "native_utilisation": 0.8, "caf": 0.9, "distance_m": 18,
        "max_supported_distance_m": 40, "battery_pct": 20, "discharge_rates": [4], "bandwidth_bps": 1e9 }
    ]
  },
  "workload": {
    "tasks": [ { "app": 0, "length": 1000, "data_bytes": 1000, "deadline": 5, "submit": 0 } ]
  },
  "dynamics": {
    "fluctuation_period_s": 0,
    "deadline_variation_pct": 0,
    "peer_load_factor": 0
  },
  "network": { "cloud_bandwidth_bps": 1e9 }
}
)json";

[[noreturn]] void reject(const std::string& field, const std::string& why)
{
    throw Error(ErrorKind::Config, field + ": " + why);
}

/// One JSON object being read; remembers which keys were consumed so leftovers
/// can be reported as unknown fields.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) reject(path_, "must be an object");
    }

    std::string field(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

    const json* find(std::string_view key)
    {
        const auto it = j_.find(std::string(key));
        if (it == j_.end()) return nullptr;
        seen_.insert(std::string(key));
        return &*it;
    }

    void number(std::string_view key, double& out)
    {
        if (const json* v = find(key)) out = as_number(*v, field(key));
    }

    void number(std::string_view key, std::optional<double>& out)
    {
        if (const json* v = find(key)) out = as_number(*v, field(key));
    }

    template <typename Int>
    void integer(std::string_view key, Int& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
                reject(field(key), "must be a non-negative integer");
            }
            const auto raw = v->get<std::uint64_t>();
            if (raw > std::numeric_limits<Int>::max()) reject(field(key), "too large");
            out = static_cast<Int>(raw);
        }
    }

    void boolean(std::string_view key, bool& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) reject(field(key), "must be true or false");
            out = v->get<bool>();
        }
    }

    void text(std::string_view key, std::string& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_string()) reject(field(key), "must be a string");
            out = v->get<std::string>();
        }
    }

    void range(std::string_view key, Range& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_array() || v->size() != 2) reject(field(key), "must be a [low, high] pair");
            out.lo = as_number((*v)[0], field(key));
            out.hi = as_number((*v)[1], field(key));
        }
    }

    void numbers(std::string_view key, std::vector<double>& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_array()) reject(field(key), "must be an array of numbers");
            out.clear();
            for (const auto& x : *v) out.push_back(as_number(x, field(key)));
        }
    }

    void done() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) reject(field(it.key()), "unknown field");
        }
    }

    static double as_number(const json& v, const std::string& field)
    {
        if (!v.is_number()) reject(field, "must be a number");
        return v.get<double>();
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename Enum>
Enum choose(const std::string& field, const std::string& value,
            std::initializer_list<std::pair<std::string_view, Enum>> options)
{
    std::string allowed;
    for (const auto& [name, e] : options) {
        if (name == value) return e;
        allowed += allowed.empty() ? "" : ", ";
        allowed += name;
    }
    reject(field, "expected one of " + allowed + ", got '" + value + "'");
}

void read_scenario(Section& s, Scenario& out)
{
    s.text("id", out.id);
    s.integer("seed", out.seed);
    s.done();
}

void read_node(Section& s, NodeSpec& n)
{
    s.text("name", n.name);
    s.integer("cluster", n.cluster);
    std::string tier;
    s.text("tier", tier);
    if (!tier.empty()) {
        n.tier = choose<Tier>(s.field("tier"), tier, {{"device", Tier::FogDevice}, {"server", Tier::FogServer}});
    }
    s.number("mips", n.mips);
    s.number("native_utilisation", n.native_utilisation);
    s.number("caf", n.caf);
    s.number("distance_m", n.distance_m);
    s.number("max_supported_distance_m", n.max_supported_distance_m);
    s.number("battery_pct", n.battery_pct);
    s.numbers("discharge_rates", n.discharge_rates);
    s.boolean("mains_powered", n.mains_powered);
    s.number("bandwidth_bps", n.bandwidth_bps);
    s.done();
}

void read_fleet(Section& s, FleetSpec& f)
{
    s.integer("clusters", f.clusters);
    s.integer("devices_per_cluster", f.devices_per_cluster);
    s.range("device_mips", f.device_mips);
    s.number("server_mips", f.server_mips);
    s.number("device_bandwidth_bps", f.device_bandwidth_bps);
    s.number("server_bandwidth_bps", f.server_bandwidth_bps);
    s.number("access_point_bandwidth_bps", f.access_point_bandwidth_bps);
    s.range("caf_pct", f.caf_pct);
    s.range("distance_m", f.distance_m);
    s.number("max_supported_distance_m", f.max_supported_distance_m);
    s.range("battery_pct", f.battery_pct);
    s.range("native_utilisation", f.native_utilisation);
    s.range("native_discharge_pct_per_min", f.native_discharge_pct_per_min);
    s.number("task_discharge_pct_per_min", f.task_discharge_pct_per_min);
    if (const json* nodes = s.find("nodes")) {
        if (!nodes->is_array()) reject(s.field("nodes"), "must be an array");
        for (std::size_t i = 0; i < nodes->size(); ++i) {
            Section node((*nodes)[i], s.field("nodes") + "[" + std::to_string(i) + "]");
            NodeSpec spec;
            spec.max_supported_distance_m = f.max_supported_distance_m;
            spec.bandwidth_bps = f.device_bandwidth_bps;
            read_node(node, spec);
            f.nodes.push_back(std::move(spec));
        }
    }
    s.done();
}

void read_workload(Section& s, WorkloadSpec& w)
{
    s.integer("app_count", w.app_count);
    s.integer("tasks_per_app", w.tasks_per_app);
    s.number("task_length", w.task_length);
    s.number("subtask_length", w.subtask_length);
    s.range("data_bytes", w.data_bytes);
    s.range("deadline_s", w.deadline_s);
    s.number("min_deadline_s", w.min_deadline_s);
    s.number("arrival_window_s", w.arrival_window_s);
    s.number("response_size_ratio", w.response_size_ratio);
    s.number("cloud_storage_fraction", w.cloud_storage_fraction);
    if (const json* tasks = s.find("tasks")) {
        if (!tasks->is_array()) reject(s.field("tasks"), "must be an array");
        for (std::size_t i = 0; i < tasks->size(); ++i) {
            Section t((*tasks)[i], s.field("tasks") + "[" + std::to_string(i) + "]");
            TaskSpec spec;
            t.integer("app", spec.app);
            t.number("length", spec.length);
            t.number("data_bytes", spec.data_bytes);
            t.number("deadline", spec.deadline);
            t.number("submit", spec.submit);
            t.boolean("cloud_storage", spec.cloud_storage);
            t.done();
            w.tasks.push_back(spec);
        }
    }
    s.done();
}

void read_dynamics(Section& s, DynamicsSpec& d)
{
    s.range("utilisation_variation_pct", d.utilisation_variation_pct);
    s.number("fluctuation_period_s", d.fluctuation_period_s);
    s.number("deadline_variation_pct", d.deadline_variation_pct);
    s.integer("deadline_changes_per_task", d.deadline_changes_per_task);
    s.number("min_remaining_deadline_s", d.min_remaining_deadline_s);
    s.number("reservation_window_s", d.reservation_window_s);
    s.number("peer_load_factor", d.peer_load_factor);
    s.integer("max_migrations_per_task", d.max_migrations_per_task);
    s.number("max_sim_time_s", d.max_sim_time_s);
    if (const json* events = s.find("utilisation_events")) {
        if (!events->is_array()) reject(s.field("utilisation_events"), "must be an array");
        for (std::size_t i = 0; i < events->size(); ++i) {
            Section e((*events)[i], s.field("utilisation_events") + "[" + std::to_string(i) + "]");
            UtilisationEvent ev;
            e.number("time", ev.time);
            e.text("node", ev.node);
            e.number("native_utilisation", ev.native_utilisation);
            e.done();
            d.utilisation_events.push_back(ev);
        }
    }
    s.done();
}

void read_network(Section& s, NetworkSpec& n)
{
    s.number("medium_throughput", n.medium_throughput);
    s.number("frame_length_bits", n.frame_length_bits);
    s.number("transmission_rate_bps", n.transmission_rate_bps);
    s.number("const_overhead_s", n.const_overhead_s);
    s.number("queuing_delay_s", n.queuing_delay_s);
    std::string queuing;
    s.text("queuing", queuing);
    if (!queuing.empty()) {
        n.queuing = choose<network::Queuing>(s.field("queuing"), queuing,
                                             {{"ignored", network::Queuing::Ignored}, {"enabled", network::Queuing::Enabled}});
    }
    s.number("cloud_distance_km", n.cloud_distance_km);
    s.number("cloud_bandwidth_bps", n.cloud_bandwidth_bps);
    s.number("control_message_bits", n.control_message_bits);
    s.done();
}

void read_policy(Section& s, PolicySpec& p)
{
    if (const json* v = s.find("policies")) {
        if (!v->is_array()) reject(s.field("policies"), "must be an array of policy names");
        p.policies.clear();
        for (const auto& x : *v) {
            if (!x.is_string()) reject(s.field("policies"), "must be an array of policy names");
            const auto kind = policy::parse_policy(x.get<std::string>());
            if (!kind) reject(s.field("policies"), "unknown policy '" + x.get<std::string>() + "'");
            p.policies.push_back(*kind);
        }
    }
    if (const json* v = s.find("reservation")) {
        if (!v->is_array()) reject(s.field("reservation"), "must be an array of booleans");
        p.reservation.clear();
        for (const auto& x : *v) {
            if (!x.is_boolean()) reject(s.field("reservation"), "must be an array of booleans");
            p.reservation.push_back(x.get<bool>());
        }
    }
    std::string feasibility;
    s.text("feasibility", feasibility);
    if (!feasibility.empty()) {
        p.feasibility = choose<policy::Feasibility>(
            s.field("feasibility"), feasibility,
            {{"literal", policy::Feasibility::Literal}, {"strict", policy::Feasibility::Strict}});
    }
    std::string throughput;
    s.text("throughput", throughput);
    if (!throughput.empty()) {
        p.scoring.throughput = choose<scoring::ThroughputMode>(
            s.field("throughput"), throughput,
            {{"decreasing", scoring::ThroughputMode::Decreasing}, {"literal", scoring::ThroughputMode::Literal}});
    }
    s.number("mains_availability_min", p.scoring.mains_availability);
    s.number("min_free_fraction", p.min_free_fraction);
    s.number("broker_decision_s", p.broker_decision_s);
    s.number("cloud_processing_s", p.cloud_processing_s);
    s.done();
}

void read_prices(Section& s, PriceBook& p)
{
    s.number("connectivity", p.connectivity_unit);
    s.number("messaging", p.messaging_unit);
    s.number("registry", p.registry_unit);
    s.number("processing", p.processing_unit);
    s.number("data_unit_kb", p.data_unit_kb);
    s.number("server_divisor", p.server_divisor);
    s.number("device_divisor", p.device_divisor);
    s.done();
}

} // namespace

std::string_view builtin_fd_table() noexcept { return fd_table_json; }

Scenario parse(std::string_view text)
{
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        reject("config", std::string("not valid JSON (") + e.what() + ")");
    }

    Scenario out;
    Section top(root, "");
    auto section = [&](std::string_view key, auto&& reader) {
        if (const json* v = top.find(key)) {
            Section s(*v, std::string(key));
            reader(s);
        }
    };
    section("scenario", [&](Section& s) { read_scenario(s, out); });
    section("fleet", [&](Section& s) { read_fleet(s, out.fleet); });
    section("workload", [&](Section& s) { read_workload(s, out.workload); });
    section("dynamics", [&](Section& s) { read_dynamics(s, out.dynamics); });
    section("network", [&](Section& s) { read_network(s, out.network); });
    section("policy", [&](Section& s) { read_policy(s, out.policy); });
    section("prices", [&](Section& s) { read_prices(s, out.prices); });
    section("sla", [&](Section& s) {
        s.number("base_penalty", out.sla.base_penalty);
        s.number("penalty_rate", out.sla.penalty_rate);
        s.done();
    });
    section("unit_costs", [&](Section& s) {
        s.number("fog", out.unit_costs.fog);
        s.number("cloud", out.unit_costs.cloud);
        s.done();
    });
    top.done();

    validate(out);
    return out;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (path == fd_table_name || path == std::string(fd_table_name) + ".json") return std::string(fd_table_json);
        throw Error(ErrorKind::Config, "config: cannot read '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Scenario load(const std::string& path) { return parse(read_text(path)); }

} // namespace fogsim::config
