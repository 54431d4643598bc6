#include "fdsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fdsim/rng.hpp"
#include "fdsim/trace.hpp"
#include "json.hpp"

namespace fdsim {

using nlohmann::json;

const DetectorParams& ScenarioConfig::params_for(const DetectorId& d) const {
    for (const auto& spec : clusters) {
        if (spec.name == d.cluster.name) {
            return spec.params;
        }
    }
    return defaults;
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    ValidationResult run() {
        json root;
        try {
            root = json::parse(text_);
        } catch (const json::parse_error& e) {
            fail(std::string("syntax error: ") + e.what());
            return {std::nullopt, errors_};
        }
        if (!root.is_object()) {
            fail("top-level config must be a JSON object");
            return {std::nullopt, errors_};
        }
        parse_root(root);
        if (!errors_.empty()) {
            return {std::nullopt, errors_};
        }
        expand();
        if (!errors_.empty()) {
            return {std::nullopt, errors_};
        }
        return {std::move(config_), errors_};
    }

private:
    void fail(const std::string& msg) { errors_.push_back(msg); }

    double number_or(const json& obj, const char* key, double fallback,
                     const std::string& context) {
        if (!obj.contains(key)) {
            return fallback;
        }
        if (!obj.at(key).is_number()) {
            fail(context + ": '" + key + "' must be a number");
            return fallback;
        }
        return obj.at(key).get<double>();
    }

    void apply_params(DetectorParams& params, const json& obj, const std::string& context) {
        const bool period_set = obj.contains("heartbeat_period");
        params.heartbeat_period = number_or(obj, "heartbeat_period", params.heartbeat_period, context);
        params.window_size =
            static_cast<int>(number_or(obj, "window_size", params.window_size, context));
        if (obj.contains("predictor")) {
            if (auto kind = predictor_from_string(obj.at("predictor").get<std::string>())) {
                params.predictor = *kind;
            } else {
                fail(context + ": unknown predictor '" +
                     obj.at("predictor").get<std::string>() + "'");
            }
        }
        params.ema_alpha = number_or(obj, "ema_alpha", params.ema_alpha, context);
        params.threshold_tv = number_or(obj, "threshold_tv", params.threshold_tv, context);
        params.gossip_fanout =
            static_cast<int>(number_or(obj, "gossip_fanout", params.gossip_fanout, context));
        params.gossip_period = number_or(obj, "gossip_period", params.gossip_period, context);
        // Freeze and TTL default to multiples of the resolved period unless
        // given explicitly.
        if (obj.contains("freeze_timeout")) {
            params.freeze_timeout = number_or(obj, "freeze_timeout", params.freeze_timeout, context);
        } else if (period_set) {
            params.freeze_timeout = 2.0 * params.heartbeat_period;
        }
        if (obj.contains("remote_value_ttl")) {
            params.remote_value_ttl =
                number_or(obj, "remote_value_ttl", params.remote_value_ttl, context);
        } else if (period_set) {
            params.remote_value_ttl = 4.0 * params.heartbeat_period;
        }
        if (obj.contains("contribution_cap")) {
            const auto& cap = obj.at("contribution_cap");
            if (cap.is_null() || (cap.is_string() && cap.get<std::string>() == "none")) {
                params.contribution_cap.reset();
            } else if (cap.is_number()) {
                params.contribution_cap = cap.get<double>();
            } else {
                fail(context + ": contribution_cap must be a number or \"none\"");
            }
        }
        params.validate(errors_, context);
    }

    LinkParams parse_link_params(const json& obj, LinkParams base, const std::string& context) {
        base.delay = number_or(obj, "delay", base.delay, context);
        base.jitter = number_or(obj, "jitter", base.jitter, context);
        base.loss = number_or(obj, "loss", base.loss, context);
        if (base.delay <= 0) {
            fail(context + ": delay must be > 0");
        }
        if (base.jitter < 0 || base.jitter >= base.delay) {
            fail(context + ": jitter must satisfy 0 <= jitter < delay");
        }
        if (base.loss < 0 || base.loss > 1) {
            fail(context + ": loss_probability must lie in [0,1], got " + num_str(base.loss));
        }
        return base;
    }

    std::optional<NodeId> parse_node(const std::string& text, const std::string& context) {
        if (auto p = parse_process_id(text)) {
            return NodeId::of(*p);
        }
        if (auto d = parse_detector_id(text)) {
            return NodeId::of(*d);
        }
        fail(context + ": malformed id '" + text + "' (want <cluster>/p<i> or <cluster>/d<i>)");
        return std::nullopt;
    }

    void parse_root(const json& root) {
        config_.horizon = number_or(root, "horizon", config_.horizon, "config");
        if (config_.horizon <= 0) {
            fail("horizon must be > 0");
        }
        if (root.contains("seed")) {
            config_.seed = root.at("seed").get<std::uint64_t>();
        }
        config_.delta = number_or(root, "delta", config_.delta, "config");
        if (config_.delta <= 0) {
            fail("delta must be > 0");
        }
        config_.sampling_cadence =
            number_or(root, "sampling_cadence", config_.sampling_cadence, "config");
        if (config_.sampling_cadence <= 0) {
            fail("sampling_cadence must be > 0");
        }
        if (root.contains("gossip")) {
            config_.gossip_enabled = root.at("gossip").get<bool>();
        }
        if (root.contains("heartbeat_phase")) {
            const auto phase = root.at("heartbeat_phase").get<std::string>();
            if (phase == "random") {
                config_.random_phase = true;
            } else if (phase == "zero") {
                config_.random_phase = false;
            } else {
                fail("heartbeat_phase must be \"random\" or \"zero\"");
            }
        }
        config_.heartbeat_jitter =
            number_or(root, "heartbeat_jitter", config_.heartbeat_jitter, "config");
        if (config_.heartbeat_jitter < 0) {
            fail("heartbeat_jitter must be >= 0");
        }
        if (root.contains("detector_params")) {
            apply_params(config_.defaults, root.at("detector_params"), "detector_params");
        } else {
            config_.defaults.validate(errors_, "detector_params");
        }
        if (root.contains("report_threshold")) {
            config_.report_threshold = root.at("report_threshold").get<double>();
            if (*config_.report_threshold <= 0) {
                fail("report_threshold must be > 0");
            }
        }

        if (!root.contains("clusters") || !root.at("clusters").is_array() ||
            root.at("clusters").empty()) {
            fail("at least one cluster is required");
        } else {
            for (const auto& entry : root.at("clusters")) {
                parse_cluster(entry);
            }
        }

        if (root.contains("links")) {
            const auto& links = root.at("links");
            if (links.contains("default")) {
                config_.link_default =
                    parse_link_params(links.at("default"), config_.link_default, "links.default");
            }
            if (links.contains("overrides")) {
                int i = 0;
                for (const auto& entry : links.at("overrides")) {
                    const std::string context = "links.overrides[" + std::to_string(i++) + "]";
                    auto from = parse_node(entry.value("from", ""), context);
                    auto to = parse_node(entry.value("to", ""), context);
                    if (from && to) {
                        config_.link_overrides.push_back(
                            {*from, *to, parse_link_params(entry, config_.link_default, context)});
                    }
                }
            }
        }

        if (root.contains("faults")) {
            int i = 0;
            for (const auto& entry : root.at("faults")) {
                parse_fault(entry, "faults[" + std::to_string(i++) + "]");
            }
        }
        if (root.contains("queries")) {
            int i = 0;
            for (const auto& entry : root.at("queries")) {
                parse_query(entry, "queries[" + std::to_string(i++) + "]");
            }
        }
    }

    void parse_cluster(const json& entry) {
        ClusterSpec spec;
        spec.name = entry.value("name", "");
        const std::string context = "cluster '" + spec.name + "'";
        if (spec.name.empty() || spec.name.find('/') != std::string::npos ||
            spec.name.find(' ') != std::string::npos) {
            fail("cluster names must be non-empty and free of '/' and spaces");
        }
        for (const auto& other : config_.clusters) {
            if (other.name == spec.name) {
                fail("duplicate cluster name '" + spec.name + "'");
            }
        }
        spec.processes = static_cast<int>(number_or(entry, "processes", 0, context));
        spec.detectors = static_cast<int>(number_or(entry, "detectors", 0, context));
        if (spec.detectors < 1) {
            fail(context + ": empty cluster (needs at least one detector)");
        }
        if (spec.processes < 0) {
            fail(context + ": processes must be >= 0");
        }
        if (entry.contains("borders")) {
            for (const auto& b : entry.at("borders")) {
                spec.borders.push_back(b.get<int>());
            }
        } else {
            spec.borders = {0};
        }
        if (spec.borders.empty()) {
            fail(context + ": borders must be non-empty");
        }
        for (int b : spec.borders) {
            if (b < 0 || b >= spec.detectors) {
                fail(context + ": border index " + std::to_string(b) + " out of range");
            }
        }
        if (entry.contains("monitoring")) {
            const auto& mon = entry.at("monitoring");
            const std::string mode = mon.value("mode", "all");
            if (mode == "all") {
                spec.mode = MonitoringMode::All;
            } else if (mode == "ring") {
                spec.mode = MonitoringMode::Ring;
                spec.ring_arity = static_cast<int>(number_or(mon, "arity", 0, context));
                if (spec.ring_arity < 1) {
                    fail(context + ": ring monitoring needs arity >= 1");
                }
                if (spec.processes < 1) {
                    fail(context + ": ring monitoring needs at least one process");
                }
            } else if (mode == "subsets") {
                spec.mode = MonitoringMode::Subsets;
                if (mon.contains("subsets")) {
                    for (const auto& [key, value] : mon.at("subsets").items()) {
                        const int d = std::atoi(key.c_str());
                        if (d < 0 || d >= spec.detectors) {
                            fail(context + ": subset detector index '" + key + "' out of range");
                            continue;
                        }
                        std::vector<int> procs;
                        for (const auto& p : value) {
                            const int idx = p.get<int>();
                            if (idx < 0 || idx >= spec.processes) {
                                fail(context + ": subset process index " + std::to_string(idx) +
                                     " out of range for detector " + key);
                            } else {
                                procs.push_back(idx);
                            }
                        }
                        std::sort(procs.begin(), procs.end());
                        procs.erase(std::unique(procs.begin(), procs.end()), procs.end());
                        spec.subsets[d] = std::move(procs);
                    }
                }
            } else {
                fail(context + ": unknown monitoring mode '" + mode + "'");
            }
        }
        spec.params = config_.defaults;
        if (entry.contains("detector_params")) {
            apply_params(spec.params, entry.at("detector_params"), context + " detector_params");
        }
        config_.clusters.push_back(std::move(spec));
    }

    void parse_fault(const json& entry, const std::string& context) {
        const std::string kind = entry.value("kind", "");
        FaultEntry fault;
        if (kind == "crash") {
            fault.kind = FaultEntry::Kind::Crash;
            fault.time = number_or(entry, "time", -1, context);
            if (auto p = parse_process_id(entry.value("process", ""))) {
                fault.process = *p;
            } else {
                fail(context + ": malformed process id '" + entry.value("process", "") + "'");
                return;
            }
            if (fault.time < 0 || fault.time > config_.horizon) {
                fail(context + ": crash time must lie within [0, horizon]");
            }
        } else if (kind == "transient") {
            fault.kind = FaultEntry::Kind::Transient;
            fault.start = number_or(entry, "start", -1, context);
            fault.end = number_or(entry, "end", -1, context);
            if (auto p = parse_process_id(entry.value("process", ""))) {
                fault.process = *p;
            } else {
                fail(context + ": malformed process id '" + entry.value("process", "") + "'");
                return;
            }
            if (fault.start < 0 || *fault.end <= fault.start || *fault.end > config_.horizon) {
                fail(context + ": transient interval must satisfy 0 <= start < end <= horizon");
            }
        } else if (kind == "link_down") {
            fault.kind = FaultEntry::Kind::LinkDown;
            auto a = parse_node(entry.value("a", ""), context);
            auto b = parse_node(entry.value("b", ""), context);
            if (!a || !b) {
                return;
            }
            fault.a = *a;
            fault.b = *b;
            if (fault.a == fault.b) {
                fail(context + ": link endpoints must differ");
            }
            fault.start = number_or(entry, "start", -1, context);
            if (entry.contains("end")) {
                fault.end = number_or(entry, "end", -1, context);
                if (*fault.end <= fault.start || *fault.end > config_.horizon) {
                    fail(context + ": link_down interval must satisfy start < end <= horizon");
                }
            }
            if (fault.start < 0 || fault.start > config_.horizon) {
                fail(context + ": link_down start must lie within [0, horizon]");
            }
        } else if (kind == "partition") {
            fault.kind = FaultEntry::Kind::Partition;
            fault.start = number_or(entry, "start", -1, context);
            fault.end = number_or(entry, "end", -1, context);
            if (fault.start < 0 || *fault.end <= fault.start || *fault.end > config_.horizon) {
                fail(context + ": partition interval must satisfy 0 <= start < end <= horizon");
            }
            if (!entry.contains("groups") || entry.at("groups").size() < 2) {
                fail(context + ": partition needs at least two groups");
                return;
            }
            for (const auto& group : entry.at("groups")) {
                std::vector<NodeId> nodes;
                for (const auto& node : group) {
                    if (auto id = parse_node(node.get<std::string>(), context)) {
                        nodes.push_back(*id);
                    }
                }
                fault.groups.push_back(std::move(nodes));
            }
        } else {
            fail(context + ": unknown fault kind '" + kind + "'");
            return;
        }
        config_.faults.push_back(std::move(fault));
    }

    void parse_query(const json& entry, const std::string& context) {
        QuerySpec query;
        query.time = number_or(entry, "time", -1, context);
        if (query.time < 0 || query.time > config_.horizon) {
            fail(context + ": query time must lie within [0, horizon]");
        }
        if (auto d = parse_detector_id(entry.value("origin", ""))) {
            query.origin = *d;
        } else {
            fail(context + ": malformed origin detector id '" + entry.value("origin", "") + "'");
            return;
        }
        if (auto p = parse_process_id(entry.value("subject", ""))) {
            query.subject = *p;
        } else {
            fail(context + ": malformed subject process id '" + entry.value("subject", "") + "'");
            return;
        }
        config_.queries.push_back(std::move(query));
    }

    // Structural checks done; build topology, monitoring and failure pattern
    // and cross-reference every id against them.
    void expand() {
        for (const auto& spec : config_.clusters) {
            ClusterId cid{spec.name};
            ClusterTopology::Cluster cluster;
            for (int i = 0; i < spec.detectors; ++i) {
                cluster.detectors.insert(DetectorId{cid, i});
            }
            for (int i = 0; i < spec.processes; ++i) {
                ProcessId p{cid, i};
                cluster.processes.insert(p);
                config_.pattern.universe.insert(p);
            }
            for (int b : spec.borders) {
                cluster.borders.push_back(DetectorId{cid, b});
            }
            config_.topology.clusters[cid] = std::move(cluster);

            for (int d = 0; d < spec.detectors; ++d) {
                DetectorId did{cid, d};
                std::vector<ProcessId>& monitored = config_.monitoring[did];
                switch (spec.mode) {
                    case MonitoringMode::All:
                        for (int p = 0; p < spec.processes; ++p) {
                            monitored.push_back(ProcessId{cid, p});
                        }
                        break;
                    case MonitoringMode::Ring:
                        for (int j = 0; j < std::min(spec.ring_arity, spec.processes); ++j) {
                            monitored.push_back(ProcessId{cid, (d + j) % spec.processes});
                        }
                        std::sort(monitored.begin(), monitored.end());
                        monitored.erase(std::unique(monitored.begin(), monitored.end()),
                                        monitored.end());
                        break;
                    case MonitoringMode::Subsets:
                        if (auto it = spec.subsets.find(d); it != spec.subsets.end()) {
                            for (int p : it->second) {
                                monitored.push_back(ProcessId{cid, p});
                            }
                        }
                        break;
                }
            }
        }

        auto process_exists = [&](const ProcessId& p) {
            const auto* cluster = config_.topology.find(p.cluster);
            return cluster != nullptr && cluster->processes.count(p) != 0;
        };
        auto detector_exists = [&](const DetectorId& d) {
            const auto* cluster = config_.topology.find(d.cluster);
            return cluster != nullptr && cluster->detectors.count(d) != 0;
        };
        auto node_exists = [&](const NodeId& n) {
            return n.kind == NodeId::Kind::Process ? process_exists(n.as_process())
                                                   : detector_exists(n.as_detector());
        };

        for (const auto& link : config_.link_overrides) {
            if (!node_exists(link.from)) {
                fail("link override references unknown id '" + link.from.str() + "'");
            }
            if (!node_exists(link.to)) {
                fail("link override references unknown id '" + link.to.str() + "'");
            }
        }

        int i = 0;
        for (const auto& fault : config_.faults) {
            const std::string context = "faults[" + std::to_string(i++) + "]";
            switch (fault.kind) {
                case FaultEntry::Kind::Crash:
                    if (!process_exists(fault.process)) {
                        fail(context + ": unknown process '" + fault.process.str() + "'");
                        break;
                    }
                    if (config_.pattern.crash_times.count(fault.process) != 0) {
                        fail(context + ": duplicate crash for '" + fault.process.str() + "'");
                        break;
                    }
                    config_.pattern.crash_times[fault.process] = fault.time;
                    break;
                case FaultEntry::Kind::Transient:
                    if (!process_exists(fault.process)) {
                        fail(context + ": unknown process '" + fault.process.str() + "'");
                        break;
                    }
                    config_.pattern.transient_intervals[fault.process].push_back(
                        {fault.start, *fault.end});
                    break;
                case FaultEntry::Kind::LinkDown:
                    if (!node_exists(fault.a)) {
                        fail(context + ": unknown id '" + fault.a.str() + "'");
                    }
                    if (!node_exists(fault.b)) {
                        fail(context + ": unknown id '" + fault.b.str() + "'");
                    }
                    break;
                case FaultEntry::Kind::Partition: {
                    std::set<NodeId> seen;
                    for (const auto& group : fault.groups) {
                        for (const auto& node : group) {
                            if (!node_exists(node)) {
                                fail(context + ": unknown id '" + node.str() + "'");
                            }
                            if (!seen.insert(node).second) {
                                fail(context + ": id '" + node.str() +
                                     "' appears in more than one group");
                            }
                        }
                    }
                    break;
                }
            }
        }

        // Transient intervals must be disjoint and finish before any crash of
        // the same process.
        for (auto& [p, intervals] : config_.pattern.transient_intervals) {
            std::sort(intervals.begin(), intervals.end());
            for (std::size_t k = 1; k < intervals.size(); ++k) {
                if (intervals[k].first <= intervals[k - 1].second) {
                    fail("transient intervals for '" + p.str() + "' overlap");
                }
            }
            if (auto it = config_.pattern.crash_times.find(p);
                it != config_.pattern.crash_times.end()) {
                for (const auto& [start, end] : intervals) {
                    if (end >= it->second) {
                        fail("contradictory faults for '" + p.str() +
                             "': transient interval reaches past the crash time");
                    }
                }
            }
        }

        i = 0;
        for (const auto& query : config_.queries) {
            const std::string context = "queries[" + std::to_string(i++) + "]";
            if (!detector_exists(query.origin)) {
                fail(context + ": unknown origin detector '" + query.origin.str() + "'");
                continue;
            }
            if (!process_exists(query.subject)) {
                fail(context + ": unknown subject process '" + query.subject.str() + "'");
                continue;
            }
            if (query.origin.cluster == query.subject.cluster) {
                fail(context + ": subject must live in a different cluster than the origin");
            }
            const SimTime deadline =
                query.time + 10.0 * config_.params_for(query.origin).heartbeat_period;
            if (deadline > config_.horizon) {
                fail(context + ": query deadline " + num_str(deadline) +
                     " would exceed the horizon");
            }
        }

        for (const auto& spec : config_.clusters) {
            if (spec.params.heartbeat_period < config_.delta) {
                fail("cluster '" + spec.name + "': heartbeat_period must be >= delta");
            }
            if (config_.heartbeat_jitter >= spec.params.heartbeat_period / 2) {
                fail("heartbeat_jitter must be < heartbeat_period / 2");
            }
        }
    }

    std::string text_;
    ScenarioConfig config_;
    std::vector<std::string> errors_;
};

}  // namespace

ValidationResult parse_scenario(const std::string& json_text) {
    return Parser(json_text).run();
}

ValidationResult load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return {std::nullopt, {"cannot open scenario file: " + path}};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

json params_to_json(const DetectorParams& params) {
    json out = {
        {"heartbeat_period", params.heartbeat_period},
        {"window_size", params.window_size},
        {"predictor", to_string(params.predictor)},
        {"ema_alpha", params.ema_alpha},
        {"threshold_tv", params.threshold_tv},
        {"gossip_fanout", params.gossip_fanout},
        {"gossip_period", params.gossip_period},
        {"freeze_timeout", params.freeze_timeout},
        {"remote_value_ttl", params.remote_value_ttl},
    };
    if (params.contribution_cap) {
        out["contribution_cap"] = *params.contribution_cap;
    } else {
        out["contribution_cap"] = "none";
    }
    return out;
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& config) {
    json root;
    root["horizon"] = config.horizon;
    root["seed"] = config.seed;
    root["delta"] = config.delta;
    root["sampling_cadence"] = config.sampling_cadence;
    root["gossip"] = config.gossip_enabled;
    root["heartbeat_phase"] = config.random_phase ? "random" : "zero";
    root["heartbeat_jitter"] = config.heartbeat_jitter;
    root["detector_params"] = params_to_json(config.defaults);
    if (config.report_threshold) {
        root["report_threshold"] = *config.report_threshold;
    }

    root["clusters"] = json::array();
    for (const auto& spec : config.clusters) {
        json cluster = {
            {"name", spec.name},
            {"processes", spec.processes},
            {"detectors", spec.detectors},
            {"borders", spec.borders},
        };
        json monitoring;
        switch (spec.mode) {
            case MonitoringMode::All:
                monitoring = {{"mode", "all"}};
                break;
            case MonitoringMode::Ring:
                monitoring = {{"mode", "ring"}, {"arity", spec.ring_arity}};
                break;
            case MonitoringMode::Subsets: {
                json subsets = json::object();
                for (const auto& [d, procs] : spec.subsets) {
                    subsets[std::to_string(d)] = procs;
                }
                monitoring = {{"mode", "subsets"}, {"subsets", subsets}};
                break;
            }
        }
        cluster["monitoring"] = monitoring;
        if (!(spec.params == config.defaults)) {
            cluster["detector_params"] = params_to_json(spec.params);
        }
        root["clusters"].push_back(cluster);
    }

    root["links"] = {{"default",
                      {{"delay", config.link_default.delay},
                       {"jitter", config.link_default.jitter},
                       {"loss", config.link_default.loss}}}};
    if (!config.link_overrides.empty()) {
        json overrides = json::array();
        for (const auto& link : config.link_overrides) {
            overrides.push_back({{"from", link.from.str()},
                                 {"to", link.to.str()},
                                 {"delay", link.params.delay},
                                 {"jitter", link.params.jitter},
                                 {"loss", link.params.loss}});
        }
        root["links"]["overrides"] = overrides;
    }

    if (!config.faults.empty()) {
        json faults = json::array();
        for (const auto& fault : config.faults) {
            switch (fault.kind) {
                case FaultEntry::Kind::Crash:
                    faults.push_back({{"kind", "crash"},
                                      {"process", fault.process.str()},
                                      {"time", fault.time}});
                    break;
                case FaultEntry::Kind::Transient:
                    faults.push_back({{"kind", "transient"},
                                      {"process", fault.process.str()},
                                      {"start", fault.start},
                                      {"end", *fault.end}});
                    break;
                case FaultEntry::Kind::LinkDown: {
                    json entry = {{"kind", "link_down"},
                                  {"a", fault.a.str()},
                                  {"b", fault.b.str()},
                                  {"start", fault.start}};
                    if (fault.end) {
                        entry["end"] = *fault.end;
                    }
                    faults.push_back(entry);
                    break;
                }
                case FaultEntry::Kind::Partition: {
                    json groups = json::array();
                    for (const auto& group : fault.groups) {
                        json g = json::array();
                        for (const auto& node : group) {
                            g.push_back(node.str());
                        }
                        groups.push_back(g);
                    }
                    faults.push_back({{"kind", "partition"},
                                      {"groups", groups},
                                      {"start", fault.start},
                                      {"end", *fault.end}});
                    break;
                }
            }
        }
        root["faults"] = faults;
    }

    if (!config.queries.empty()) {
        json queries = json::array();
        for (const auto& query : config.queries) {
            queries.push_back({{"time", query.time},
                               {"origin", query.origin.str()},
                               {"subject", query.subject.str()}});
        }
        root["queries"] = queries;
    }

    return root.dump(2) + "\n";
}

std::uint64_t ScenarioConfig::shape_hash() const {
    ScenarioConfig normalized = *this;
    normalized.seed = 0;
    normalized.gossip_enabled = true;
    return fnv1a64(serialize_scenario(normalized));
}

}  // namespace fdsim
