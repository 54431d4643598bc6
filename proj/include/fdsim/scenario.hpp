#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdsim/cluster.hpp"
#include "fdsim/core.hpp"
#include "fdsim/messages.hpp"

namespace fdsim {

struct LinkParams {
    SimTime delay = 0.05;
    double jitter = 0.0;  // half-width of the uniform jitter, < delay
    double loss = 0.0;    // per-message loss probability

    bool operator==(const LinkParams&) const = default;
};

struct LinkOverride {
    NodeId from;
    NodeId to;
    LinkParams params;

    bool operator==(const LinkOverride&) const = default;
};

enum class MonitoringMode { All, Subsets, Ring };

struct ClusterSpec {
    std::string name;
    int processes = 0;
    int detectors = 0;
    std::vector<int> borders;  // detector indices; defaults to {0}
    MonitoringMode mode = MonitoringMode::All;
    int ring_arity = 0;                          // Ring mode
    std::map<int, std::vector<int>> subsets;     // Subsets mode
    DetectorParams params;                       // resolved (defaults + overrides)

    bool operator==(const ClusterSpec&) const = default;
};

struct FaultEntry {
    enum class Kind { Crash, Transient, LinkDown, Partition };

    Kind kind = Kind::Crash;
    ProcessId process;                          // Crash, Transient
    SimTime time = 0;                           // Crash
    SimTime start = 0;                          // Transient, LinkDown, Partition
    std::optional<SimTime> end;                 // absent LinkDown end = stays down
    NodeId a, b;                                // LinkDown (bidirectional pair)
    std::vector<std::vector<NodeId>> groups;    // Partition

    bool operator==(const FaultEntry&) const = default;
};

struct QuerySpec {
    SimTime time = 0;
    DetectorId origin;
    ProcessId subject;

    bool operator==(const QuerySpec&) const = default;
};

// A validated scenario. The declarative fields mirror the config file; the
// derived fields are expanded by validation and drive the simulator.
struct ScenarioConfig {
    SimTime horizon = 100;
    std::uint64_t seed = 1;
    SimTime delta = 0.001;             // minimum spacing of one process's steps
    SimTime sampling_cadence = 1.0;
    bool gossip_enabled = true;
    bool random_phase = true;          // per-(process, monitor) heartbeat phases
    double heartbeat_jitter = 0.0;     // sender-side jitter, default off
    DetectorParams defaults;
    std::vector<ClusterSpec> clusters;
    LinkParams link_default;
    std::vector<LinkOverride> link_overrides;
    std::vector<FaultEntry> faults;
    std::vector<QuerySpec> queries;
    std::optional<double> report_threshold;

    // Derived by validation.
    ClusterTopology topology;
    FailurePattern pattern;
    std::map<DetectorId, std::vector<ProcessId>> monitoring;

    double effective_report_threshold() const {
        return report_threshold ? *report_threshold : defaults.threshold_tv;
    }
    const DetectorParams& params_for(const DetectorId& d) const;

    // Hash over everything that defines the scenario's shape: topology,
    // monitoring, links, faults, queries, horizon. Seed and gossip flag are
    // excluded so A/B runs compare as same-shape.
    std::uint64_t shape_hash() const;
};

struct ValidationResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;  // all diagnostics, not just the first

    bool ok() const { return config.has_value(); }
};

ValidationResult parse_scenario(const std::string& json_text);
ValidationResult load_scenario_file(const std::string& path);

// Canonical JSON re-emission; parse_scenario(serialize_scenario(c)) yields an
// equivalent config.
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace fdsim
