#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fdsim {

// Abstract simulation time. Units map to nothing physical; all protocol
// parameters are expressed in the same units.
using SimTime = double;

struct ClusterId {
    std::string name;

    auto operator<=>(const ClusterId&) const = default;
};

struct ProcessId {
    ClusterId cluster;
    int index = 0;

    auto operator<=>(const ProcessId&) const = default;
    std::string str() const;
};

struct DetectorId {
    ClusterId cluster;
    int index = 0;

    auto operator<=>(const DetectorId&) const = default;
    std::string str() const;
};

// Parses "<cluster>/p<index>" / "<cluster>/d<index>". Returns nullopt on
// malformed input.
std::optional<ProcessId> parse_process_id(const std::string& text);
std::optional<DetectorId> parse_detector_id(const std::string& text);

// Ground truth for a run: which processes crash (permanently) and which go
// silent for bounded intervals while remaining alive. Crashed processes never
// recover; transient silence does not make a process faulty.
struct FailurePattern {
    std::set<ProcessId> universe;
    std::map<ProcessId, SimTime> crash_times;
    std::map<ProcessId, std::vector<std::pair<SimTime, SimTime>>> transient_intervals;

    bool is_faulty(const ProcessId& p) const;
    bool crashed_at(const ProcessId& p, SimTime t) const;
    // Crashed, or inside a transient interval: the process emits nothing at t.
    bool silent_at(const ProcessId& p, SimTime t) const;
};

// Processes that never appear in the crash pattern. Independent of t: a
// process with a scheduled crash is faulty for the whole execution.
std::set<ProcessId> correct_set(const FailurePattern& pattern, SimTime t);

// F(t): processes that have crashed before or at time t. Monotone in t.
std::set<ProcessId> failed_at(const FailurePattern& pattern, SimTime t);

enum class PredictorKind { Sma, RestrictedMa, Wma, Ema };

const char* to_string(PredictorKind kind);
std::optional<PredictorKind> predictor_from_string(const std::string& name);

// Per-detector tuning. Durations are in sim time units and must be positive.
struct DetectorParams {
    SimTime heartbeat_period = 1.0;
    int window_size = 5;
    PredictorKind predictor = PredictorKind::Sma;
    double ema_alpha = 0.25;
    double threshold_tv = 1.0;
    int gossip_fanout = 2;
    SimTime gossip_period = 5.0;
    SimTime freeze_timeout = 2.0;    // default 2 x heartbeat_period
    SimTime remote_value_ttl = 4.0;  // default 4 x heartbeat_period
    // Per-missed-heartbeat contribution cap; nullopt leaves the raw
    // log contribution unbounded.
    std::optional<double> contribution_cap = 1.0;

    bool operator==(const DetectorParams&) const = default;

    // Range checks shared by config validation and direct construction.
    // Appends one message per violation.
    void validate(std::vector<std::string>& errors, const std::string& context) const;
};

// Sampled detector output: the value detector `detector` held for `process`
// at `time`. The sampler emits these at a fixed cadence; metrics consume them.
struct HistoryRecord {
    DetectorId detector;
    ProcessId process;
    SimTime time = 0;
    double value = 0;       // effective (min-merged) suspicion
    double local_value = 0; // locally accrued suspicion, pre-merge
};

struct DetectorHistory {
    std::vector<HistoryRecord> records;

    using PairKey = std::pair<DetectorId, ProcessId>;
    // Records grouped per (detector, process), preserving time order.
    std::map<PairKey, std::vector<HistoryRecord>> by_pair() const;
};

}  // namespace fdsim
