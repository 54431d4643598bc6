#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <variant>
#include <vector>

#include "fdsim/detector.hpp"
#include "fdsim/scenario.hpp"
#include "fdsim/trace.hpp"

namespace fdsim {

// Deterministic discrete-event network simulator. Single-threaded: the event
// loop is the only component that advances time, and detector state machines
// are invoked synchronously from it. Identical (scenario, seed) pairs yield
// byte-identical traces.
class Simulator {
public:
    explicit Simulator(ScenarioConfig config);

    // Executes every event up to the horizon and returns the trace. Safe to
    // call once; subsequent calls return the same trace.
    const Trace& run();

    const Trace& trace() const { return trace_; }
    const ScenarioConfig& config() const { return config_; }
    const DetectorState& detector(const DetectorId& id) const;

    struct LinkStats {
        std::size_t sent = 0;
        std::size_t delivered = 0;
        std::size_t dropped = 0;
    };
    using LinkKey = std::pair<NodeId, NodeId>;
    const std::map<LinkKey, LinkStats>& link_stats() const { return link_stats_; }

private:
    struct HeartbeatSendEvent {
        ProcessId process;
        DetectorId monitor;
    };
    struct DeliverEvent {
        Envelope envelope;
    };
    struct TimerEvent {
        DetectorId owner;
        TimerPayload payload;
    };
    struct CrashEvent {
        ProcessId process;
    };
    struct TransientStartEvent {
        ProcessId process;
    };
    struct TransientEndEvent {
        ProcessId process;
    };
    struct LinkDownEvent {
        NodeId a, b;
    };
    struct LinkUpEvent {
        NodeId a, b;
    };
    struct PartitionStartEvent {
        std::size_t index;
    };
    struct PartitionEndEvent {
        std::size_t index;
    };
    struct QueryIssueEvent {
        DetectorId origin;
        ProcessId subject;
    };
    struct SampleEvent {};

    using EventPayload =
        std::variant<HeartbeatSendEvent, DeliverEvent, TimerEvent, CrashEvent,
                     TransientStartEvent, TransientEndEvent, LinkDownEvent, LinkUpEvent,
                     PartitionStartEvent, PartitionEndEvent, QueryIssueEvent, SampleEvent>;

    struct SimEvent {
        SimTime time = 0;
        std::uint64_t seq = 0;
        EventPayload payload;
    };
    struct EventOrder {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) {
                return a.time > b.time;  // min-heap
            }
            return a.seq > b.seq;
        }
    };

    void schedule(SimTime t, EventPayload payload);
    // Schedules an actor-initiated step, keeping one process's distinct step
    // times at least delta apart (same-instant steps count as one step).
    SimTime schedule_step(const ProcessId& actor, SimTime t, EventPayload payload);
    void dispatch(const SimEvent& event);
    void apply_actions(const DetectorId& owner, Actions&& actions, SimTime now);
    void transmit(Envelope&& env, SimTime now);
    bool link_up(const NodeId& src, const NodeId& dst) const;
    LinkParams link_params(const NodeId& src, const NodeId& dst) const;
    RandomStream& link_rng(const NodeId& src, const NodeId& dst);
    void seed_initial_events();

    ScenarioConfig config_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_request_id_ = 1;
    bool ran_ = false;

    std::map<DetectorId, DetectorState> detectors_;
    BorderRegistry registry_;
    Trace trace_;

    std::map<ProcessId, SimTime> last_step_;            // delta spacing per process
    std::map<LinkKey, LinkParams> link_overrides_;
    std::map<LinkKey, RandomStream> link_rngs_;
    std::map<LinkKey, LinkStats> link_stats_;
    std::set<LinkKey> down_links_;                       // directed
    std::vector<std::vector<std::set<NodeId>>> partitions_;  // groups per partition fault
    std::set<std::size_t> active_partitions_;
    RandomStream phase_rng_;
    std::map<ProcessId, RandomStream> process_rngs_;     // sender-side jitter
};

// Extracts the sampled detector history (H) from a trace's sample records.
DetectorHistory sample_queries(const ScenarioConfig& config, const Trace& trace);

}  // namespace fdsim
