#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "fdsim/accrual.hpp"
#include "fdsim/messages.hpp"
#include "fdsim/trace.hpp"

namespace fdsim {

// Outputs of one event-handling step: messages to put on the network,
// cluster-local broadcasts for the transport to expand, timers to arm, and
// protocol-level trace records.
struct Actions {
    std::vector<Envelope> messages;
    std::vector<MembershipBroadcast> broadcasts;
    std::vector<TimerRequest> timers;
    std::vector<TraceRecord> records;
};

struct SuspicionSample {
    double effective = 0;
    double local = 0;
    bool frozen = false;
};

// One failure detector: a sequential state machine. The event loop feeds it
// heartbeats, messages and timers in timestamp order; it returns the
// resulting actions. It never touches another detector's state directly.
class DetectorState {
public:
    DetectorState(DetectorId id, DetectorParams params, bool gossip_enabled,
                  std::uint64_t rng_seed);

    // Setup, before the run starts.
    void register_monitored(const ProcessId& p, SimTime registered_at);

    // Initial timers: cold-start crossing checks and, with gossip enabled,
    // the first membership broadcast.
    Actions start(SimTime now);

    Actions handle_heartbeat(const ProcessId& from, SimTime sent_at, SimTime now);
    Actions handle_gossip(const GossipMessage& msg, SimTime now);
    Actions handle_membership(const MembershipBroadcast& broadcast, SimTime now);
    Actions handle_request(const CrossClusterRequest& req, bool relayed, SimTime now);
    Actions handle_response(const CrossClusterResponse& resp, SimTime now);
    Actions handle_timer(const TimerPayload& timer, SimTime now);

    // Origin side of a scripted cross-cluster query. The registry lookup
    // stands in for the DNS resolution of a border detector.
    Actions issue_query(const ProcessId& subject, std::uint64_t request_id, SimTime now,
                        BorderRegistry& registry);

    SuspicionSample sample(const ProcessId& p, SimTime now) const;

    const DetectorId& id() const { return id_; }
    const MembershipView& view() const { return view_; }
    const std::map<ProcessId, SuspicionEntry>& entries() const { return entries_; }
    bool monitors(const ProcessId& p) const { return entries_.count(p) != 0; }
    std::vector<ProcessId> monitored_set() const;

private:
    SuspicionEntry* find_entry(const ProcessId& p);
    void reevaluate(SuspicionEntry& entry, SimTime now, Actions& out);
    void ensure_crossing_check(SuspicionEntry& entry, SimTime now, Actions& out);
    void emit_gossip(GossipKind kind, const SuspicionEntry& entry, double value, SimTime now,
                     Actions& out);
    void emit_broadcast(SimTime now, Actions& out);
    void respond(const CrossClusterRequest& req, QueryOutcome outcome, double suspicion,
                 SimTime now, Actions& out);
    void settle_query(std::uint64_t request_id, QueryOutcome outcome, double suspicion,
                      const std::string& answered_by, SimTime now, Actions& out);

    DetectorId id_;
    DetectorParams params_;
    bool gossip_enabled_;
    RandomStream rng_;

    std::map<ProcessId, SuspicionEntry> entries_;
    // Soonest armed crossing-check time per subject; stale timer fires are
    // ignored by comparing against this.
    std::map<ProcessId, SimTime> armed_checks_;
    MembershipView view_;
    std::map<DetectorId, std::vector<ProcessId>> monitor_digests_;
    std::map<DetectorId, std::size_t> seen_broadcast_sizes_;

    std::map<std::uint64_t, CrossClusterRequest> pending_queries_;
    std::set<std::uint64_t> settled_queries_;
};

}  // namespace fdsim
