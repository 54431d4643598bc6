#pragma once

#include <set>
#include <vector>

#include "fdsim/core.hpp"
#include "fdsim/rng.hpp"

namespace fdsim {

enum class GossipKind {
    Alert,     // suspicion crossed the threshold upward
    Recovery,  // suspicion crossed the threshold downward
    Reply,     // answer to an Alert
};

const char* to_string(GossipKind kind);

struct GossipMessage {
    DetectorId sender;
    ProcessId subject;
    double suspicion = 0;
    SimTime sent_at = 0;
    GossipKind kind = GossipKind::Alert;
};

// Cluster-local membership knowledge, built up from periodic broadcasts.
struct MembershipView {
    std::set<DetectorId> known_detectors;  // never contains the owner
    SimTime last_broadcast = 0;

    // Returns true if the merge added anything new.
    bool merge(const DetectorId& self, const DetectorId& sender,
               const std::set<DetectorId>& others);
};

// Broadcast payload: the sender's view plus the set of processes it
// monitors, so border detectors can route cross-cluster queries.
struct MembershipBroadcast {
    DetectorId sender;
    std::set<DetectorId> known_detectors;
    std::vector<ProcessId> monitored;
};

// min(fanout, |view|) distinct peers, uniformly without replacement.
// An empty view yields an empty set.
std::vector<DetectorId> select_gossip_targets(const MembershipView& view, int fanout,
                                              RandomStream& rng);

// Alert/Recovery/Reply unicasts plus one count per broadcast, tallied from a
// trace. The basis of the per-detector gossip rate metric.
struct Trace;
std::size_t gossip_op_count(const Trace& trace);

}  // namespace fdsim
