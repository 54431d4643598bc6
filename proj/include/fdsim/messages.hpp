#pragma once

#include <memory>
#include <string>
#include <variant>

#include "fdsim/cluster.hpp"
#include "fdsim/core.hpp"
#include "fdsim/gossip.hpp"

namespace fdsim {

// A link endpoint: either a monitored process or a detector.
struct NodeId {
    enum class Kind { Process, Detector };

    Kind kind = Kind::Process;
    ClusterId cluster;
    int index = 0;

    static NodeId of(const ProcessId& p) { return {Kind::Process, p.cluster, p.index}; }
    static NodeId of(const DetectorId& d) { return {Kind::Detector, d.cluster, d.index}; }

    ProcessId as_process() const { return {cluster, index}; }
    DetectorId as_detector() const { return {cluster, index}; }

    std::string str() const {
        return cluster.name + (kind == Kind::Process ? "/p" : "/d") + std::to_string(index);
    }

    auto operator<=>(const NodeId&) const = default;
};

struct Heartbeat {
    ProcessId from;
};

// Broadcasts fan out to every cluster peer; the payload is shared so the
// per-receiver envelopes stay cheap to copy.
using SharedBroadcast = std::shared_ptr<const MembershipBroadcast>;

using MessagePayload = std::variant<Heartbeat, GossipMessage, SharedBroadcast,
                                    CrossClusterRequest, CrossClusterRelay,
                                    CrossClusterResponse>;

const char* payload_kind(const MessagePayload& payload);

struct Envelope {
    NodeId src;
    NodeId dst;
    SimTime sent_at = 0;
    MessagePayload payload;
};

// Detector-owned timers, delivered back by the simulator.
struct TvCheckTimer {
    ProcessId subject;
};
struct FreezeDeadlineTimer {
    ProcessId subject;
};
struct RemoteExpiryTimer {
    ProcessId subject;
};
struct BroadcastTimer {};
struct QueryTimeoutTimer {
    std::uint64_t request_id = 0;
};

using TimerPayload = std::variant<TvCheckTimer, FreezeDeadlineTimer, RemoteExpiryTimer,
                                  BroadcastTimer, QueryTimeoutTimer>;

struct TimerRequest {
    SimTime at = 0;
    TimerPayload payload;
};

}  // namespace fdsim
