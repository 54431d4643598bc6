#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "fdsim/core.hpp"

namespace fdsim {

struct Trace;

// Static topology of a run: which detectors and processes live in each
// cluster, and which detectors answer cross-cluster queries.
struct ClusterTopology {
    struct Cluster {
        std::set<DetectorId> detectors;
        std::set<ProcessId> processes;
        std::vector<DetectorId> borders;  // non-empty, subset of detectors
    };

    std::map<ClusterId, Cluster> clusters;

    const Cluster* find(const ClusterId& id) const;
    std::vector<DetectorId> all_detectors() const;
    std::vector<ProcessId> all_processes() const;
};

// Name registry standing in for a DNS lookup of border detectors. Successive
// resolutions of the same cluster rotate round-robin through its border list.
class BorderRegistry {
public:
    explicit BorderRegistry(const ClusterTopology& topology);

    // Throws std::out_of_range for an unknown cluster name.
    DetectorId resolve(const ClusterId& cluster);

    bool has(const ClusterId& cluster) const { return entries_.count(cluster) != 0; }

private:
    struct Entry {
        std::vector<DetectorId> borders;
        std::size_t next = 0;
    };
    std::map<ClusterId, Entry> entries_;
};

struct CrossClusterRequest {
    std::uint64_t request_id = 0;
    DetectorId origin;
    ProcessId subject;
    SimTime issued_at = 0;
    SimTime deadline = 0;
};

// Border-to-local forwarding hop of a request inside the subject's cluster.
struct CrossClusterRelay {
    CrossClusterRequest request;
    DetectorId relayed_by;
};

enum class QueryOutcome { Value, UnknownSubject, Timeout };

const char* to_string(QueryOutcome outcome);

struct CrossClusterResponse {
    std::uint64_t request_id = 0;
    ProcessId subject;
    QueryOutcome outcome = QueryOutcome::Value;
    double suspicion = 0;
    DetectorId answered_by;
    SimTime answered_at = 0;
};

// Messages in the trace whose sender and receiver sit in different clusters.
std::size_t inter_cluster_traffic_count(const Trace& trace);

}  // namespace fdsim
