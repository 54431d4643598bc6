#include "fdsim/cluster.hpp"

#include <stdexcept>

#include "fdsim/trace.hpp"

namespace fdsim {

const ClusterTopology::Cluster* ClusterTopology::find(const ClusterId& id) const {
    auto it = clusters.find(id);
    return it == clusters.end() ? nullptr : &it->second;
}

std::vector<DetectorId> ClusterTopology::all_detectors() const {
    std::vector<DetectorId> out;
    for (const auto& [id, cluster] : clusters) {
        out.insert(out.end(), cluster.detectors.begin(), cluster.detectors.end());
    }
    return out;
}

std::vector<ProcessId> ClusterTopology::all_processes() const {
    std::vector<ProcessId> out;
    for (const auto& [id, cluster] : clusters) {
        out.insert(out.end(), cluster.processes.begin(), cluster.processes.end());
    }
    return out;
}

BorderRegistry::BorderRegistry(const ClusterTopology& topology) {
    for (const auto& [id, cluster] : topology.clusters) {
        entries_[id] = Entry{cluster.borders, 0};
    }
}

DetectorId BorderRegistry::resolve(const ClusterId& cluster) {
    auto it = entries_.find(cluster);
    if (it == entries_.end() || it->second.borders.empty()) {
        throw std::out_of_range("unresolvable cluster: " + cluster.name);
    }
    auto& entry = it->second;
    const DetectorId chosen = entry.borders[entry.next % entry.borders.size()];
    ++entry.next;
    return chosen;
}

const char* to_string(QueryOutcome outcome) {
    switch (outcome) {
        case QueryOutcome::Value: return "value";
        case QueryOutcome::UnknownSubject: return "unknown_subject";
        case QueryOutcome::Timeout: return "timeout";
    }
    return "value";
}

std::size_t inter_cluster_traffic_count(const Trace& trace) {
    std::size_t count = 0;
    for (const auto& rec : trace.records) {
        if (rec.kind == "send" || rec.kind == "hb_send") {
            if (Trace::cluster_of(rec.actor) != Trace::cluster_of(rec.subject)) {
                ++count;
            }
        }
    }
    return count;
}

}  // namespace fdsim
