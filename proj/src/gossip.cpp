#include "fdsim/gossip.hpp"

#include <algorithm>

#include "fdsim/trace.hpp"

namespace fdsim {

const char* to_string(GossipKind kind) {
    switch (kind) {
        case GossipKind::Alert: return "alert";
        case GossipKind::Recovery: return "recovery";
        case GossipKind::Reply: return "reply";
    }
    return "alert";
}

bool MembershipView::merge(const DetectorId& self, const DetectorId& sender,
                           const std::set<DetectorId>& others) {
    const auto before = known_detectors.size();
    if (sender != self) {
        known_detectors.insert(sender);
    }
    for (const auto& d : others) {
        if (d != self) {
            known_detectors.insert(d);
        }
    }
    return known_detectors.size() != before;
}

std::vector<DetectorId> select_gossip_targets(const MembershipView& view, int fanout,
                                              RandomStream& rng) {
    std::vector<DetectorId> pool(view.known_detectors.begin(), view.known_detectors.end());
    const auto want = std::min<std::size_t>(static_cast<std::size_t>(fanout), pool.size());
    // Partial Fisher-Yates over the ordered pool.
    for (std::size_t i = 0; i < want; ++i) {
        const auto j = i + rng.next_below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(want);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::size_t gossip_op_count(const Trace& trace) {
    std::size_t count = 0;
    for (const auto& rec : trace.records) {
        if (rec.kind == "broadcast") {
            ++count;
        } else if (rec.kind == "send") {
            const auto payload = Trace::detail_field(rec.detail, "payload");
            if (payload == "alert" || payload == "recovery" || payload == "reply") {
                ++count;
            }
        }
    }
    return count;
}

}  // namespace fdsim
