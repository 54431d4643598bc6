#include "fdsim/detector.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdsim {

const char* payload_kind(const MessagePayload& payload) {
    struct Visitor {
        const char* operator()(const Heartbeat&) const { return "heartbeat"; }
        const char* operator()(const GossipMessage& g) const { return to_string(g.kind); }
        const char* operator()(const SharedBroadcast&) const { return "membership"; }
        const char* operator()(const CrossClusterRequest&) const { return "query_request"; }
        const char* operator()(const CrossClusterRelay&) const { return "query_relay"; }
        const char* operator()(const CrossClusterResponse&) const { return "query_response"; }
    };
    return std::visit(Visitor{}, payload);
}

DetectorState::DetectorState(DetectorId id, DetectorParams params, bool gossip_enabled,
                             std::uint64_t rng_seed)
    : id_(std::move(id)), params_(params), gossip_enabled_(gossip_enabled), rng_(rng_seed) {}

void DetectorState::register_monitored(const ProcessId& p, SimTime registered_at) {
    if (p.cluster != id_.cluster) {
        throw std::invalid_argument("detector " + id_.str() + " cannot monitor " + p.str() +
                                    ": monitoring is cluster-local");
    }
    entries_.emplace(p, SuspicionEntry(p, params_, registered_at));
}

std::vector<ProcessId> DetectorState::monitored_set() const {
    std::vector<ProcessId> out;
    out.reserve(entries_.size());
    for (const auto& [p, entry] : entries_) {
        out.push_back(p);
    }
    return out;
}

SuspicionEntry* DetectorState::find_entry(const ProcessId& p) {
    auto it = entries_.find(p);
    return it == entries_.end() ? nullptr : &it->second;
}

Actions DetectorState::start(SimTime now) {
    Actions out;
    for (auto& [p, entry] : entries_) {
        ensure_crossing_check(entry, now, out);
    }
    if (gossip_enabled_) {
        emit_broadcast(now, out);
        out.timers.push_back({now + params_.gossip_period, BroadcastTimer{}});
    }
    return out;
}

Actions DetectorState::handle_heartbeat(const ProcessId& from, SimTime sent_at, SimTime now) {
    Actions out;
    auto* entry = find_entry(from);
    if (entry == nullptr) {
        out.records.push_back({now, "hb_drop", id_.str(), from.str(), 0, "reason=unmonitored"});
        return out;
    }
    const bool was_frozen = entry->frozen();
    if (!entry->on_heartbeat(now)) {
        out.records.push_back({now, "hb_ooo", id_.str(), from.str(), 0,
                               "sent=" + num_str(sent_at)});
        return out;
    }
    out.records.push_back({now, "hb_recv", id_.str(), from.str(), entry->expect_base(),
                           "sent=" + num_str(sent_at) + " gap=" + num_str(entry->expect_gap())});
    if (was_frozen) {
        out.records.push_back({now, "unfreeze", id_.str(), from.str(), 0, "reason=heartbeat"});
    }
    reevaluate(*entry, now, out);
    return out;
}

Actions DetectorState::handle_gossip(const GossipMessage& msg, SimTime now) {
    Actions out;
    auto* entry = find_entry(msg.subject);
    if (entry == nullptr) {
        // Detectors that do not monitor the subject stay out of the exchange.
        out.records.push_back({now, "gossip_drop", id_.str(), msg.subject.str(), msg.suspicion,
                               std::string("reason=unknown_subject from=") + msg.sender.str()});
        return out;
    }
    if (!gossip_enabled_) {
        return out;
    }
    out.records.push_back({now, "gossip_recv", id_.str(), msg.subject.str(), msg.suspicion,
                           std::string("kind=") + to_string(msg.kind) +
                               " from=" + msg.sender.str()});
    entry->store_remote(msg.sender, msg.suspicion, now + params_.remote_value_ttl);
    out.timers.push_back({now + params_.remote_value_ttl, RemoteExpiryTimer{msg.subject}});
    if (entry->frozen()) {
        entry->unfreeze();
        out.records.push_back({now, "unfreeze", id_.str(), msg.subject.str(), 0, "reason=gossip"});
    }
    if (msg.kind == GossipKind::Alert) {
        out.messages.push_back({NodeId::of(id_), NodeId::of(msg.sender), now,
                                GossipMessage{id_, msg.subject, entry->local_suspicion(now), now,
                                              GossipKind::Reply}});
    }
    reevaluate(*entry, now, out);
    return out;
}

Actions DetectorState::handle_membership(const MembershipBroadcast& broadcast, SimTime now) {
    Actions out;
    // Views only grow, so an unchanged set size from the same sender means
    // an unchanged set; skip the re-merge that dominates large clusters.
    auto seen = seen_broadcast_sizes_.find(broadcast.sender);
    if (seen != seen_broadcast_sizes_.end() &&
        seen->second == broadcast.known_detectors.size()) {
        return out;
    }
    seen_broadcast_sizes_[broadcast.sender] = broadcast.known_detectors.size();
    if (view_.merge(id_, broadcast.sender, broadcast.known_detectors)) {
        out.records.push_back({now, "view_grow", id_.str(), broadcast.sender.str(),
                               static_cast<double>(view_.known_detectors.size()), {}});
    }
    if (broadcast.sender != id_) {
        monitor_digests_[broadcast.sender] = broadcast.monitored;
    }
    return out;
}

Actions DetectorState::handle_request(const CrossClusterRequest& req, bool relayed, SimTime now) {
    Actions out;
    if (auto* entry = find_entry(req.subject)) {
        respond(req, QueryOutcome::Value, entry->effective_suspicion(now), now, out);
        return out;
    }
    if (!relayed) {
        // Border hop: forward to one cluster-local detector known to monitor
        // the subject.
        std::vector<DetectorId> candidates;
        for (const auto& [d, monitored] : monitor_digests_) {
            if (d != id_ &&
                std::find(monitored.begin(), monitored.end(), req.subject) != monitored.end()) {
                candidates.push_back(d);
            }
        }
        if (!candidates.empty()) {
            const auto& target = candidates[rng_.next_below(candidates.size())];
            out.records.push_back({now, "relay", id_.str(), req.subject.str(), 0,
                                   "request=" + std::to_string(req.request_id) +
                                       " to=" + target.str()});
            out.messages.push_back(
                {NodeId::of(id_), NodeId::of(target), now, CrossClusterRelay{req, id_}});
            return out;
        }
    }
    respond(req, QueryOutcome::UnknownSubject, 0, now, out);
    return out;
}

Actions DetectorState::handle_response(const CrossClusterResponse& resp, SimTime now) {
    Actions out;
    settle_query(resp.request_id, resp.outcome, resp.suspicion, resp.answered_by.str(), now, out);
    return out;
}

Actions DetectorState::handle_timer(const TimerPayload& timer, SimTime now) {
    Actions out;
    if (const auto* check = std::get_if<TvCheckTimer>(&timer)) {
        auto it = armed_checks_.find(check->subject);
        if (it == armed_checks_.end() || it->second > now) {
            return out;  // superseded by an earlier re-arm; the armed one fires later
        }
        armed_checks_.erase(it);
        if (auto* entry = find_entry(check->subject)) {
            reevaluate(*entry, now, out);
        }
    } else if (const auto* freeze = std::get_if<FreezeDeadlineTimer>(&timer)) {
        auto* entry = find_entry(freeze->subject);
        if (entry != nullptr && entry->frozen() && entry->freeze_deadline() &&
            *entry->freeze_deadline() <= now) {
            entry->unfreeze();
            out.records.push_back(
                {now, "unfreeze", id_.str(), freeze->subject.str(), 0, "reason=deadline"});
            reevaluate(*entry, now, out);
        }
    } else if (const auto* expiry = std::get_if<RemoteExpiryTimer>(&timer)) {
        if (auto* entry = find_entry(expiry->subject)) {
            entry->prune_remotes(now);
            reevaluate(*entry, now, out);
        }
    } else if (std::get_if<BroadcastTimer>(&timer) != nullptr) {
        if (gossip_enabled_) {
            emit_broadcast(now, out);
            out.timers.push_back({now + params_.gossip_period, BroadcastTimer{}});
        }
    } else if (const auto* timeout = std::get_if<QueryTimeoutTimer>(&timer)) {
        settle_query(timeout->request_id, QueryOutcome::Timeout, 0, "", now, out);
    }
    return out;
}

Actions DetectorState::issue_query(const ProcessId& subject, std::uint64_t request_id, SimTime now,
                                   BorderRegistry& registry) {
    Actions out;
    const DetectorId border = registry.resolve(subject.cluster);
    CrossClusterRequest req{request_id, id_, subject, now,
                            now + 10.0 * params_.heartbeat_period};
    pending_queries_[request_id] = req;
    out.records.push_back({now, "query_issue", id_.str(), subject.str(), 0,
                           "request=" + std::to_string(request_id) + " border=" + border.str() +
                               " deadline=" + num_str(req.deadline)});
    out.messages.push_back({NodeId::of(id_), NodeId::of(border), now, req});
    out.timers.push_back({req.deadline, QueryTimeoutTimer{request_id}});
    return out;
}

SuspicionSample DetectorState::sample(const ProcessId& p, SimTime now) const {
    auto it = entries_.find(p);
    if (it == entries_.end()) {
        throw std::out_of_range("detector " + id_.str() + " does not monitor " + p.str());
    }
    return {it->second.effective_suspicion(now), it->second.local_suspicion(now),
            it->second.frozen()};
}

void DetectorState::reevaluate(SuspicionEntry& entry, SimTime now, Actions& out) {
    const double tv = params_.threshold_tv;
    const double effective = entry.effective_suspicion(now);
    if (!entry.suspected() && effective >= tv) {
        entry.set_suspected(true);
        const double local = entry.local_suspicion(now);
        out.records.push_back({now, "suspect", id_.str(), entry.monitored().str(), effective,
                               "local=" + num_str(local)});
        if (gossip_enabled_) {
            emit_gossip(GossipKind::Alert, entry, local, now, out);
            const SimTime deadline = now + params_.freeze_timeout;
            entry.freeze(now, deadline);
            out.records.push_back({now, "freeze", id_.str(), entry.monitored().str(), local,
                                   "deadline=" + num_str(deadline)});
            out.timers.push_back({deadline, FreezeDeadlineTimer{entry.monitored()}});
        }
    } else if (entry.suspected() && effective < tv) {
        entry.set_suspected(false);
        out.records.push_back({now, "trust", id_.str(), entry.monitored().str(), effective, {}});
        if (gossip_enabled_) {
            emit_gossip(GossipKind::Recovery, entry, effective, now, out);
        }
    }
    if (!entry.suspected() && !entry.frozen()) {
        ensure_crossing_check(entry, now, out);
    }
}

void DetectorState::ensure_crossing_check(SuspicionEntry& entry, SimTime now, Actions& out) {
    const SimTime crossing = entry.local_crossing_time(params_.threshold_tv, now);
    if (entry.earliest_masking_expiry(params_.threshold_tv, crossing)) {
        return;  // a live remote value pins the minimum; its expiry timer re-evaluates
    }
    auto it = armed_checks_.find(entry.monitored());
    if (it != armed_checks_.end() && it->second <= crossing) {
        return;
    }
    armed_checks_[entry.monitored()] = crossing;
    out.timers.push_back({crossing, TvCheckTimer{entry.monitored()}});
}

void DetectorState::emit_gossip(GossipKind kind, const SuspicionEntry& entry, double value,
                                SimTime now, Actions& out) {
    const auto targets = select_gossip_targets(view_, params_.gossip_fanout, rng_);
    if (targets.empty()) {
        out.records.push_back({now, "warn", id_.str(), entry.monitored().str(), 0,
                               std::string("isolated=1 kind=") + to_string(kind)});
        return;
    }
    for (const auto& target : targets) {
        out.messages.push_back({NodeId::of(id_), NodeId::of(target), now,
                                GossipMessage{id_, entry.monitored(), value, now, kind}});
    }
}

void DetectorState::emit_broadcast(SimTime now, Actions& out) {
    view_.last_broadcast = now;
    out.broadcasts.push_back({id_, view_.known_detectors, monitored_set()});
    out.records.push_back({now, "broadcast", id_.str(), id_.cluster.name,
                           static_cast<double>(view_.known_detectors.size()), {}});
}

void DetectorState::respond(const CrossClusterRequest& req, QueryOutcome outcome,
                            double suspicion, SimTime now, Actions& out) {
    out.messages.push_back({NodeId::of(id_), NodeId::of(req.origin), now,
                            CrossClusterResponse{req.request_id, req.subject, outcome, suspicion,
                                                 id_, now}});
}

void DetectorState::settle_query(std::uint64_t request_id, QueryOutcome outcome, double suspicion,
                                 const std::string& answered_by, SimTime now, Actions& out) {
    if (settled_queries_.count(request_id) != 0 || pending_queries_.count(request_id) == 0) {
        return;
    }
    const auto subject = pending_queries_.at(request_id).subject;
    pending_queries_.erase(request_id);
    settled_queries_.insert(request_id);
    std::string detail = "request=" + std::to_string(request_id) +
                         " outcome=" + to_string(outcome);
    if (!answered_by.empty()) {
        detail += " answered_by=" + answered_by;
    }
    out.records.push_back({now, "query_result", id_.str(), subject.str(), suspicion, detail});
}

}  // namespace fdsim
