#include "fdsim/simnet.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdsim {

namespace {

std::string groups_detail(const std::vector<std::set<NodeId>>& groups) {
    std::string out = "groups=";
    bool first_group = true;
    for (const auto& group : groups) {
        if (!first_group) {
            out += '|';
        }
        first_group = false;
        bool first = true;
        for (const auto& node : group) {
            if (!first) {
                out += ',';
            }
            first = false;
            out += node.str();
        }
    }
    return out;
}

}  // namespace

Simulator::Simulator(ScenarioConfig config)
    : config_(std::move(config)),
      registry_(config_.topology),
      phase_rng_(derive_seed(config_.seed, "scenario", "phases")) {
    for (const auto& link : config_.link_overrides) {
        link_overrides_[{link.from, link.to}] = link.params;
    }
    for (const auto& [cid, cluster] : config_.topology.clusters) {
        const ClusterSpec* spec = nullptr;
        for (const auto& s : config_.clusters) {
            if (s.name == cid.name) {
                spec = &s;
            }
        }
        for (const auto& did : cluster.detectors) {
            DetectorState det(did, spec->params, config_.gossip_enabled,
                              derive_seed(config_.seed, "detector", did.str()));
            auto it = config_.monitoring.find(did);
            if (it != config_.monitoring.end()) {
                for (const auto& p : it->second) {
                    det.register_monitored(p, 0.0);
                }
            }
            detectors_.emplace(did, std::move(det));
        }
    }
    for (const auto& p : config_.topology.all_processes()) {
        process_rngs_.emplace(p, RandomStream(derive_seed(config_.seed, "process", p.str())));
    }
}

const DetectorState& Simulator::detector(const DetectorId& id) const {
    return detectors_.at(id);
}

void Simulator::schedule(SimTime t, EventPayload payload) {
    // Deliveries stay queued past the horizon so in-flight messages can be
    // accounted as drops when the run ends; everything else is cut off.
    if (t > config_.horizon && !std::holds_alternative<DeliverEvent>(payload)) {
        return;
    }
    queue_.push(SimEvent{t, next_seq_++, std::move(payload)});
}

SimTime Simulator::schedule_step(const ProcessId& actor, SimTime t, EventPayload payload) {
    auto [it, inserted] = last_step_.try_emplace(actor, t);
    if (!inserted) {
        // Same-instant steps count as one step (a heartbeat fan-out);
        // distinct steps of one process stay at least delta apart.
        if (t != it->second && t > it->second - config_.delta && t < it->second + config_.delta) {
            t = it->second + config_.delta;
        }
        it->second = std::max(it->second, t);
    }
    schedule(t, std::move(payload));
    return t;
}

bool Simulator::link_up(const NodeId& src, const NodeId& dst) const {
    if (down_links_.count({src, dst}) != 0) {
        return false;
    }
    for (std::size_t index : active_partitions_) {
        const auto& groups = partitions_[index];
        int src_group = -1;
        int dst_group = -1;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].count(src) != 0) {
                src_group = static_cast<int>(g);
            }
            if (groups[g].count(dst) != 0) {
                dst_group = static_cast<int>(g);
            }
        }
        if (src_group >= 0 && dst_group >= 0 && src_group != dst_group) {
            return false;
        }
    }
    return true;
}

LinkParams Simulator::link_params(const NodeId& src, const NodeId& dst) const {
    auto it = link_overrides_.find({src, dst});
    return it == link_overrides_.end() ? config_.link_default : it->second;
}

RandomStream& Simulator::link_rng(const NodeId& src, const NodeId& dst) {
    const LinkKey key{src, dst};
    auto it = link_rngs_.find(key);
    if (it == link_rngs_.end()) {
        it = link_rngs_
                 .emplace(key, RandomStream(derive_seed(config_.seed, "link",
                                                        src.str() + ">" + dst.str())))
                 .first;
    }
    return it->second;
}

void Simulator::transmit(Envelope&& env, SimTime now) {
    auto& stats = link_stats_[{env.src, env.dst}];
    ++stats.sent;
    const char* payload = payload_kind(env.payload);
    const std::string kind = std::holds_alternative<Heartbeat>(env.payload) ? "hb_send" : "send";
    trace_.add(now, kind, env.src.str(), env.dst.str(), 0, std::string("payload=") + payload);
    if (!link_up(env.src, env.dst)) {
        ++stats.dropped;
        trace_.add(now, "drop", env.src.str(), env.dst.str(), 0,
                   std::string("payload=") + payload + " reason=link_down");
        return;
    }
    const LinkParams params = link_params(env.src, env.dst);
    auto& rng = link_rng(env.src, env.dst);
    if (params.loss > 0 && rng.next_double() < params.loss) {
        ++stats.dropped;
        trace_.add(now, "drop", env.src.str(), env.dst.str(), 0,
                   std::string("payload=") + payload + " reason=loss");
        return;
    }
    const double delay =
        params.jitter > 0 ? rng.uniform(params.delay - params.jitter, params.delay + params.jitter)
                          : params.delay;
    env.sent_at = now;
    schedule(now + delay, DeliverEvent{std::move(env)});
}

void Simulator::apply_actions(const DetectorId& owner, Actions&& actions, SimTime now) {
    for (auto& rec : actions.records) {
        trace_.records.push_back(std::move(rec));
    }
    for (auto& env : actions.messages) {
        transmit(std::move(env), now);
    }
    for (auto& broadcast : actions.broadcasts) {
        const auto shared = std::make_shared<const MembershipBroadcast>(std::move(broadcast));
        const auto* cluster = config_.topology.find(owner.cluster);
        for (const auto& peer : cluster->detectors) {
            if (peer == owner) {
                continue;
            }
            transmit(Envelope{NodeId::of(owner), NodeId::of(peer), now, shared}, now);
        }
    }
    for (const auto& timer : actions.timers) {
        schedule(timer.at, TimerEvent{owner, timer.payload});
    }
}

void Simulator::seed_initial_events() {
    // Heartbeat chains, one per (process, monitor) pair, in id order so phase
    // draws are reproducible.
    std::map<ProcessId, std::vector<DetectorId>> monitors_of;
    for (const auto& [did, monitored] : config_.monitoring) {
        for (const auto& p : monitored) {
            monitors_of[p].push_back(did);
        }
    }
    for (const auto& [p, monitors] : monitors_of) {
        std::set<long long> used_slots;
        for (const auto& did : monitors) {
            const SimTime period = config_.params_for(did).heartbeat_period;
            SimTime phase = 0.0;
            if (config_.random_phase) {
                // Snap to the delta grid and keep one process's initial
                // steps on distinct slots so they start >= delta apart.
                phase = phase_rng_.uniform(0.0, period);
                auto slot = static_cast<long long>(phase / config_.delta);
                while (!used_slots.insert(slot).second) {
                    ++slot;
                }
                phase = static_cast<double>(slot) * config_.delta;
            }
            last_step_[p] = std::max(last_step_.count(p) != 0 ? last_step_[p] : phase, phase);
            schedule(phase, HeartbeatSendEvent{p, did});
        }
    }

    for (auto& [did, det] : detectors_) {
        apply_actions(did, det.start(0.0), 0.0);
    }

    std::size_t partition_index = 0;
    for (const auto& fault : config_.faults) {
        switch (fault.kind) {
            case FaultEntry::Kind::Crash:
                schedule(fault.time, CrashEvent{fault.process});
                break;
            case FaultEntry::Kind::Transient:
                schedule(fault.start, TransientStartEvent{fault.process});
                schedule(*fault.end, TransientEndEvent{fault.process});
                break;
            case FaultEntry::Kind::LinkDown:
                schedule(fault.start, LinkDownEvent{fault.a, fault.b});
                if (fault.end) {
                    schedule(*fault.end, LinkUpEvent{fault.a, fault.b});
                }
                break;
            case FaultEntry::Kind::Partition: {
                std::vector<std::set<NodeId>> groups;
                for (const auto& group : fault.groups) {
                    groups.emplace_back(group.begin(), group.end());
                }
                partitions_.push_back(std::move(groups));
                schedule(fault.start, PartitionStartEvent{partition_index});
                schedule(*fault.end, PartitionEndEvent{partition_index});
                ++partition_index;
                break;
            }
        }
    }

    for (const auto& query : config_.queries) {
        schedule(query.time, QueryIssueEvent{query.origin, query.subject});
    }

    schedule(0.0, SampleEvent{});
}

void Simulator::dispatch(const SimEvent& event) {
    const SimTime now = event.time;
    if (const auto* hb = std::get_if<HeartbeatSendEvent>(&event.payload)) {
        if (config_.pattern.crashed_at(hb->process, now)) {
            return;  // chain ends; crashed processes never speak again
        }
        const SimTime period = config_.params_for(hb->monitor).heartbeat_period;
        SimTime next = now + period;
        if (config_.heartbeat_jitter > 0) {
            next += process_rngs_.at(hb->process)
                        .uniform(-config_.heartbeat_jitter, config_.heartbeat_jitter);
        }
        schedule_step(hb->process, next, HeartbeatSendEvent{*hb});
        if (config_.pattern.silent_at(hb->process, now)) {
            return;  // transiently loaded: alive but silent
        }
        transmit(Envelope{NodeId::of(hb->process), NodeId::of(hb->monitor), now,
                          Heartbeat{hb->process}},
                 now);
    } else if (const auto* deliver = std::get_if<DeliverEvent>(&event.payload)) {
        const Envelope& env = deliver->envelope;
        auto& stats = link_stats_[{env.src, env.dst}];
        if (!link_up(env.src, env.dst)) {
            // Cut mid-flight (link went down or a partition started).
            ++stats.dropped;
            trace_.add(now, "drop", env.src.str(), env.dst.str(), 0,
                       std::string("payload=") + payload_kind(env.payload) +
                           " reason=link_down_in_flight");
            return;
        }
        ++stats.delivered;
        trace_.add(now, "deliver", env.dst.str(), env.src.str(), 0,
                   std::string("payload=") + payload_kind(env.payload) +
                       " sent=" + num_str(env.sent_at));
        if (env.dst.kind != NodeId::Kind::Detector) {
            return;  // processes consume nothing
        }
        auto det = detectors_.find(env.dst.as_detector());
        if (det == detectors_.end()) {
            return;
        }
        Actions actions;
        if (const auto* hb = std::get_if<Heartbeat>(&env.payload)) {
            actions = det->second.handle_heartbeat(hb->from, env.sent_at, now);
        } else if (const auto* gossip = std::get_if<GossipMessage>(&env.payload)) {
            actions = det->second.handle_gossip(*gossip, now);
        } else if (const auto* membership = std::get_if<SharedBroadcast>(&env.payload)) {
            actions = det->second.handle_membership(**membership, now);
        } else if (const auto* request = std::get_if<CrossClusterRequest>(&env.payload)) {
            actions = det->second.handle_request(*request, false, now);
        } else if (const auto* relay = std::get_if<CrossClusterRelay>(&env.payload)) {
            actions = det->second.handle_request(relay->request, true, now);
        } else if (const auto* response = std::get_if<CrossClusterResponse>(&env.payload)) {
            actions = det->second.handle_response(*response, now);
        }
        apply_actions(det->first, std::move(actions), now);
    } else if (const auto* timer = std::get_if<TimerEvent>(&event.payload)) {
        auto& det = detectors_.at(timer->owner);
        apply_actions(timer->owner, det.handle_timer(timer->payload, now), now);
    } else if (const auto* crash = std::get_if<CrashEvent>(&event.payload)) {
        trace_.add(now, "crash", crash->process.str(), "", 0, {});
    } else if (const auto* tstart = std::get_if<TransientStartEvent>(&event.payload)) {
        trace_.add(now, "transient_start", tstart->process.str(), "", 0, {});
    } else if (const auto* tend = std::get_if<TransientEndEvent>(&event.payload)) {
        trace_.add(now, "transient_end", tend->process.str(), "", 0, {});
    } else if (const auto* down = std::get_if<LinkDownEvent>(&event.payload)) {
        down_links_.insert({down->a, down->b});
        down_links_.insert({down->b, down->a});
        trace_.add(now, "link_down", down->a.str(), down->b.str(), 0, {});
    } else if (const auto* up = std::get_if<LinkUpEvent>(&event.payload)) {
        down_links_.erase({up->a, up->b});
        down_links_.erase({up->b, up->a});
        trace_.add(now, "link_up", up->a.str(), up->b.str(), 0, {});
    } else if (const auto* pstart = std::get_if<PartitionStartEvent>(&event.payload)) {
        active_partitions_.insert(pstart->index);
        trace_.add(now, "partition_start", "", "", static_cast<double>(pstart->index),
                   groups_detail(partitions_[pstart->index]));
    } else if (const auto* pend = std::get_if<PartitionEndEvent>(&event.payload)) {
        active_partitions_.erase(pend->index);
        trace_.add(now, "partition_end", "", "", static_cast<double>(pend->index), {});
    } else if (const auto* query = std::get_if<QueryIssueEvent>(&event.payload)) {
        auto& det = detectors_.at(query->origin);
        apply_actions(query->origin, det.issue_query(query->subject, next_request_id_++, now,
                                                     registry_),
                      now);
    } else if (std::get_if<SampleEvent>(&event.payload) != nullptr) {
        for (const auto& [did, det] : detectors_) {
            for (const auto& [p, entry] : det.entries()) {
                const auto s = det.sample(p, now);
                trace_.add(now, "sample", did.str(), p.str(), s.effective,
                           "local=" + num_str(s.local) + " frozen=" + (s.frozen ? "1" : "0"));
            }
        }
        if (now + config_.sampling_cadence < config_.horizon) {
            schedule(now + config_.sampling_cadence, SampleEvent{});
        }
    }
}

const Trace& Simulator::run() {
    if (ran_) {
        return trace_;
    }
    ran_ = true;
    trace_.add(0, "meta", "", "", 0,
               "horizon=" + num_str(config_.horizon) + " seed=" + std::to_string(config_.seed) +
                   " cadence=" + num_str(config_.sampling_cadence) +
                   " tv=" + num_str(config_.effective_report_threshold()) +
                   " gossip=" + (config_.gossip_enabled ? "1" : "0") +
                   " delta=" + num_str(config_.delta));
    seed_initial_events();
    while (!queue_.empty()) {
        const SimEvent event = queue_.top();
        queue_.pop();
        if (event.time > config_.horizon) {
            // Still in flight when the run ends: account as a drop so
            // delivered + dropped = sent holds exactly per link.
            if (const auto* deliver = std::get_if<DeliverEvent>(&event.payload)) {
                const Envelope& env = deliver->envelope;
                ++link_stats_[{env.src, env.dst}].dropped;
                trace_.add(config_.horizon, "drop", env.src.str(), env.dst.str(), 0,
                           std::string("payload=") + payload_kind(env.payload) +
                               " reason=horizon");
            }
            continue;
        }
        dispatch(event);
    }
    return trace_;
}

DetectorHistory sample_queries(const ScenarioConfig&, const Trace& trace) {
    DetectorHistory history;
    for (const auto& rec : trace.records) {
        if (rec.kind != "sample") {
            continue;
        }
        const auto detector = parse_detector_id(rec.actor);
        const auto process = parse_process_id(rec.subject);
        if (!detector || !process) {
            continue;
        }
        const auto local = Trace::detail_field(rec.detail, "local");
        history.records.push_back({*detector, *process, rec.time, rec.value,
                                   local.empty() ? rec.value : std::stod(local)});
    }
    return history;
}

}  // namespace fdsim
