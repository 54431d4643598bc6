#pragma once

#include <map>
#include <optional>

#include "fdsim/core.hpp"
#include "fdsim/predictors.hpp"

namespace fdsim {

// Contribution of a single awaited heartbeat at time t_now given its
// predicted arrival t_pred: max{0, log10(t_now - t_pred + 1)}, optionally
// capped so one missed heartbeat counts at most `cap` (a fully lost
// heartbeat then contributes exactly 1 with the default cap).
double contribution(SimTime t_now, SimTime t_pred, std::optional<double> cap = 1.0);

// A suspicion value reported by a peer detector, valid until `expires`.
struct RemoteValue {
    double value = 0;
    SimTime expires = 0;
};

// Per-monitored-process accrual state for one detector.
//
// Pending heartbeat expectations form an arithmetic ladder
// expect_base + k * expect_gap, k = 0, 1, ...: while the process stays
// silent a fresh heartbeat falls due every predicted period, so the
// suspicion level grows as a capped-contribution count of missed
// heartbeats. Every accepted heartbeat rebases the ladder.
class SuspicionEntry {
public:
    SuspicionEntry(ProcessId monitored, const DetectorParams& params, SimTime registered_at);

    // Accepts a heartbeat arrival: pending expectations are cleared, the
    // predictor window advances, the entry unfreezes and the ladder restarts
    // from the new prediction. Returns false (no state change) for
    // out-of-order or duplicate arrivals.
    bool on_heartbeat(SimTime arrival);

    // Locally accrued suspicion: the sum of contributions of all heartbeats
    // currently due and missing. While frozen, reports the value captured at
    // freeze time.
    double local_suspicion(SimTime t_now) const;

    // min over the local level and all unexpired remote values.
    double effective_suspicion(SimTime t_now) const;

    // Earliest t >= from at which the unfrozen local suspicion reaches
    // `threshold`, assuming the silence continues.
    SimTime local_crossing_time(double threshold, SimTime from) const;

    void freeze(SimTime now, SimTime deadline);
    // Reasons: heartbeat handled inside on_heartbeat; gossip arrival and
    // deadline expiry call this directly.
    void unfreeze();
    bool frozen() const { return frozen_; }
    std::optional<SimTime> freeze_deadline() const { return freeze_deadline_; }

    void store_remote(const DetectorId& from, double value, SimTime expires);
    // Drops remote values with expires <= t_now; returns true if any left.
    void prune_remotes(SimTime t_now);
    const std::map<DetectorId, RemoteValue>& remote_values() const { return remote_values_; }
    // Earliest expiry among values that currently cap the effective level
    // below `threshold`, if any.
    std::optional<SimTime> earliest_masking_expiry(double threshold, SimTime t_now) const;

    bool suspected() const { return suspected_; }
    void set_suspected(bool s) { suspected_ = s; }

    const ProcessId& monitored() const { return monitored_; }
    const PredictorState& predictor() const { return predictor_; }
    SimTime expect_base() const { return expect_base_; }
    SimTime expect_gap() const { return expect_gap_; }
    std::optional<SimTime> last_arrival() const { return predictor_.window().last_arrival(); }

private:
    double ladder_suspicion(SimTime t_now) const;

    ProcessId monitored_;
    DetectorParams params_;
    PredictorState predictor_;
    SimTime expect_base_;
    SimTime expect_gap_;
    bool frozen_ = false;
    double frozen_value_ = 0;
    std::optional<SimTime> freeze_deadline_;
    std::map<DetectorId, RemoteValue> remote_values_;
    bool suspected_ = false;
};

}  // namespace fdsim
