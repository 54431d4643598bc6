#include "fdsim/accrual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdsim {

double contribution(SimTime t_now, SimTime t_pred, std::optional<double> cap) {
    const double late = t_now - t_pred;
    if (late <= 0) {
        return 0;
    }
    const double raw = std::log10(late + 1.0);
    if (cap && raw > *cap) {
        return *cap;
    }
    return raw;
}

SuspicionEntry::SuspicionEntry(ProcessId monitored, const DetectorParams& params,
                               SimTime registered_at)
    : monitored_(std::move(monitored)),
      params_(params),
      predictor_(params.predictor, params.window_size, params.ema_alpha),
      // Until the first heartbeat lands, one nominal period of silence is
      // granted from registration; a process dead from the start still
      // accrues suspicion.
      expect_base_(registered_at + params.heartbeat_period),
      expect_gap_(params.heartbeat_period) {}

bool SuspicionEntry::on_heartbeat(SimTime arrival) {
    const auto last = predictor_.window().last_arrival();
    if (last && arrival <= *last) {
        return false;
    }
    predictor_.observe_arrival(arrival);
    expect_base_ = predictor_.next_expected_arrival(arrival, params_.heartbeat_period);
    const auto gap = predictor_.predicted_gap();
    expect_gap_ = gap ? *gap : params_.heartbeat_period;
    unfreeze();
    return true;
}

double SuspicionEntry::ladder_suspicion(SimTime t_now) const {
    if (t_now < expect_base_) {
        return 0;
    }
    // Number of expectations already due.
    const double span = t_now - expect_base_;
    const auto due = static_cast<long long>(std::floor(span / expect_gap_)) + 1;
    if (params_.contribution_cap) {
        const double cap = *params_.contribution_cap;
        // A contribution saturates at its cap once the heartbeat is
        // 10^cap - 1 late; older misses need no log evaluation.
        const double saturation_lag = std::pow(10.0, cap) - 1.0;
        long long saturated = 0;
        if (span > saturation_lag) {
            saturated = std::min<long long>(
                due, static_cast<long long>(std::floor((span - saturation_lag) / expect_gap_)) + 1);
        }
        double sum = static_cast<double>(saturated) * cap;
        for (long long k = saturated; k < due; ++k) {
            sum += contribution(t_now, expect_base_ + static_cast<double>(k) * expect_gap_,
                                params_.contribution_cap);
        }
        return sum;
    }
    double sum = 0;
    for (long long k = 0; k < due; ++k) {
        sum += contribution(t_now, expect_base_ + static_cast<double>(k) * expect_gap_, std::nullopt);
    }
    return sum;
}

double SuspicionEntry::local_suspicion(SimTime t_now) const {
    if (frozen_) {
        return frozen_value_;
    }
    return ladder_suspicion(t_now);
}

double SuspicionEntry::effective_suspicion(SimTime t_now) const {
    double level = local_suspicion(t_now);
    for (const auto& [from, remote] : remote_values_) {
        if (remote.expires > t_now) {
            level = std::min(level, remote.value);
        }
    }
    return level;
}

SimTime SuspicionEntry::local_crossing_time(double threshold, SimTime from) const {
    SimTime lo = std::max(from, expect_base_);
    if (ladder_suspicion(lo) >= threshold) {
        return lo;
    }
    // Walk expectation segments until the level at a segment end clears the
    // threshold, then bisect inside it. The ladder gains at least `cap` per
    // segment once contributions saturate, so this terminates.
    SimTime hi = lo + expect_gap_;
    for (int guard = 0; ladder_suspicion(hi) < threshold; ++guard) {
        lo = hi;
        hi += expect_gap_;
        if (guard > 1000000) {
            throw std::runtime_error("suspicion never reaches threshold");
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const SimTime mid = lo + (hi - lo) / 2;
        if (ladder_suspicion(mid) >= threshold) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

void SuspicionEntry::freeze(SimTime now, SimTime deadline) {
    if (frozen_) {
        return;
    }
    frozen_value_ = ladder_suspicion(now);
    frozen_ = true;
    freeze_deadline_ = deadline;
}

void SuspicionEntry::unfreeze() {
    frozen_ = false;
    freeze_deadline_.reset();
}

void SuspicionEntry::store_remote(const DetectorId& from, double value, SimTime expires) {
    if (value < 0) {
        throw std::invalid_argument("remote suspicion must be >= 0");
    }
    remote_values_[from] = RemoteValue{value, expires};
}

void SuspicionEntry::prune_remotes(SimTime t_now) {
    for (auto it = remote_values_.begin(); it != remote_values_.end();) {
        if (it->second.expires <= t_now) {
            it = remote_values_.erase(it);
        } else {
            ++it;
        }
    }
}

std::optional<SimTime> SuspicionEntry::earliest_masking_expiry(double threshold, SimTime t_now) const {
    std::optional<SimTime> earliest;
    for (const auto& [from, remote] : remote_values_) {
        if (remote.expires > t_now && remote.value < threshold) {
            if (!earliest || remote.expires < *earliest) {
                earliest = remote.expires;
            }
        }
    }
    return earliest;
}

}  // namespace fdsim
