#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "fdsim/core.hpp"

namespace fdsim {

// Sliding window over the most recent heartbeat inter-arrival times.
// Keeps running sums so predictions are O(1) per update; capacity bounds the
// number of inter-arrival samples retained, not raw timestamps.
class HeartbeatWindow {
public:
    explicit HeartbeatWindow(int capacity);

    // Records an arrival timestamp. Arrivals must be strictly increasing;
    // callers drop out-of-order deliveries before getting here.
    void record_arrival(SimTime arrival);

    std::optional<SimTime> last_arrival() const { return last_arrival_; }
    const std::deque<double>& interarrivals() const { return gaps_; }
    int capacity() const { return capacity_; }
    bool empty() const { return gaps_.empty(); }

    double sum() const { return sum_; }
    // Weighted sum with arithmetically decaying weights: newest sample has
    // weight k (current size), oldest has weight 1.
    double weighted_sum() const { return weighted_sum_; }

private:
    int capacity_;
    std::deque<double> gaps_;
    std::optional<SimTime> last_arrival_;
    double sum_ = 0;
    double weighted_sum_ = 0;
};

// Unweighted mean of the samples (up to the window size; fewer while the
// window is filling). Throws std::invalid_argument on an empty list.
double predict_sma(const std::vector<double>& interarrivals);

// SMA, except never above the last real sample: a falling signal is tracked
// by returning the last value whenever the mean exceeds it.
double predict_restricted_ma(const std::vector<double>& interarrivals);

// Arithmetically weighted mean: weights k, k-1, ..., 1 from newest to oldest
// over the last k samples.
double predict_wma(const std::vector<double>& interarrivals);

// Exponential moving average state. S stays undefined until window_size
// samples have been seen; it is then seeded with their mean and updated as
// S' = alpha * L + (1 - alpha) * S per subsequent sample.
struct EmaState {
    double alpha = 0.25;
    int init_count = 5;               // samples required before S is defined
    int seen = 0;
    double init_sum = 0;              // accumulates the seed samples
    std::optional<double> value;      // S, once defined

    void step(double sample);
};

// One detector's prediction state for a single monitored process.
class PredictorState {
public:
    PredictorState(PredictorKind kind, int window_size, double ema_alpha);

    void observe_arrival(SimTime arrival);

    // Predicted next inter-arrival from whatever samples exist; nullopt until
    // the first gap has been observed.
    std::optional<double> predicted_gap() const;

    // Absolute time the next heartbeat is expected. Falls back to
    // last_arrival + nominal_period until two heartbeats have been seen.
    SimTime next_expected_arrival(SimTime last_arrival, SimTime nominal_period) const;

    const HeartbeatWindow& window() const { return window_; }
    const EmaState& ema() const { return ema_; }
    PredictorKind kind() const { return kind_; }

private:
    PredictorKind kind_;
    HeartbeatWindow window_;
    EmaState ema_;
};

}  // namespace fdsim
