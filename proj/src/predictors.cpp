#include "fdsim/predictors.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdsim {

HeartbeatWindow::HeartbeatWindow(int capacity) : capacity_(capacity) {
    if (capacity < 1) {
        throw std::invalid_argument("window capacity must be >= 1");
    }
}

void HeartbeatWindow::record_arrival(SimTime arrival) {
    if (last_arrival_) {
        if (arrival <= *last_arrival_) {
            throw std::invalid_argument("arrivals must be strictly increasing");
        }
        const double gap = arrival - *last_arrival_;
        if (static_cast<int>(gaps_.size()) == capacity_) {
            // Evict the oldest sample: every remaining weight drops by one,
            // which is exactly a subtraction of the plain sum.
            weighted_sum_ -= sum_;
            sum_ -= gaps_.front();
            gaps_.pop_front();
        }
        gaps_.push_back(gap);
        sum_ += gap;
        weighted_sum_ += static_cast<double>(gaps_.size()) * gap;
    }
    last_arrival_ = arrival;
}

double predict_sma(const std::vector<double>& interarrivals) {
    if (interarrivals.empty()) {
        throw std::invalid_argument("insufficient samples");
    }
    double sum = 0;
    for (double v : interarrivals) {
        sum += v;
    }
    return sum / static_cast<double>(interarrivals.size());
}

double predict_restricted_ma(const std::vector<double>& interarrivals) {
    const double mean = predict_sma(interarrivals);
    const double last = interarrivals.back();
    return mean > last ? last : mean;
}

double predict_wma(const std::vector<double>& interarrivals) {
    if (interarrivals.empty()) {
        throw std::invalid_argument("insufficient samples");
    }
    const auto k = interarrivals.size();
    double numerator = 0;
    for (std::size_t i = 0; i < k; ++i) {
        numerator += static_cast<double>(i + 1) * interarrivals[i];
    }
    const double weight_total = static_cast<double>(k * (k + 1)) / 2.0;
    return numerator / weight_total;
}

void EmaState::step(double sample) {
    ++seen;
    if (seen < init_count) {
        init_sum += sample;
        return;
    }
    if (seen == init_count) {
        init_sum += sample;
        value = init_sum / static_cast<double>(init_count);
        return;
    }
    value = alpha * sample + (1.0 - alpha) * *value;
}

PredictorState::PredictorState(PredictorKind kind, int window_size, double ema_alpha)
    : kind_(kind), window_(window_size) {
    ema_.alpha = ema_alpha;
    ema_.init_count = window_size;
}

void PredictorState::observe_arrival(SimTime arrival) {
    const bool had_arrival = window_.last_arrival().has_value();
    window_.record_arrival(arrival);
    if (had_arrival) {
        ema_.step(window_.interarrivals().back());
    }
}

std::optional<double> PredictorState::predicted_gap() const {
    const auto& gaps = window_.interarrivals();
    if (gaps.empty()) {
        return std::nullopt;
    }
    const double count = static_cast<double>(gaps.size());
    switch (kind_) {
        case PredictorKind::Sma:
            return window_.sum() / count;
        case PredictorKind::RestrictedMa: {
            const double mean = window_.sum() / count;
            return std::min(mean, gaps.back());
        }
        case PredictorKind::Wma: {
            const double weight_total = count * (count + 1.0) / 2.0;
            return window_.weighted_sum() / weight_total;
        }
        case PredictorKind::Ema:
            if (ema_.value) {
                return *ema_.value;
            }
            // Not enough samples to seed S yet; use the running mean.
            return window_.sum() / count;
    }
    return std::nullopt;
}

SimTime PredictorState::next_expected_arrival(SimTime last_arrival, SimTime nominal_period) const {
    if (auto gap = predicted_gap()) {
        return last_arrival + *gap;
    }
    return last_arrival + nominal_period;
}

}  // namespace fdsim
