#include "fdsim/core.hpp"

#include <charconv>

namespace fdsim {

std::string ProcessId::str() const {
    return cluster.name + "/p" + std::to_string(index);
}

std::string DetectorId::str() const {
    return cluster.name + "/d" + std::to_string(index);
}

namespace {

std::optional<std::pair<std::string, int>> split_id(const std::string& text, char tag) {
    const auto slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 2 >= text.size() + 1) {
        return std::nullopt;
    }
    if (text[slash + 1] != tag) {
        return std::nullopt;
    }
    const char* first = text.data() + slash + 2;
    const char* last = text.data() + text.size();
    if (first == last) {
        return std::nullopt;
    }
    int index = 0;
    auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec != std::errc{} || ptr != last || index < 0) {
        return std::nullopt;
    }
    return std::make_pair(text.substr(0, slash), index);
}

}  // namespace

std::optional<ProcessId> parse_process_id(const std::string& text) {
    if (auto parts = split_id(text, 'p')) {
        return ProcessId{ClusterId{parts->first}, parts->second};
    }
    return std::nullopt;
}

std::optional<DetectorId> parse_detector_id(const std::string& text) {
    if (auto parts = split_id(text, 'd')) {
        return DetectorId{ClusterId{parts->first}, parts->second};
    }
    return std::nullopt;
}

bool FailurePattern::is_faulty(const ProcessId& p) const {
    return crash_times.count(p) != 0;
}

bool FailurePattern::crashed_at(const ProcessId& p, SimTime t) const {
    auto it = crash_times.find(p);
    return it != crash_times.end() && it->second <= t;
}

bool FailurePattern::silent_at(const ProcessId& p, SimTime t) const {
    if (crashed_at(p, t)) {
        return true;
    }
    auto it = transient_intervals.find(p);
    if (it == transient_intervals.end()) {
        return false;
    }
    for (const auto& [start, end] : it->second) {
        if (start <= t && t <= end) {
            return true;
        }
    }
    return false;
}

std::set<ProcessId> correct_set(const FailurePattern& pattern, SimTime) {
    std::set<ProcessId> out;
    for (const auto& p : pattern.universe) {
        if (!pattern.is_faulty(p)) {
            out.insert(p);
        }
    }
    return out;
}

std::set<ProcessId> failed_at(const FailurePattern& pattern, SimTime t) {
    std::set<ProcessId> out;
    for (const auto& [p, crash] : pattern.crash_times) {
        if (crash <= t) {
            out.insert(p);
        }
    }
    return out;
}

const char* to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::Sma: return "sma";
        case PredictorKind::RestrictedMa: return "restricted_ma";
        case PredictorKind::Wma: return "wma";
        case PredictorKind::Ema: return "ema";
    }
    return "sma";
}

std::optional<PredictorKind> predictor_from_string(const std::string& name) {
    if (name == "sma") return PredictorKind::Sma;
    if (name == "restricted_ma") return PredictorKind::RestrictedMa;
    if (name == "wma") return PredictorKind::Wma;
    if (name == "ema") return PredictorKind::Ema;
    return std::nullopt;
}

void DetectorParams::validate(std::vector<std::string>& errors, const std::string& context) const {
    auto fail = [&](const std::string& msg) { errors.push_back(context + ": " + msg); };
    if (heartbeat_period <= 0) fail("heartbeat_period must be > 0");
    if (window_size < 2) fail("window_size must be >= 2");
    if (ema_alpha <= 0 || ema_alpha >= 1) fail("ema_alpha must lie in (0,1)");
    if (threshold_tv <= 0) fail("threshold_tv must be > 0");
    if (gossip_fanout < 1) fail("gossip_fanout must be >= 1");
    if (gossip_period <= 0) fail("gossip_period must be > 0");
    if (freeze_timeout <= 0) fail("freeze_timeout must be > 0");
    if (remote_value_ttl <= 0) fail("remote_value_ttl must be > 0");
    if (contribution_cap && *contribution_cap <= 0) fail("contribution_cap must be > 0 or none");
}

std::map<DetectorHistory::PairKey, std::vector<HistoryRecord>> DetectorHistory::by_pair() const {
    std::map<PairKey, std::vector<HistoryRecord>> out;
    for (const auto& rec : records) {
        out[{rec.detector, rec.process}].push_back(rec);
    }
    return out;
}

}  // namespace fdsim
