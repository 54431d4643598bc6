#include "fdsim/metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fdsim {

TransitionLog TransitionLog::derive(const DetectorHistory& history, double threshold) {
    TransitionLog log;
    std::map<DetectorHistory::PairKey, bool> state;
    for (const auto& rec : history.records) {
        const DetectorHistory::PairKey key{rec.detector, rec.process};
        const bool suspected = rec.value >= threshold;
        auto [it, inserted] = state.try_emplace(key, false);
        // Initial state is trusted, so the first transition is an S.
        if (suspected != it->second) {
            it->second = suspected;
            log.transitions[key].push_back({rec.time, suspected});
        } else if (inserted) {
            log.transitions.try_emplace(key);
        }
    }
    return log;
}

MetricAggregate MetricAggregate::of(const std::vector<double>& values) {
    MetricAggregate agg;
    agg.count = values.size();
    if (values.empty()) {
        return agg;
    }
    agg.min = values.front();
    agg.max = values.front();
    double sum = 0;
    for (double v : values) {
        sum += v;
        agg.min = std::min(agg.min, v);
        agg.max = std::max(agg.max, v);
    }
    agg.mean = sum / static_cast<double>(values.size());
    return agg;
}

QosAnalyzer::QosAnalyzer(const Trace& trace, const FailurePattern& pattern, double threshold,
                         SimTime horizon)
    : pattern_(pattern), threshold_(threshold), horizon_(horizon) {
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
        history_.records.push_back({*detector, *process, rec.time, rec.value,
                                    local.empty() ? rec.value : std::stod(local)});
    }
    samples_ = history_.by_pair();
    log_ = TransitionLog::derive(history_, threshold_);
}

std::vector<DetectorHistory::PairKey> QosAnalyzer::pairs() const {
    std::vector<DetectorHistory::PairKey> out;
    for (const auto& [key, recs] : samples_) {
        out.push_back(key);
    }
    return out;
}

std::vector<QosAnalyzer::Interval> QosAnalyzer::suspected_intervals(
    const DetectorHistory::PairKey& key) const {
    std::vector<Interval> out;
    auto it = log_.transitions.find(key);
    if (it == log_.transitions.end()) {
        return out;
    }
    std::optional<SimTime> open;
    for (const auto& tr : it->second) {
        if (tr.to_suspected) {
            open = tr.time;
        } else if (open) {
            out.push_back({*open, tr.time});
            open.reset();
        }
    }
    if (open) {
        out.push_back({*open, horizon_});
    }
    return out;
}

std::optional<SimTime> QosAnalyzer::detection_time(const DetectorId& q, const ProcessId& p) const {
    auto crash = pattern_.crash_times.find(p);
    if (crash == pattern_.crash_times.end()) {
        throw std::invalid_argument("detection_time not applicable: " + p.str() + " is correct");
    }
    auto it = log_.transitions.find({q, p});
    if (it == log_.transitions.end() || it->second.empty() || !it->second.back().to_suspected) {
        return std::nullopt;  // never permanently suspected within the horizon
    }
    return it->second.back().time - crash->second;
}

MistakeStats QosAnalyzer::mistake_stats(const DetectorId& q, const ProcessId& p) const {
    if (pattern_.is_faulty(p)) {
        throw std::invalid_argument("mistake_stats not applicable: " + p.str() + " is faulty");
    }
    MistakeStats stats;
    const auto intervals = suspected_intervals({q, p});
    SimTime cursor = 0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        stats.mistake_durations.push_back(intervals[i].end - intervals[i].start);
        if (i > 0) {
            stats.recurrence_gaps.push_back(intervals[i].start - intervals[i - 1].start);
        }
        if (intervals[i].start > cursor) {
            stats.good_periods.push_back(intervals[i].start - cursor);
        }
        cursor = intervals[i].end;
    }
    if (cursor < horizon_) {
        stats.good_periods.push_back(horizon_ - cursor);
    }
    stats.mistake_rate = static_cast<double>(intervals.size()) / horizon_;
    return stats;
}

double QosAnalyzer::query_accuracy(const DetectorId& q, const ProcessId& p) const {
    auto it = samples_.find({q, p});
    if (it == samples_.end() || it->second.empty()) {
        return 1.0;
    }
    std::size_t correct = 0;
    for (const auto& rec : it->second) {
        const bool suspected = rec.value >= threshold_;
        if (suspected == pattern_.crashed_at(p, rec.time)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(it->second.size());
}

PairPartition QosAnalyzer::partition(const DetectorId& q, const ProcessId& p) const {
    PairPartition part;
    const auto intervals = suspected_intervals({q, p});
    const auto crash = pattern_.crash_times.find(p);
    double suspected_total = 0;
    for (const auto& interval : intervals) {
        suspected_total += interval.end - interval.start;
        if (crash != pattern_.crash_times.end()) {
            const double lo = std::max(interval.start, crash->second);
            if (interval.end > lo) {
                part.suspected_faulty_time += interval.end - lo;
            }
        }
    }
    part.mistake_time = suspected_total - part.suspected_faulty_time;
    part.good_time = horizon_ - suspected_total;
    return part;
}

DiamondPVerdict QosAnalyzer::check_diamond_p() const {
    DiamondPVerdict verdict;
    SimTime stabilization = 0;
    for (const auto& [key, recs] : samples_) {
        const auto& [q, p] = key;
        if (pattern_.is_faulty(p)) {
            if (!detection_time(q, p)) {
                verdict.strong_completeness = false;
                verdict.completeness_violations.push_back(q.str() + "!" + p.str());
            }
            continue;
        }
        const auto intervals = suspected_intervals(key);
        if (!intervals.empty()) {
            if (intervals.back().end >= horizon_) {
                verdict.eventual_strong_accuracy = false;
            } else {
                stabilization = std::max(stabilization, intervals.back().end);
            }
        }
    }
    if (verdict.eventual_strong_accuracy) {
        verdict.stabilization_time = stabilization;
    }
    return verdict;
}

QosReport QosAnalyzer::report() const {
    QosReport report;
    report.threshold = threshold_;
    report.horizon = horizon_;
    std::vector<double> detections;
    std::vector<double> recurrences;
    std::vector<double> durations;
    std::vector<double> goods;
    std::vector<double> rates;
    std::vector<double> accuracies;

    for (const auto& [key, recs] : samples_) {
        const auto& [q, p] = key;
        QosReport::PairRow row;
        row.detector = q;
        row.process = p;
        row.faulty = pattern_.is_faulty(p);
        row.query_accuracy = query_accuracy(q, p);
        accuracies.push_back(row.query_accuracy);
        const auto part = partition(q, p);
        row.mistake_time = part.mistake_time;
        row.good_time = part.good_time;
        row.suspected_faulty_time = part.suspected_faulty_time;
        if (row.faulty) {
            row.detection_time = detection_time(q, p);
            if (row.detection_time) {
                detections.push_back(*row.detection_time);
            } else {
                ++report.undetected_pairs;
            }
            row.mistakes = suspected_intervals(key).size();
        } else {
            const auto stats = mistake_stats(q, p);
            row.mistakes = stats.mistake_durations.size();
            row.mistake_rate = stats.mistake_rate;
            rates.push_back(stats.mistake_rate);
            recurrences.insert(recurrences.end(), stats.recurrence_gaps.begin(),
                               stats.recurrence_gaps.end());
            durations.insert(durations.end(), stats.mistake_durations.begin(),
                             stats.mistake_durations.end());
            goods.insert(goods.end(), stats.good_periods.begin(), stats.good_periods.end());
        }
        report.rows.push_back(std::move(row));
    }

    report.detection_time = MetricAggregate::of(detections);
    report.mistake_recurrence = MetricAggregate::of(recurrences);
    report.mistake_duration = MetricAggregate::of(durations);
    report.good_period = MetricAggregate::of(goods);
    report.mistake_rate = MetricAggregate::of(rates);
    report.query_accuracy = MetricAggregate::of(accuracies);
    report.diamond_p = check_diamond_p();
    return report;
}

namespace {

void print_aggregate(std::ostringstream& out, const char* name, const MetricAggregate& agg) {
    out << "  " << name << ": count=" << agg.count;
    if (agg.count > 0) {
        out << " mean=" << num_str(agg.mean) << " min=" << num_str(agg.min)
            << " max=" << num_str(agg.max);
    }
    out << "\n";
}

}  // namespace

std::string QosReport::to_text() const {
    std::ostringstream out;
    out << "QoS report (threshold=" << num_str(threshold) << ", horizon=" << num_str(horizon)
        << ")\n";
    print_aggregate(out, "detection_time T_D", detection_time);
    out << "  undetected faulty pairs: " << undetected_pairs << "\n";
    print_aggregate(out, "mistake_recurrence T_MR", mistake_recurrence);
    print_aggregate(out, "mistake_duration T_M", mistake_duration);
    print_aggregate(out, "good_period T_G", good_period);
    print_aggregate(out, "mistake_rate lambda_M", mistake_rate);
    print_aggregate(out, "query_accuracy P_A", query_accuracy);
    out << "  strong completeness: " << (diamond_p.strong_completeness ? "holds" : "VIOLATED");
    if (!diamond_p.completeness_violations.empty()) {
        out << " (";
        for (std::size_t i = 0; i < diamond_p.completeness_violations.size(); ++i) {
            out << (i > 0 ? ", " : "") << diamond_p.completeness_violations[i];
        }
        out << ")";
    }
    out << "\n";
    out << "  eventual strong accuracy: ";
    if (diamond_p.eventual_strong_accuracy) {
        out << "holds, stabilization at " << num_str(*diamond_p.stabilization_time) << "\n";
    } else {
        out << "violated within horizon\n";
    }
    return out.str();
}

std::string QosReport::to_csv() const {
    std::ostringstream out;
    out << "detector,process,faulty,detection_time,mistakes,mistake_time,good_time,"
           "suspected_faulty_time,query_accuracy,mistake_rate\n";
    for (const auto& row : rows) {
        out << row.detector.str() << ',' << row.process.str() << ',' << (row.faulty ? 1 : 0)
            << ',' << (row.detection_time ? num_str(*row.detection_time) : "") << ','
            << row.mistakes << ',' << num_str(row.mistake_time) << ',' << num_str(row.good_time)
            << ',' << num_str(row.suspected_faulty_time) << ',' << num_str(row.query_accuracy)
            << ',' << num_str(row.mistake_rate) << "\n";
    }
    return out.str();
}

}  // namespace fdsim
