#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdsim/core.hpp"
#include "fdsim/trace.hpp"

namespace fdsim {

// Binary view of a sampled suspicion series: thresholding at TV turns the
// accrual output into suspect/trust transitions.
struct BinaryTransition {
    SimTime time = 0;
    bool to_suspected = false;  // true = S-transition, false = T-transition
};

struct TransitionLog {
    std::map<DetectorHistory::PairKey, std::vector<BinaryTransition>> transitions;

    static TransitionLog derive(const DetectorHistory& history, double threshold);
};

struct MistakeStats {
    std::vector<double> mistake_durations;  // T_M
    std::vector<double> recurrence_gaps;    // T_MR, start-to-start
    std::vector<double> good_periods;       // T_G
    double mistake_rate = 0;                // lambda_M = mistakes / horizon
};

// Per-pair share of the horizon; the three parts always sum to the horizon.
struct PairPartition {
    double mistake_time = 0;           // suspected while the process was alive
    double good_time = 0;              // not suspected
    double suspected_faulty_time = 0;  // suspected after the crash
};

struct DiamondPVerdict {
    bool strong_completeness = true;
    std::vector<std::string> completeness_violations;  // "detector!process"
    bool eventual_strong_accuracy = true;
    // Earliest time after which no correct process is suspected; set iff
    // accuracy holds within the horizon.
    std::optional<SimTime> stabilization_time;
};

struct MetricAggregate {
    std::size_t count = 0;
    double mean = 0;
    double min = 0;
    double max = 0;

    static MetricAggregate of(const std::vector<double>& values);
};

struct QosReport {
    struct PairRow {
        DetectorId detector;
        ProcessId process;
        bool faulty = false;
        std::optional<double> detection_time;
        std::size_t mistakes = 0;
        double mistake_time = 0;
        double good_time = 0;
        double suspected_faulty_time = 0;
        double query_accuracy = 1.0;
        double mistake_rate = 0;
    };

    MetricAggregate detection_time;      // T_D over detected faulty pairs
    std::size_t undetected_pairs = 0;
    MetricAggregate mistake_recurrence;  // T_MR pooled over correct pairs
    MetricAggregate mistake_duration;    // T_M pooled over correct pairs
    MetricAggregate good_period;         // T_G pooled over correct pairs
    MetricAggregate mistake_rate;        // lambda_M across correct pairs
    MetricAggregate query_accuracy;      // P_A across all pairs
    DiamondPVerdict diamond_p;
    std::vector<PairRow> rows;
    double threshold = 1.0;
    SimTime horizon = 0;

    std::string to_text() const;
    std::string to_csv() const;
};

// Pure post-processing over a finished trace plus the ground-truth pattern.
// Recomputation over the same inputs yields identical results.
class QosAnalyzer {
public:
    QosAnalyzer(const Trace& trace, const FailurePattern& pattern, double threshold,
                SimTime horizon);

    const DetectorHistory& history() const { return history_; }
    const TransitionLog& transitions() const { return log_; }
    std::vector<DetectorHistory::PairKey> pairs() const;

    // Time from the crash of p until q suspects it permanently; nullopt if
    // the suspicion never becomes permanent within the horizon. Throws
    // std::invalid_argument if p is correct.
    std::optional<SimTime> detection_time(const DetectorId& q, const ProcessId& p) const;

    // Mistake metrics against a correct process; throws if p is faulty.
    MistakeStats mistake_stats(const DetectorId& q, const ProcessId& p) const;

    // Fraction of samples whose binary verdict matches the failure pattern.
    double query_accuracy(const DetectorId& q, const ProcessId& p) const;

    PairPartition partition(const DetectorId& q, const ProcessId& p) const;

    DiamondPVerdict check_diamond_p() const;

    QosReport report() const;

private:
    struct Interval {
        SimTime start = 0;
        SimTime end = 0;
    };
    std::vector<Interval> suspected_intervals(const DetectorHistory::PairKey& key) const;

    FailurePattern pattern_;
    double threshold_;
    SimTime horizon_;
    DetectorHistory history_;
    std::map<DetectorHistory::PairKey, std::vector<HistoryRecord>> samples_;
    TransitionLog log_;
};

}  // namespace fdsim
