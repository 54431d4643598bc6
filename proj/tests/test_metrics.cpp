#include <cmath>

#include "doctest.h"
#include "fdsim/metrics.hpp"
#include "helpers.hpp"

using namespace fdsim;
using fdsim::test::parse_or_fail;

namespace {

const ClusterId kCluster{"m"};
const DetectorId kQ{kCluster, 0};
const ProcessId kP{kCluster, 0};

// Builds a trace of bare sample records for one (q, p) pair: each entry is
// (time, value).
Trace sample_trace(const std::vector<std::pair<double, double>>& samples) {
    Trace trace;
    for (const auto& [t, v] : samples) {
        trace.add(t, "sample", kQ.str(), kP.str(), v, "local=" + num_str(v) + " frozen=0");
    }
    return trace;
}

FailurePattern crashed_at(double t) {
    FailurePattern pattern;
    pattern.universe.insert(kP);
    pattern.crash_times[kP] = t;
    return pattern;
}

FailurePattern all_correct() {
    FailurePattern pattern;
    pattern.universe.insert(kP);
    return pattern;
}

// Step series helper: suspicion 2.0 inside each [start, end) interval,
// sampled at unit cadence over [0, horizon).
Trace step_trace(const std::vector<std::pair<int, int>>& suspected, int horizon) {
    std::vector<std::pair<double, double>> samples;
    for (int t = 0; t < horizon; ++t) {
        double value = 0;
        for (const auto& [s, e] : suspected) {
            if (t >= s && t < e) {
                value = 2.0;
            }
        }
        samples.push_back({static_cast<double>(t), value});
    }
    return sample_trace(samples);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("transitions alternate starting from trusted") {
    const auto trace = step_trace({{10, 12}, {50, 53}}, 100);
    QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
    const auto& transitions = analyzer.transitions().transitions.at({kQ, kP});
    REQUIRE(transitions.size() == 4);
    CHECK(transitions[0].to_suspected);
    CHECK(transitions[0].time == doctest::Approx(10));
    CHECK_FALSE(transitions[1].to_suspected);
    CHECK(transitions[1].time == doctest::Approx(12));
    CHECK(transitions[2].to_suspected);
    CHECK_FALSE(transitions[3].to_suspected);
    for (std::size_t i = 1; i < transitions.size(); ++i) {
        CHECK(transitions[i].to_suspected != transitions[i - 1].to_suspected);
    }
}

TEST_CASE("detection time requires permanence") {
    SUBCASE("clean detection") {
        // Crash at 100 would be outside this 200-horizon trace; use 100.
        auto trace = step_trace({{112, 200}}, 200);
        QosAnalyzer analyzer(trace, crashed_at(100), 1.0, 200);
        const auto td = analyzer.detection_time(kQ, kP);
        REQUIRE(td.has_value());
        CHECK(*td == doctest::Approx(12.0));
    }
    SUBCASE("an early flap moves detection to the last S-transition") {
        auto trace = step_trace({{105, 107}, {110, 200}}, 200);
        QosAnalyzer analyzer(trace, crashed_at(100), 1.0, 200);
        CHECK(*analyzer.detection_time(kQ, kP) == doctest::Approx(10.0));
    }
    SUBCASE("undetected within the horizon") {
        auto trace = step_trace({}, 200);
        QosAnalyzer analyzer(trace, crashed_at(100), 1.0, 200);
        CHECK_FALSE(analyzer.detection_time(kQ, kP).has_value());
    }
    SUBCASE("not applicable to correct processes") {
        auto trace = step_trace({}, 200);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 200);
        CHECK_THROWS_AS(analyzer.detection_time(kQ, kP), std::invalid_argument);
    }
}

TEST_CASE("mistake statistics") {
    SUBCASE("zero mistakes give a zero rate and one full good period") {
        auto trace = step_trace({}, 100);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
        const auto stats = analyzer.mistake_stats(kQ, kP);
        CHECK(stats.mistake_rate == doctest::Approx(0.0));
        REQUIRE(stats.good_periods.size() == 1);
        CHECK(stats.good_periods[0] == doctest::Approx(100.0));
        CHECK(stats.mistake_durations.empty());
    }
    SUBCASE("durations and recurrence match the definition") {
        auto trace = step_trace({{10, 12}, {50, 53}}, 100);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
        const auto stats = analyzer.mistake_stats(kQ, kP);
        REQUIRE(stats.mistake_durations.size() == 2);
        CHECK(stats.mistake_durations[0] == doctest::Approx(2.0));
        CHECK(stats.mistake_durations[1] == doctest::Approx(3.0));
        REQUIRE(stats.recurrence_gaps.size() == 1);
        CHECK(stats.recurrence_gaps[0] == doctest::Approx(40.0));
        CHECK(stats.mistake_rate == doctest::Approx(0.02));
        REQUIRE(stats.good_periods.size() == 3);
        CHECK(stats.good_periods[0] == doctest::Approx(10.0));
        CHECK(stats.good_periods[1] == doctest::Approx(38.0));
        CHECK(stats.good_periods[2] == doctest::Approx(47.0));
    }
    SUBCASE("not applicable to faulty processes") {
        auto trace = step_trace({}, 100);
        QosAnalyzer analyzer(trace, crashed_at(10), 1.0, 100);
        CHECK_THROWS_AS(analyzer.mistake_stats(kQ, kP), std::invalid_argument);
    }
}

TEST_CASE("query accuracy counts matching verdicts") {
    SUBCASE("perfect on a correct process") {
        auto trace = step_trace({}, 100);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
        CHECK(analyzer.query_accuracy(kQ, kP) == doctest::Approx(1.0));
    }
    SUBCASE("ten percent wrong suspicion gives 0.9") {
        auto trace = step_trace({{40, 50}}, 100);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
        CHECK(analyzer.query_accuracy(kQ, kP) == doctest::Approx(0.9));
    }
    SUBCASE("detection lag costs exactly the lag samples") {
        auto trace = step_trace({{60, 100}}, 100);
        QosAnalyzer analyzer(trace, crashed_at(50), 1.0, 100);
        CHECK(analyzer.query_accuracy(kQ, kP) == doctest::Approx(0.9));
    }
}

TEST_CASE("diamond-p verdicts") {
    SUBCASE("detected crash and clean accuracy hold") {
        auto trace = step_trace({{110, 200}}, 200);
        QosAnalyzer analyzer(trace, crashed_at(100), 1.0, 200);
        const auto verdict = analyzer.check_diamond_p();
        CHECK(verdict.strong_completeness);
        CHECK(verdict.eventual_strong_accuracy);
        REQUIRE(verdict.stabilization_time.has_value());
        CHECK(*verdict.stabilization_time == doctest::Approx(0.0));
    }
    SUBCASE("a trace ending mid-mistake violates accuracy within the horizon") {
        auto trace = step_trace({{150, 200}}, 200);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 200);
        const auto verdict = analyzer.check_diamond_p();
        CHECK_FALSE(verdict.eventual_strong_accuracy);
        CHECK_FALSE(verdict.stabilization_time.has_value());
    }
    SUBCASE("a mistake that ends sets the stabilization time") {
        auto trace = step_trace({{20, 30}}, 200);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 200);
        const auto verdict = analyzer.check_diamond_p();
        CHECK(verdict.eventual_strong_accuracy);
        CHECK(*verdict.stabilization_time == doctest::Approx(30.0));
    }
    SUBCASE("an undetected crash violates completeness") {
        auto trace = step_trace({}, 200);
        QosAnalyzer analyzer(trace, crashed_at(100), 1.0, 200);
        const auto verdict = analyzer.check_diamond_p();
        CHECK_FALSE(verdict.strong_completeness);
        REQUIRE(verdict.completeness_violations.size() == 1);
        CHECK(verdict.completeness_violations[0] == "m/d0!m/p0");
    }
}

TEST_CASE("the horizon partitions into mistake, good and suspected-faulty time") {
    SUBCASE("correct process") {
        auto trace = step_trace({{10, 12}, {50, 53}}, 100);
        QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
        const auto part = analyzer.partition(kQ, kP);
        CHECK(part.mistake_time == doctest::Approx(5.0));
        CHECK(part.suspected_faulty_time == doctest::Approx(0.0));
        CHECK(part.mistake_time + part.good_time + part.suspected_faulty_time ==
              doctest::Approx(100.0));
    }
    SUBCASE("faulty process splits at the crash instant") {
        auto trace = step_trace({{95, 200}}, 200);
        QosAnalyzer analyzer(trace, crashed_at(100), 1.0, 200);
        const auto part = analyzer.partition(kQ, kP);
        CHECK(part.mistake_time == doctest::Approx(5.0));  // early suspicion was wrong
        CHECK(part.suspected_faulty_time == doctest::Approx(100.0));
        CHECK(part.mistake_time + part.good_time + part.suspected_faulty_time ==
              doctest::Approx(200.0));
    }
}

TEST_CASE("metric computation is a pure function of its inputs") {
    auto trace = step_trace({{10, 12}, {50, 53}}, 100);
    QosAnalyzer a(trace, all_correct(), 1.0, 100);
    QosAnalyzer b(trace, all_correct(), 1.0, 100);
    CHECK(a.report().to_csv() == b.report().to_csv());
    CHECK(a.report().to_text() == b.report().to_text());
}

TEST_CASE("query accuracy converges as the cadence shrinks") {
    // One real scenario sampled at c, c/2, c/4: P_A differences shrink
    // towards the interval-ratio limit.
    auto base = parse_or_fail(R"({
      "horizon": 60,
      "seed": 17,
      "sampling_cadence": 2.0,
      "detector_params": {"heartbeat_period": 1.0},
      "links": {"default": {"delay": 0.05, "jitter": 0.01, "loss": 0.0}},
      "clusters": [{"name": "m", "processes": 1, "detectors": 1}],
      "faults": [{"kind": "crash", "process": "m/p0", "time": 20}]
    })");
    auto accuracy_at = [&](double cadence) {
        auto config = base;
        config.sampling_cadence = cadence;
        Simulator sim(config);
        QosAnalyzer analyzer(sim.run(), config.pattern, 1.0, config.horizon);
        return analyzer.query_accuracy(DetectorId{kCluster, 0}, kP);
    };
    const double coarse = accuracy_at(2.0);
    const double medium = accuracy_at(1.0);
    const double fine = accuracy_at(0.5);
    const double finest = accuracy_at(0.25);
    const double delta_coarse = std::fabs(medium - coarse);
    const double delta_fine = std::fabs(finest - fine);
    CHECK(delta_fine <= delta_coarse + 1e-9);
}

TEST_CASE("report aggregates summarize the pair rows") {
    auto trace = step_trace({{10, 12}, {50, 53}}, 100);
    QosAnalyzer analyzer(trace, all_correct(), 1.0, 100);
    const auto report = analyzer.report();
    REQUIRE(report.rows.size() == 1);
    CHECK(report.mistake_duration.count == 2);
    CHECK(report.mistake_duration.mean == doctest::Approx(2.5));
    CHECK(report.mistake_duration.min == doctest::Approx(2.0));
    CHECK(report.mistake_duration.max == doctest::Approx(3.0));
    CHECK(report.query_accuracy.count == 1);
    CHECK(report.good_period.count == 3);
    const auto csv = report.to_csv();
    CHECK(csv.find("m/d0,m/p0,0") != std::string::npos);
}

}  // TEST_SUITE
