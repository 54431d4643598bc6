#include "doctest.h"
#include "fdsim/core.hpp"
#include "fdsim/rng.hpp"

using namespace fdsim;

namespace {

ProcessId proc(const char* cluster, int i) {
    return ProcessId{ClusterId{cluster}, i};
}

FailurePattern three_process_pattern() {
    FailurePattern pattern;
    for (int i = 0; i < 3; ++i) {
        pattern.universe.insert(proc("a", i));
    }
    return pattern;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("correct_set with empty failure pattern returns everything") {
    const auto pattern = three_process_pattern();
    CHECK(correct_set(pattern, 0.0) == pattern.universe);
    CHECK(correct_set(pattern, 1000.0) == pattern.universe);
}

TEST_CASE("a process with a crash time is faulty even before it crashes") {
    auto pattern = three_process_pattern();
    pattern.crash_times[proc("a", 1)] = 100.0;
    const auto correct = correct_set(pattern, 50.0);
    CHECK(correct.count(proc("a", 1)) == 0);
    CHECK(correct.size() == 2);
}

TEST_CASE("transient intervals do not make a process faulty") {
    auto pattern = three_process_pattern();
    pattern.transient_intervals[proc("a", 0)] = {{10.0, 20.0}};
    CHECK(correct_set(pattern, 15.0) == pattern.universe);
    CHECK(pattern.silent_at(proc("a", 0), 15.0));
    CHECK_FALSE(pattern.silent_at(proc("a", 0), 25.0));
}

TEST_CASE("failed_at honours 'before or at time t'") {
    auto pattern = three_process_pattern();
    pattern.crash_times[proc("a", 1)] = 100.0;
    CHECK(failed_at(pattern, 99.0).empty());
    CHECK(failed_at(pattern, 100.0) == std::set<ProcessId>{proc("a", 1)});

    pattern.crash_times[proc("a", 2)] = 50.0;
    CHECK(failed_at(pattern, 75.0) == std::set<ProcessId>{proc("a", 2)});
}

TEST_CASE("failed_at is monotone and partitions the universe") {
    RandomStream rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        FailurePattern pattern;
        for (int i = 0; i < 8; ++i) {
            const auto p = proc("c", i);
            pattern.universe.insert(p);
            if (rng.next_double() < 0.5) {
                pattern.crash_times[p] = rng.uniform(0.0, 100.0);
            }
        }
        const double t1 = rng.uniform(0.0, 120.0);
        const double t2 = t1 + rng.uniform(0.0, 50.0);
        const auto f1 = failed_at(pattern, t1);
        const auto f2 = failed_at(pattern, t2);
        for (const auto& p : f1) {
            CHECK(f2.count(p) == 1);
        }
        // correct + faulty = universe, disjoint.
        const auto correct = correct_set(pattern, t1);
        CHECK(correct.size() + pattern.crash_times.size() == pattern.universe.size());
        for (const auto& [p, t] : pattern.crash_times) {
            CHECK(correct.count(p) == 0);
        }
    }
}

TEST_CASE("id parsing and formatting round-trip") {
    CHECK(proc("alpha", 3).str() == "alpha/p3");
    CHECK(DetectorId{ClusterId{"beta"}, 0}.str() == "beta/d0");
    CHECK(parse_process_id("alpha/p3") == proc("alpha", 3));
    CHECK(parse_detector_id("beta/d0") == DetectorId{ClusterId{"beta"}, 0});
    CHECK_FALSE(parse_process_id("alpha/d3").has_value());
    CHECK_FALSE(parse_process_id("alpha").has_value());
    CHECK_FALSE(parse_detector_id("/d0").has_value());
    CHECK_FALSE(parse_process_id("a/p-1").has_value());
    CHECK_FALSE(parse_process_id("a/p2x").has_value());
}

TEST_CASE("detector params range checks collect all violations") {
    DetectorParams params;
    params.window_size = 1;
    params.ema_alpha = 1.5;
    params.gossip_fanout = 0;
    std::vector<std::string> errors;
    params.validate(errors, "test");
    CHECK(errors.size() == 3);
}

}  // TEST_SUITE
