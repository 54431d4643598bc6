#include <algorithm>

#include "doctest.h"
#include "fdsim/scenario.hpp"
#include "helpers.hpp"

using namespace fdsim;
using fdsim::test::parse_or_fail;

namespace {

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
    return std::any_of(errors.begin(), errors.end(), [&](const std::string& e) {
        return e.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal one-cluster scenario parses") {
    const auto result = parse_scenario(R"({
      "horizon": 50,
      "clusters": [{"name": "solo", "processes": 1, "detectors": 1}]
    })");
    REQUIRE(result.ok());
    const auto& config = *result.config;
    CHECK(config.topology.all_detectors().size() == 1);
    CHECK(config.monitoring.at(DetectorId{ClusterId{"solo"}, 0}).size() == 1);
    CHECK(config.clusters[0].borders == std::vector<int>{0});
    CHECK(config.pattern.universe.size() == 1);
}

TEST_CASE("syntax errors are reported as diagnostics") {
    const auto result = parse_scenario("{ not json");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "syntax error"));
}

TEST_CASE("dangling ids are named in diagnostics") {
    const auto result = parse_scenario(R"({
      "horizon": 50,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}],
      "faults": [{"kind": "crash", "process": "a/p7", "time": 10}]
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "a/p7"));
}

TEST_CASE("loss probability outside [0,1] is a range diagnostic") {
    const auto result = parse_scenario(R"({
      "horizon": 50,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}],
      "links": {"default": {"delay": 0.05, "jitter": 0.0, "loss": 1.5}}
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "loss_probability"));
    CHECK(mentions(result.errors, "1.5"));
}

TEST_CASE("crash followed by a transient on the same process contradicts") {
    const auto result = parse_scenario(R"({
      "horizon": 100,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}],
      "faults": [
        {"kind": "crash", "process": "a/p0", "time": 30},
        {"kind": "transient", "process": "a/p0", "start": 40, "end": 50}
      ]
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "contradictory"));
}

TEST_CASE("overlapping transient intervals are rejected") {
    const auto result = parse_scenario(R"({
      "horizon": 100,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}],
      "faults": [
        {"kind": "transient", "process": "a/p0", "start": 10, "end": 30},
        {"kind": "transient", "process": "a/p0", "start": 20, "end": 40}
      ]
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "overlap"));
}

TEST_CASE("empty clusters are rejected") {
    const auto result = parse_scenario(R"({
      "horizon": 50,
      "clusters": [{"name": "a", "processes": 1, "detectors": 0}]
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "empty cluster"));
}

TEST_CASE("all errors are collected, not just the first") {
    const auto result = parse_scenario(R"({
      "horizon": -5,
      "sampling_cadence": 0,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}],
      "faults": [{"kind": "crash", "process": "a/p9", "time": 10}]
    })");
    CHECK_FALSE(result.ok());
    CHECK(result.errors.size() >= 3);
}

TEST_CASE("same-cluster scripted queries are rejected") {
    const auto result = parse_scenario(R"({
      "horizon": 50,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}],
      "queries": [{"time": 10, "origin": "a/d0", "subject": "a/p0"}]
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "different cluster"));
}

TEST_CASE("query deadlines must fit inside the horizon") {
    const auto result = parse_scenario(R"({
      "horizon": 50,
      "detector_params": {"heartbeat_period": 1.0},
      "clusters": [
        {"name": "a", "processes": 1, "detectors": 1},
        {"name": "b", "processes": 1, "detectors": 1}
      ],
      "queries": [{"time": 45, "origin": "a/d0", "subject": "b/p0"}]
    })");
    CHECK_FALSE(result.ok());
    CHECK(mentions(result.errors, "deadline"));
}

TEST_CASE("ring monitoring expands to wrapped subsets") {
    const auto config = parse_or_fail(R"({
      "horizon": 50,
      "clusters": [{"name": "a", "processes": 4, "detectors": 4,
                    "monitoring": {"mode": "ring", "arity": 2}}]
    })");
    const ClusterId a{"a"};
    CHECK(config.monitoring.at(DetectorId{a, 0}) ==
          std::vector<ProcessId>{ProcessId{a, 0}, ProcessId{a, 1}});
    CHECK(config.monitoring.at(DetectorId{a, 3}) ==
          std::vector<ProcessId>{ProcessId{a, 0}, ProcessId{a, 3}});
}

TEST_CASE("per-cluster parameter overrides derive freeze and ttl from the period") {
    const auto config = parse_or_fail(R"({
      "horizon": 50,
      "detector_params": {"heartbeat_period": 1.0},
      "clusters": [
        {"name": "fast", "processes": 1, "detectors": 1},
        {"name": "slow", "processes": 1, "detectors": 1,
         "detector_params": {"heartbeat_period": 3.0}}
      ]
    })");
    const auto& slow = config.params_for(DetectorId{ClusterId{"slow"}, 0});
    CHECK(slow.heartbeat_period == doctest::Approx(3.0));
    CHECK(slow.freeze_timeout == doctest::Approx(6.0));
    CHECK(slow.remote_value_ttl == doctest::Approx(12.0));
    const auto& fast = config.params_for(DetectorId{ClusterId{"fast"}, 0});
    CHECK(fast.freeze_timeout == doctest::Approx(2.0));
}

TEST_CASE("serialize then parse round-trips to an equivalent config") {
    const auto config = parse_or_fail(R"({
      "horizon": 80,
      "seed": 77,
      "sampling_cadence": 0.5,
      "gossip": false,
      "heartbeat_phase": "zero",
      "detector_params": {"heartbeat_period": 2.0, "predictor": "wma",
                          "contribution_cap": "none"},
      "clusters": [
        {"name": "a", "processes": 2, "detectors": 2,
         "monitoring": {"mode": "subsets", "subsets": {"0": [0, 1], "1": [1]}}},
        {"name": "b", "processes": 1, "detectors": 1}
      ],
      "links": {"default": {"delay": 0.1, "jitter": 0.02, "loss": 0.05},
                 "overrides": [{"from": "a/p0", "to": "a/d1", "delay": 0.3}]},
      "faults": [
        {"kind": "crash", "process": "a/p0", "time": 30},
        {"kind": "transient", "process": "a/p1", "start": 10, "end": 20},
        {"kind": "link_down", "a": "a/d0", "b": "a/p0", "start": 5},
        {"kind": "partition", "groups": [["a/d0"], ["a/d1"]], "start": 40, "end": 50}
      ],
      "queries": [{"time": 25, "origin": "b/d0", "subject": "a/p1"}]
    })");
    const auto serialized = serialize_scenario(config);
    const auto reparsed = parse_or_fail(serialized);
    CHECK(serialize_scenario(reparsed) == serialized);
    CHECK(reparsed.horizon == config.horizon);
    CHECK(reparsed.seed == config.seed);
    CHECK(reparsed.gossip_enabled == config.gossip_enabled);
    CHECK(reparsed.clusters == config.clusters);
    CHECK(reparsed.faults == config.faults);
    CHECK(reparsed.queries == config.queries);
    CHECK(reparsed.link_overrides == config.link_overrides);
    CHECK(reparsed.monitoring == config.monitoring);
    CHECK(reparsed.shape_hash() == config.shape_hash());
}

TEST_CASE("shape hash ignores seed and gossip flag") {
    auto config = parse_or_fail(R"({
      "horizon": 50,
      "seed": 1,
      "clusters": [{"name": "a", "processes": 1, "detectors": 1}]
    })");
    auto other = config;
    other.seed = 999;
    other.gossip_enabled = false;
    CHECK(config.shape_hash() == other.shape_hash());
    other.horizon = 60;
    CHECK(config.shape_hash() != other.shape_hash());
}

}  // TEST_SUITE
