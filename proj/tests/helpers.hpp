#pragma once

#include <stdexcept>
#include <string>

#include "fdsim/scenario.hpp"
#include "fdsim/simnet.hpp"

namespace fdsim::test {

inline ScenarioConfig parse_or_fail(const std::string& json_text) {
    auto result = parse_scenario(json_text);
    if (!result.ok()) {
        std::string all = "scenario invalid:";
        for (const auto& e : result.errors) {
            all += "\n  " + e;
        }
        throw std::runtime_error(all);
    }
    return std::move(*result.config);
}

inline ScenarioConfig load_or_fail(const std::string& name) {
    auto result = load_scenario_file(std::string(FDSIM_SCENARIO_DIR) + "/" + name);
    if (!result.ok()) {
        std::string all = "scenario invalid:";
        for (const auto& e : result.errors) {
            all += "\n  " + e;
        }
        throw std::runtime_error(all);
    }
    return std::move(*result.config);
}

inline std::size_t count_kind(const Trace& trace, const std::string& kind) {
    std::size_t n = 0;
    for (const auto& rec : trace.records) {
        if (rec.kind == kind) {
            ++n;
        }
    }
    return n;
}

}  // namespace fdsim::test
