#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "fdsim/scenario.hpp"

namespace fdsim {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct RunOptions {
    std::string output_dir;
    std::optional<std::uint64_t> seed;  // overrides the scenario seed
    bool no_gossip = false;
    std::optional<double> cadence;      // overrides the sampling cadence
};

// Parses and cross-checks a scenario; prints every diagnostic.
int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

// Runs a scenario and writes trace.jsonl, qos_report.txt, qos_report.csv and
// summary.json into the output directory.
int cmd_run(const std::string& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err);

// Side-by-side metric deltas of two run summaries over the same scenario
// shape (e.g., gossip on vs off).
int cmd_compare(const std::string& summary_a, const std::string& summary_b, std::ostream& out,
                std::ostream& err);

// Post-hoc suspicion lookup against a trace: nearest sample for the pair at
// the requested time, plus the binary verdict at the report threshold.
int cmd_query(const std::string& trace_path, const std::string& detector,
              const std::string& subject, double time, std::ostream& out, std::ostream& err);

// Applies CLI overrides to a loaded scenario.
void apply_overrides(ScenarioConfig& config, const RunOptions& options);

}  // namespace fdsim
