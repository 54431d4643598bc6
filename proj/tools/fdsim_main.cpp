#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fdsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fdsim: accrual + gossip failure detection in a deterministic network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("config", config_path, "scenario JSON file")->required();

    fdsim::RunOptions run_options;
    std::string run_config;
    std::uint64_t seed_value = 0;
    double cadence_value = 0;
    auto* run = app.add_subcommand("run", "simulate a scenario and write reports");
    run->add_option("config", run_config, "scenario JSON file")->required();
    run->add_option("--output", run_options.output_dir, "output directory")->required();
    auto* seed_opt = run->add_option("--seed", seed_value, "override the scenario seed");
    run->add_flag("--no-gossip", run_options.no_gossip, "disable suspicion gossip");
    auto* cadence_opt = run->add_option("--cadence", cadence_value, "override sampling cadence");

    std::string summary_a;
    std::string summary_b;
    auto* compare = app.add_subcommand("compare", "diff two run summaries of one scenario shape");
    compare->add_option("a", summary_a, "first summary.json")->required();
    compare->add_option("b", summary_b, "second summary.json")->required();

    std::string trace_path;
    std::string detector;
    std::string subject;
    double query_time = 0;
    auto* query = app.add_subcommand("query", "look up a suspicion sample in a trace");
    query->add_option("trace", trace_path, "trace.jsonl file")->required();
    query->add_option("detector", detector, "detector id, e.g. alpha/d0")->required();
    query->add_option("subject", subject, "process id, e.g. alpha/p0")->required();
    query->add_option("time", query_time, "query time")->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        return fdsim::cmd_validate(config_path, std::cout, std::cerr);
    }
    if (run->parsed()) {
        if (seed_opt->count() > 0) {
            run_options.seed = seed_value;
        }
        if (cadence_opt->count() > 0) {
            run_options.cadence = cadence_value;
        }
        return fdsim::cmd_run(run_config, run_options, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        return fdsim::cmd_compare(summary_a, summary_b, std::cout, std::cerr);
    }
    if (query->parsed()) {
        return fdsim::cmd_query(trace_path, detector, subject, query_time, std::cout, std::cerr);
    }
    return fdsim::kExitRuntime;
}
