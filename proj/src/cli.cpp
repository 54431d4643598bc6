#include "fdsim/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fdsim/gossip.hpp"
#include "fdsim/metrics.hpp"
#include "fdsim/simnet.hpp"
#include "json.hpp"

namespace fdsim {

namespace fs = std::filesystem;
using nlohmann::json;

void apply_overrides(ScenarioConfig& config, const RunOptions& options) {
    if (options.seed) {
        config.seed = *options.seed;
    }
    if (options.no_gossip) {
        config.gossip_enabled = false;
    }
    if (options.cadence) {
        config.sampling_cadence = *options.cadence;
    }
}

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
    const auto result = load_scenario_file(config_path);
    if (!result.ok()) {
        for (const auto& msg : result.errors) {
            err << "error: " << msg << "\n";
        }
        return kExitValidation;
    }
    const auto& config = *result.config;
    out << "ok: " << config.clusters.size() << " cluster(s), "
        << config.topology.all_processes().size() << " process(es), "
        << config.topology.all_detectors().size() << " detector(s), horizon "
        << num_str(config.horizon) << "\n";
    return kExitOk;
}

namespace {

json aggregate_json(const MetricAggregate& agg) {
    return {{"count", agg.count}, {"mean", agg.mean}, {"min", agg.min}, {"max", agg.max}};
}

std::string hash_hex(std::uint64_t hash) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

}  // namespace

int cmd_run(const std::string& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
    auto result = load_scenario_file(config_path);
    if (!result.ok()) {
        for (const auto& msg : result.errors) {
            err << "error: " << msg << "\n";
        }
        return kExitValidation;
    }
    ScenarioConfig config = std::move(*result.config);
    apply_overrides(config, options);

    std::error_code ec;
    fs::create_directories(options.output_dir, ec);
    if (ec || !fs::is_directory(options.output_dir)) {
        err << "error: cannot create output directory '" << options.output_dir << "'\n";
        return kExitRuntime;
    }

    try {
        Simulator sim(config);
        const Trace& trace = sim.run();
        QosAnalyzer analyzer(trace, config.pattern, config.effective_report_threshold(),
                             config.horizon);
        const QosReport report = analyzer.report();

        const fs::path dir(options.output_dir);
        write_trace_file(trace, (dir / "trace.jsonl").string());
        {
            std::ofstream txt(dir / "qos_report.txt");
            txt << report.to_text();
        }
        {
            std::ofstream csv(dir / "qos_report.csv");
            csv << report.to_csv();
        }

        std::size_t sent = 0;
        std::size_t delivered = 0;
        std::size_t dropped = 0;
        for (const auto& [link, stats] : sim.link_stats()) {
            sent += stats.sent;
            delivered += stats.delivered;
            dropped += stats.dropped;
        }
        const std::size_t detectors = config.topology.all_detectors().size();
        const std::size_t gossip_ops = gossip_op_count(trace);

        json summary;
        summary["scenario"] = fs::path(config_path).filename().string();
        summary["shape"] = hash_hex(config.shape_hash());
        summary["seed"] = config.seed;
        summary["horizon"] = config.horizon;
        summary["gossip"] = config.gossip_enabled;
        summary["cadence"] = config.sampling_cadence;
        summary["report_threshold"] = config.effective_report_threshold();
        summary["trace_hash"] = hash_hex(trace.content_hash());
        summary["metrics"] = {
            {"detection_time", aggregate_json(report.detection_time)},
            {"undetected_pairs", report.undetected_pairs},
            {"mistake_recurrence", aggregate_json(report.mistake_recurrence)},
            {"mistake_duration", aggregate_json(report.mistake_duration)},
            {"good_period", aggregate_json(report.good_period)},
            {"mistake_rate", aggregate_json(report.mistake_rate)},
            {"query_accuracy", aggregate_json(report.query_accuracy)},
        };
        summary["diamond_p"] = {
            {"strong_completeness", report.diamond_p.strong_completeness},
            {"completeness_violations", report.diamond_p.completeness_violations},
            {"eventual_strong_accuracy", report.diamond_p.eventual_strong_accuracy},
        };
        if (report.diamond_p.stabilization_time) {
            summary["diamond_p"]["stabilization_time"] = *report.diamond_p.stabilization_time;
        }
        summary["messages"] = {
            {"sent", sent},
            {"delivered", delivered},
            {"dropped", dropped},
            {"inter_cluster", inter_cluster_traffic_count(trace)},
            {"gossip_ops", gossip_ops},
            {"per_detector_gossip_rate",
             detectors > 0 ? static_cast<double>(gossip_ops) /
                                 (static_cast<double>(detectors) * config.horizon)
                           : 0.0},
        };
        json queries = json::array();
        for (const auto& rec : trace.records) {
            if (rec.kind == "query_result") {
                queries.push_back({{"request", Trace::detail_field(rec.detail, "request")},
                                   {"origin", rec.actor},
                                   {"subject", rec.subject},
                                   {"outcome", Trace::detail_field(rec.detail, "outcome")},
                                   {"value", rec.value},
                                   {"time", rec.time}});
            }
        }
        summary["queries"] = queries;
        {
            std::ofstream sj(dir / "summary.json");
            sj << summary.dump(2) << "\n";
        }

        out << "run complete: " << trace.records.size() << " trace records, trace_hash "
            << hash_hex(trace.content_hash()) << "\n";
        out << report.to_text();
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return json::parse(in);
}

void compare_metric(std::ostream& out, const char* name, const json& a, const json& b,
                    bool lower_is_better) {
    const double mean_a = a.at("mean").get<double>();
    const double mean_b = b.at("mean").get<double>();
    const double delta = mean_b - mean_a;
    out << "  " << std::left << std::setw(20) << name << " a=" << num_str(mean_a)
        << " b=" << num_str(mean_b) << " delta=" << num_str(delta);
    if (delta != 0) {
        const bool improved = lower_is_better ? delta < 0 : delta > 0;
        out << (improved ? "  [b improves]" : "  [b regresses]");
    }
    out << "\n";
}

}  // namespace

int cmd_compare(const std::string& summary_a, const std::string& summary_b, std::ostream& out,
                std::ostream& err) {
    try {
        const json a = load_json_file(summary_a);
        const json b = load_json_file(summary_b);
        if (a.at("shape") != b.at("shape")) {
            err << "error: scenario shapes differ (" << a.at("shape").get<std::string>() << " vs "
                << b.at("shape").get<std::string>() << ")\n";
            return kExitValidation;
        }
        out << "comparing a=" << summary_a << " (gossip=" << a.at("gossip") << ", seed="
            << a.at("seed") << ")\n          b=" << summary_b << " (gossip=" << b.at("gossip")
            << ", seed=" << b.at("seed") << ")\n";
        const auto& ma = a.at("metrics");
        const auto& mb = b.at("metrics");
        compare_metric(out, "detection_time", ma.at("detection_time"), mb.at("detection_time"),
                       true);
        compare_metric(out, "mistake_duration", ma.at("mistake_duration"),
                       mb.at("mistake_duration"), true);
        compare_metric(out, "mistake_rate", ma.at("mistake_rate"), mb.at("mistake_rate"), true);
        compare_metric(out, "query_accuracy", ma.at("query_accuracy"), mb.at("query_accuracy"),
                       false);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_query(const std::string& trace_path, const std::string& detector,
              const std::string& subject, double time, std::ostream& out, std::ostream& err) {
    try {
        const Trace trace = read_trace_file(trace_path);
        if (trace.records.empty() || trace.records.front().kind != "meta") {
            err << "error: trace has no meta record\n";
            return kExitRuntime;
        }
        const auto& meta = trace.records.front().detail;
        const double horizon = std::stod(Trace::detail_field(meta, "horizon"));
        const double tv = std::stod(Trace::detail_field(meta, "tv"));
        if (time < 0 || time > horizon) {
            err << "error: time " << num_str(time) << " outside horizon [0, " << num_str(horizon)
                << "]\n";
            return kExitValidation;
        }
        if (!parse_detector_id(detector)) {
            err << "error: malformed detector id '" << detector << "'\n";
            return kExitValidation;
        }
        if (!parse_process_id(subject)) {
            err << "error: malformed process id '" << subject << "'\n";
            return kExitValidation;
        }
        const TraceRecord* best = nullptr;
        bool pair_seen = false;
        for (const auto& rec : trace.records) {
            if (rec.kind != "sample" || rec.actor != detector || rec.subject != subject) {
                continue;
            }
            pair_seen = true;
            if (best == nullptr ||
                std::fabs(rec.time - time) < std::fabs(best->time - time)) {
                best = &rec;
            }
        }
        if (!pair_seen) {
            err << "error: no samples for detector '" << detector << "' and subject '" << subject
                << "' in this trace\n";
            return kExitValidation;
        }
        const bool suspected = best->value >= tv;
        out << detector << " -> " << subject << " at t=" << num_str(best->time)
            << ": suspicion=" << num_str(best->value) << " ("
            << (suspected ? "suspected" : "trusted") << " at threshold " << num_str(tv) << ")\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace fdsim
