#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdsim/core.hpp"

namespace fdsim {

// One audit-trail entry. `kind` is a small closed vocabulary (see trace.cpp);
// `detail` carries kind-specific "key=value" fields.
struct TraceRecord {
    SimTime time = 0;
    std::string kind;
    std::string actor;
    std::string subject;
    double value = 0;
    std::string detail;

    bool operator==(const TraceRecord&) const = default;
};

struct Trace {
    std::vector<TraceRecord> records;

    void add(SimTime time, std::string kind, std::string actor, std::string subject,
             double value = 0, std::string detail = {});

    // One JSON object per line; the first line is the "meta" record.
    std::string to_jsonl() const;
    static Trace from_jsonl(std::istream& in);

    std::uint64_t content_hash() const;

    // Cluster name prefix of an actor/subject string ("alpha/d0" -> "alpha").
    static std::string cluster_of(const std::string& id);

    // Value of a "key=value" token inside a detail string, or empty.
    static std::string detail_field(const std::string& detail, const std::string& key);
};

void write_trace_file(const Trace& trace, const std::string& path);
Trace read_trace_file(const std::string& path);

// Shortest round-trip decimal form of v; stable across platforms, so detail
// strings never perturb trace hashes.
std::string num_str(double v);

}  // namespace fdsim
