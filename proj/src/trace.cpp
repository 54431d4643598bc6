#include "fdsim/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fdsim/rng.hpp"
#include "json.hpp"

namespace fdsim {

using nlohmann::json;

void Trace::add(SimTime time, std::string kind, std::string actor, std::string subject,
                double value, std::string detail) {
    records.push_back(TraceRecord{time, std::move(kind), std::move(actor),
                                  std::move(subject), value, std::move(detail)});
}

namespace {

void append_escaped(std::string& out, const std::string& text) {
    for (unsigned char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += static_cast<char>(c);
        } else if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
        } else {
            out += static_cast<char>(c);
        }
    }
}

// Hand-rolled writer: traces run to millions of records and this is the
// serialization hot path. Field order matches nlohmann's alphabetical dump.
void append_record(std::string& out, const TraceRecord& rec) {
    out += "{\"actor\":\"";
    append_escaped(out, rec.actor);
    out += "\",\"detail\":\"";
    append_escaped(out, rec.detail);
    out += "\",\"kind\":\"";
    append_escaped(out, rec.kind);
    out += "\",\"subject\":\"";
    append_escaped(out, rec.subject);
    out += "\",\"t\":";
    out += num_str(rec.time);
    out += ",\"value\":";
    out += num_str(rec.value);
    out += "}\n";
}

}  // namespace

std::string Trace::to_jsonl() const {
    std::string out;
    out.reserve(records.size() * 96);
    for (const auto& rec : records) {
        append_record(out, rec);
    }
    return out;
}

Trace Trace::from_jsonl(std::istream& in) {
    Trace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json j = json::parse(line);
        trace.records.push_back(TraceRecord{
            j.at("t").get<double>(), j.at("kind").get<std::string>(),
            j.at("actor").get<std::string>(), j.at("subject").get<std::string>(),
            j.at("value").get<double>(), j.at("detail").get<std::string>()});
    }
    return trace;
}

std::uint64_t Trace::content_hash() const {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    std::string line;
    for (const auto& rec : records) {
        line.clear();
        append_record(line, rec);
        hash = fnv1a64(line, hash);
    }
    return hash;
}

std::string Trace::cluster_of(const std::string& id) {
    const auto slash = id.find('/');
    return slash == std::string::npos ? id : id.substr(0, slash);
}

std::string Trace::detail_field(const std::string& detail, const std::string& key) {
    const std::string token = key + "=";
    std::size_t pos = 0;
    while (pos < detail.size()) {
        const auto end = detail.find(' ', pos);
        const auto part = detail.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (part.rfind(token, 0) == 0) {
            return part.substr(token.size());
        }
        if (end == std::string::npos) {
            break;
        }
        pos = end + 1;
    }
    return {};
}

void write_trace_file(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open trace file for writing: " + path);
    }
    std::string line;
    for (const auto& rec : trace.records) {
        line.clear();
        append_record(line, rec);
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open trace file: " + path);
    }
    return Trace::from_jsonl(in);
}

std::string num_str(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace fdsim
