#include "aiora/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "aiora/error.hpp"

namespace aiora {

using nlohmann::json;

void to_json(json& j, const TraceRecord& r) {
  j = {{"seq", r.seq}, {"tick", r.tick}, {"kind", r.kind}, {"payload", r.payload}};
}

void from_json(const json& j, TraceRecord& r) {
  if (!j.is_object() || j.size() != 4 || !j.contains("seq") || !j.contains("tick") ||
      !j.contains("kind") || !j.contains("payload"))
    throw Error(ErrorCode::MalformedTrace, "trace record needs exactly seq, tick, kind, payload");
  try {
    r.seq = j.at("seq").get<std::uint64_t>();
    r.tick = j.at("tick").get<std::int64_t>();
    r.kind = j.at("kind").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedTrace, std::string("trace record: ") + e.what());
  }
  r.payload = j.at("payload");
}

const TraceRecord& TraceLog::append(std::int64_t tick, std::string kind, json payload) {
  records_.push_back({records_.size(), tick, std::move(kind), std::move(payload)});
  return records_.back();
}

std::string to_jsonl(const std::vector<TraceRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += json(r).dump();
    out += '\n';
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << to_jsonl(records);
}

std::vector<TraceRecord> parse_trace(const std::string& jsonl) {
  std::vector<TraceRecord> out;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line).get<TraceRecord>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::MalformedTrace, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_trace(ss.str());
}

std::uint64_t trace_hash(const std::vector<TraceRecord>& records) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_jsonl(records)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

// Nearest-rank percentile of a sorted sample.
double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

double number(const json& j, const char* key, const TraceRecord& r) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::MalformedTrace,
                "record " + std::to_string(r.seq) + " (" + r.kind + ") lacks numeric " + key);
  return j.at(key).get<double>();
}

}  // namespace

MetricsSummary summarize(const std::vector<TraceRecord>& trace) {
  static const std::set<std::string> kinds{"meta",     "lifecycle", "proposal",  "conflict_report",
                                           "decision", "actuation", "telemetry", "snapshot",
                                           "kpi",      "error"};
  if (trace.empty() || trace.front().kind != "meta")
    throw Error(ErrorCode::MalformedTrace, "trace must start with a meta record");
  const double tick_seconds = number(trace.front().payload, "tick_seconds", trace.front());
  if (!(tick_seconds > 0.0)) throw Error(ErrorCode::MalformedTrace, "tick_seconds must be positive");

  MetricsSummary m;
  std::map<std::string, std::vector<double>> latencies;
  std::optional<std::uint64_t> prev_seq;
  std::int64_t prev_tick = std::numeric_limits<std::int64_t>::min();
  for (const auto& r : trace) {
    if (prev_seq && r.seq <= *prev_seq)
      throw Error(ErrorCode::MalformedTrace, "sequence numbers must increase at " + std::to_string(r.seq));
    if (r.tick < prev_tick)
      throw Error(ErrorCode::MalformedTrace, "ticks regress at record " + std::to_string(r.seq));
    prev_seq = r.seq;
    prev_tick = r.tick;
    if (!kinds.count(r.kind)) throw Error(ErrorCode::MalformedTrace, "unknown record kind " + r.kind);

    if (r.kind == "kpi") {
      ++m.ticks;
      if (!r.payload.contains("segments") || !r.payload.contains("apps"))
        throw Error(ErrorCode::MalformedTrace, "kpi record " + std::to_string(r.seq) + " is incomplete");
      for (const auto& [id, s] : r.payload.at("segments").items()) {
        m.energy_j += number(s, "power_w", r) * tick_seconds;
        m.carbon_g += number(s, "carbon_g_per_h", r) * tick_seconds / 3600.0;
      }
      for (const auto& [id, a] : r.payload.at("apps").items()) {
        latencies[id].push_back(number(a, "latency_ms", r));
        auto& am = m.apps[id];
        if (number(a, "ready_instances", r) < 1.0) ++am.downtime_ticks;
      }
    } else if (r.kind == "proposal") {
      ++m.proposals;
    } else if (r.kind == "conflict_report") {
      if (!r.payload.contains("conflicts") || !r.payload.at("conflicts").is_array())
        throw Error(ErrorCode::MalformedTrace, "conflict report " + std::to_string(r.seq) + " lacks conflicts");
      m.conflicts += static_cast<std::int64_t>(r.payload.at("conflicts").size());
    } else if (r.kind == "decision") {
      if (!r.payload.contains("deferred") || !r.payload.at("deferred").is_array())
        throw Error(ErrorCode::MalformedTrace, "decision " + std::to_string(r.seq) + " lacks deferred");
      const auto n = static_cast<std::int64_t>(r.payload.at("deferred").size());
      m.deferred += n;
      if (n > 0) ++m.rounds_with_deferral;
    } else if (r.kind == "actuation") {
      if (!r.payload.contains("action") || !r.payload.contains("status"))
        throw Error(ErrorCode::MalformedTrace, "actuation " + std::to_string(r.seq) + " is incomplete");
      ++m.actuations_total;
      ++m.actuations[r.payload.at("action").at("kind").get<std::string>()];
      if (r.payload.at("status") != "applied") ++m.actuation_failures;
    }
  }
  m.energy_wh = m.energy_j / 3600.0;
  for (auto& [id, v] : latencies) {
    std::sort(v.begin(), v.end());
    auto& am = m.apps[id];
    am.latency_p50 = percentile(v, 50);
    am.latency_p95 = percentile(v, 95);
    am.latency_p99 = percentile(v, 99);
    am.latency_max = v.back();
  }
  return m;
}

void to_json(json& j, const MetricsSummary& m) {
  json apps = json::object();
  for (const auto& [id, a] : m.apps)
    apps[id] = {{"latency_p50_ms", a.latency_p50},
                {"latency_p95_ms", a.latency_p95},
                {"latency_p99_ms", a.latency_p99},
                {"latency_max_ms", a.latency_max},
                {"downtime_ticks", a.downtime_ticks}};
  j = {{"ticks", m.ticks},
       {"energy_j", m.energy_j},
       {"energy_wh", m.energy_wh},
       {"carbon_g", m.carbon_g},
       {"apps", apps},
       {"actuations", {{"total", m.actuations_total}, {"by_kind", m.actuations}, {"failed", m.actuation_failures}}},
       {"proposals", m.proposals},
       {"conflicts", m.conflicts},
       {"deferred", m.deferred},
       {"rounds_with_deferral", m.rounds_with_deferral}};
}

}  // namespace aiora
