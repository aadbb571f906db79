#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace aiora {

// Record kinds: meta, lifecycle, proposal, conflict_report, decision,
// actuation, telemetry, snapshot, kpi, error.
struct TraceRecord {
  std::uint64_t seq = 0;
  std::int64_t tick = 0;
  std::string kind;
  nlohmann::json payload;
};

void to_json(nlohmann::json& j, const TraceRecord& r);
void from_json(const nlohmann::json& j, TraceRecord& r);

// Append-only log with strictly increasing sequence numbers.
class TraceLog {
 public:
  const TraceRecord& append(std::int64_t tick, std::string kind, nlohmann::json payload);
  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<TraceRecord> records_;
};

// One compact JSON object per line.
std::string to_jsonl(const std::vector<TraceRecord>& records);
void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records);
// Throws MalformedTrace.
std::vector<TraceRecord> parse_trace(const std::string& jsonl);
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

// FNV-1a 64 over the JSON-lines rendering.
std::uint64_t trace_hash(const std::vector<TraceRecord>& records);

struct AppMetrics {
  double latency_p50 = 0.0;
  double latency_p95 = 0.0;
  double latency_p99 = 0.0;
  double latency_max = 0.0;
  std::int64_t downtime_ticks = 0;
};

struct MetricsSummary {
  std::int64_t ticks = 0;
  double energy_j = 0.0;
  double energy_wh = 0.0;
  double carbon_g = 0.0;
  std::map<std::string, AppMetrics> apps;
  std::map<std::string, std::int64_t> actuations;  // by action kind
  std::int64_t actuations_total = 0;
  std::int64_t actuation_failures = 0;
  std::int64_t proposals = 0;
  std::int64_t conflicts = 0;
  std::int64_t deferred = 0;
  std::int64_t rounds_with_deferral = 0;
};

void to_json(nlohmann::json& j, const MetricsSummary& m);

// Pure aggregation over a trace. Throws MalformedTrace.
MetricsSummary summarize(const std::vector<TraceRecord>& trace);

}  // namespace aiora
