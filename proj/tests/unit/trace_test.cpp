#include <gtest/gtest.h>

#include <filesystem>

#include "aiora/trace.hpp"
#include "support/expect_error.hpp"

using namespace aiora;
using nlohmann::json;

namespace {

json kpi(double power, double carbon, double latency, int ready) {
  return {{"segments", {{"s", {{"power_w", power}, {"carbon_g_per_h", carbon}}}}},
          {"apps", {{"x", {{"latency_ms", latency}, {"ready_instances", ready}}}}}};
}

TraceLog sample() {
  TraceLog log;
  log.append(0, "meta", {{"tick_seconds", 60.0}, {"seed", 1}});
  log.append(0, "proposal", {{"id", "0:l"}});
  log.append(0, "conflict_report", {{"conflicts", json::array({1, 2})}});
  log.append(0, "decision", {{"accepted", json::array()}, {"deferred", json::array({"0:m"})}});
  log.append(0, "actuation", {{"action", {{"kind", "Migrate"}}}, {"status", "applied"}});
  log.append(0, "actuation", {{"action", {{"kind", "ScaleUp"}}}, {"status", "rejected"}});
  log.append(0, "kpi", kpi(100, 360, 10, 1));
  log.append(1, "decision", {{"deferred", json::array()}});
  log.append(1, "kpi", kpi(200, 720, 30, 0));
  log.append(2, "kpi", kpi(100, 0, 20, 1));
  return log;
}

}  // namespace

TEST(Trace, SequenceNumbersIncrease) {
  auto log = sample();
  for (std::size_t i = 1; i < log.size(); ++i) EXPECT_GT(log.records()[i].seq, log.records()[i - 1].seq);
}

TEST(Trace, JsonLinesRoundTrip) {
  const auto log = sample();
  const auto text = to_jsonl(log.records());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(log.size()));
  const auto back = parse_trace(text);
  EXPECT_EQ(to_jsonl(back), text);
  EXPECT_EQ(trace_hash(back), trace_hash(log.records()));
}

TEST(Trace, HashSeesEveryByte) {
  auto a = sample().records();
  auto b = a;
  b.back().payload["apps"]["x"]["latency_ms"] = 20.000001;
  EXPECT_NE(trace_hash(a), trace_hash(b));
}

TEST(Trace, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "aiora_trace_test.jsonl";
  const auto log = sample();
  write_trace(path, log.records());
  EXPECT_EQ(to_jsonl(read_trace(path)), to_jsonl(log.records()));
  std::filesystem::remove(path);
  EXPECT_AIORA_ERROR(write_trace("/nonexistent/dir/t.jsonl", log.records()), ErrorCode::IoError);
  EXPECT_AIORA_ERROR(read_trace("/nonexistent/dir/t.jsonl"), ErrorCode::MalformedTrace);
}

TEST(Trace, MalformedLinesRejected) {
  EXPECT_AIORA_ERROR(parse_trace("{\"seq\":1}\n"), ErrorCode::MalformedTrace);
  EXPECT_AIORA_ERROR(parse_trace("not json\n"), ErrorCode::MalformedTrace);
  EXPECT_AIORA_ERROR(parse_trace("{\"seq\":1,\"tick\":0,\"kind\":\"meta\",\"payload\":{},\"x\":1}\n"),
                     ErrorCode::MalformedTrace);
}

TEST(Summarize, AggregatesByHand) {
  const auto m = summarize(sample().records());
  EXPECT_EQ(m.ticks, 3);
  // 60 s ticks: (100 + 200 + 100) W * 60 s.
  EXPECT_DOUBLE_EQ(m.energy_j, 400.0 * 60);
  EXPECT_DOUBLE_EQ(m.energy_wh, 400.0 * 60 / 3600);
  // (360 + 720) g/h over one minute each.
  EXPECT_DOUBLE_EQ(m.carbon_g, 1080.0 / 60);
  EXPECT_EQ(m.apps.at("x").downtime_ticks, 1);
  EXPECT_DOUBLE_EQ(m.apps.at("x").latency_p50, 20);
  EXPECT_DOUBLE_EQ(m.apps.at("x").latency_p95, 30);
  EXPECT_DOUBLE_EQ(m.apps.at("x").latency_max, 30);
  EXPECT_EQ(m.proposals, 1);
  EXPECT_EQ(m.conflicts, 2);
  EXPECT_EQ(m.deferred, 1);
  EXPECT_EQ(m.rounds_with_deferral, 1);
  EXPECT_EQ(m.actuations_total, 2);
  EXPECT_EQ(m.actuation_failures, 1);
  EXPECT_EQ(m.actuations.at("Migrate"), 1);
  const json j = m;
  EXPECT_EQ(j.at("actuations").at("failed"), 1);
  EXPECT_EQ(j.at("apps").at("x").at("downtime_ticks"), 1);
}

TEST(Summarize, RejectsBrokenTraces) {
  EXPECT_AIORA_ERROR(summarize({}), ErrorCode::MalformedTrace);
  auto recs = sample().records();
  auto no_meta = std::vector<TraceRecord>(recs.begin() + 1, recs.end());
  EXPECT_AIORA_ERROR(summarize(no_meta), ErrorCode::MalformedTrace);
  auto bad_kind = recs;
  bad_kind[1].kind = "gossip";
  EXPECT_AIORA_ERROR(summarize(bad_kind), ErrorCode::MalformedTrace);
  auto regress = recs;
  regress.back().tick = 0;
  EXPECT_AIORA_ERROR(summarize(regress), ErrorCode::MalformedTrace);
  auto dup = recs;
  dup[2].seq = dup[1].seq;
  EXPECT_AIORA_ERROR(summarize(dup), ErrorCode::MalformedTrace);
  auto incomplete = recs;
  incomplete[6].payload.erase("apps");
  EXPECT_AIORA_ERROR(summarize(incomplete), ErrorCode::MalformedTrace);
}
