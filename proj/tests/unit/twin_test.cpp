#include <gtest/gtest.h>

#include "aiora/twin.hpp"
#include "support/builders.hpp"
#include "support/expect_error.hpp"

using namespace aiora;
using namespace aiora::test;

namespace {

TelemetryRecord rec(std::int64_t tick, const std::string& source, const std::string& metric,
                    double value) {
  return {tick, source, metric, value, "", Provenance::Local};
}

DeploymentView far_view() {
  DeploymentView v;
  v.continuum = "vc";
  v.user_zone = "z";
  v.components["eas"] = {"far", rv(2000), ComponentRole::EAS};
  v.components["db"] = {"far", rv(1000), ComponentRole::Generic};
  return v;
}

ActuationProposal proposal(const std::string& target, Action a) {
  ActuationProposal p;
  p.id = "p";
  p.loop_id = "l";
  p.target = target;
  p.action = std::move(a);
  return p;
}

}  // namespace

TEST(Twin, SnapshotDerivesPowerAndCarbon) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "segment/near", "cpu_utilization", 0.5)});
  auto s = twin.snapshot(1);
  EXPECT_DOUBLE_EQ(s.segments.at("near").utilization, 0.5);
  EXPECT_DOUBLE_EQ(s.segments.at("near").power_w, 200.0);
  EXPECT_DOUBLE_EQ(s.segments.at("near").carbon_g_per_h, 100.0);
  // A silent segment sits at idle draw.
  EXPECT_DOUBLE_EQ(s.segments.at("far").power_w, 200.0);
  EXPECT_DOUBLE_EQ(s.segments.at("far").carbon_g_per_h, 10.0);
}

TEST(Twin, SnapshotIsAsOfTick) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(2, "app/x", "latency_ms", 7)});
  twin.ingest({rec(5, "app/x", "latency_ms", 9)});
  EXPECT_FALSE(twin.snapshot(1).metric("app/x", "latency_ms").has_value());
  EXPECT_DOUBLE_EQ(*twin.snapshot(4).metric("app/x", "latency_ms"), 7);
  EXPECT_DOUBLE_EQ(twin.snapshot(5).apps.at("x").latency_ms, 9);
}

TEST(Twin, SameTickLastWriteWins) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(3, "app/x", "latency_ms", 1), rec(3, "app/x", "latency_ms", 2)});
  EXPECT_DOUBLE_EQ(*twin.snapshot(3).metric("app/x", "latency_ms"), 2);
}

TEST(Twin, OutOfOrderBatchRejectedWhole) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(5, "segment/near", "cpu_utilization", 0.1)});
  EXPECT_AIORA_ERROR(twin.ingest({rec(6, "segment/far", "cpu_utilization", 0.9),
                                  rec(4, "segment/near", "cpu_utilization", 0.2)}),
                     ErrorCode::OutOfOrderTelemetry);
  auto s = twin.snapshot(10);
  EXPECT_FALSE(s.metric("segment/far", "cpu_utilization").has_value());
  EXPECT_DOUBLE_EQ(s.segments.at("near").utilization, 0.1);
  // The rejected batch did not advance the source clock either.
  EXPECT_NO_THROW(twin.ingest({rec(5, "segment/far", "cpu_utilization", 0.3)}));
}

TEST(Twin, ExternalProvenanceTagged) {
  DigitalTwin twin(near_far_topology());
  twin.import_external({rec(1, "segment/far", "cpu_utilization", 0.25)});
  twin.ingest({rec(1, "segment/near", "cpu_utilization", 0.25)});
  auto s = twin.snapshot(1);
  EXPECT_EQ(s.segments.at("far").provenance, Provenance::ExternalTwin);
  EXPECT_EQ(s.segments.at("near").provenance, Provenance::Local);
  EXPECT_EQ(s.raw.at("segment/far").at("cpu_utilization").provenance, Provenance::ExternalTwin);
}

TEST(Twin, FailedSegmentDrawsNothing) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "segment/near", "status", 2), rec(1, "segment/far", "status", 1)});
  auto s = twin.snapshot(1);
  EXPECT_EQ(s.segments.at("near").status, SegmentStatus::Failed);
  EXPECT_DOUBLE_EQ(s.segments.at("near").power_w, 0.0);
  EXPECT_EQ(s.segments.at("far").status, SegmentStatus::Draining);
}

TEST(Twin, UtilizationIsClamped) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "segment/near", "cpu_utilization", 1.7), rec(1, "quota/vc/near", "utilization", -3)});
  auto s = twin.snapshot(1);
  EXPECT_DOUBLE_EQ(s.segments.at("near").utilization, 1.0);
  EXPECT_DOUBLE_EQ(s.quotas.at("quota/vc/near").utilization, 0.0);
}

TEST(TwinWhatIf, ScaleUpProjectsQuotaAndReservation) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "quota/vc/near", "utilization", 0.9), rec(1, "quota/vc/near", "quota_cpu", 1000),
               rec(1, "segment/near", "reserved_fraction", 0.25)});
  const auto before = twin.snapshot(1);
  auto after = twin.what_if(before, proposal("quota/vc/near", Action::scale_up(rv(1000))));
  EXPECT_DOUBLE_EQ(after.quotas.at("quota/vc/near").quota_cpu, 2000);
  EXPECT_DOUBLE_EQ(after.quotas.at("quota/vc/near").utilization, 0.45);
  EXPECT_DOUBLE_EQ(after.segments.at("near").reserved_fraction, 0.5);
  EXPECT_TRUE(after.saturated.empty());
  // Input untouched.
  EXPECT_DOUBLE_EQ(before.quotas.at("quota/vc/near").quota_cpu, 1000);
  EXPECT_DOUBLE_EQ(before.segments.at("near").reserved_fraction, 0.25);
}

TEST(TwinWhatIf, ScaleBeyondCapacityMarksSaturation) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "segment/near", "reserved_fraction", 0.75)});
  auto after = twin.what_if(twin.snapshot(1), proposal("quota/vc/near", Action::scale_up(rv(2000))));
  EXPECT_TRUE(after.saturated.count("near"));
  EXPECT_DOUBLE_EQ(after.segments.at("near").reserved_fraction, 1.0);
}

TEST(TwinWhatIf, ScaleDownThenUpRoundTrips) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "quota/vc/far", "utilization", 0.5), rec(1, "quota/vc/far", "quota_cpu", 4000),
               rec(1, "segment/far", "reserved_fraction", 0.5)});
  const auto s = twin.snapshot(1);
  auto down = twin.what_if(s, proposal("quota/vc/far", Action::scale_down(rv(1000))));
  auto back = twin.what_if(down, proposal("quota/vc/far", Action::scale_up(rv(1000))));
  EXPECT_NEAR(back.quotas.at("quota/vc/far").utilization, 0.5, 1e-12);
  EXPECT_NEAR(back.segments.at("far").reserved_fraction, 0.5, 1e-12);
}

TEST(TwinWhatIf, MigrateMovesLoadAndLatency) {
  DigitalTwin twin(near_far_topology());
  twin.set_deployment("x", far_view());
  twin.ingest({rec(1, "segment/far", "cpu_utilization", 0.5), rec(1, "segment/near", "cpu_utilization", 0.0)});
  auto s = twin.snapshot(1);
  auto after = twin.what_if(s, proposal("app/x", Action::migrate("eas", "near")));
  EXPECT_DOUBLE_EQ(after.apps.at("x").latency_ms, 5.0);
  EXPECT_DOUBLE_EQ(after.segments.at("near").utilization, 0.5);        // 2000 / 4000
  EXPECT_DOUBLE_EQ(after.segments.at("far").utilization, 0.5 - 0.125);  // 2000 / 16000
  EXPECT_EQ(after.deployments.at("x").components.at("eas").segment, "near");
  EXPECT_DOUBLE_EQ(after.segments.at("near").power_w, 200.0);
  EXPECT_EQ(s.deployments.at("x").components.at("eas").segment, "far");

  // Moving the bearing component back restores the far path latency.
  auto back = twin.what_if(after, proposal("app/x", Action::migrate("eas", "far")));
  EXPECT_DOUBLE_EQ(back.apps.at("x").latency_ms, 50.0);
}

TEST(TwinWhatIf, NonBearingMoveKeepsLatency) {
  DigitalTwin twin(near_far_topology());
  twin.set_deployment("x", far_view());
  auto after = twin.what_if(twin.snapshot(0), proposal("app/x", Action::migrate("db", "near")));
  EXPECT_DOUBLE_EQ(after.apps.at("x").latency_ms, 50.0);
}

TEST(TwinWhatIf, NoOpKinds) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "segment/near", "cpu_utilization", 0.3)});
  auto s = twin.snapshot(1);
  auto r = twin.what_if(s, proposal("app/x", Action::reconfigure("k", "v")));
  EXPECT_DOUBLE_EQ(r.segments.at("near").utilization, 0.3);
  auto n = twin.what_if(s, proposal("app/x", Action::negotiate("x", std::nullopt)));
  EXPECT_DOUBLE_EQ(n.segments.at("near").utilization, 0.3);
}

TEST(TwinWhatIf, UnknownEntities) {
  DigitalTwin twin(near_far_topology());
  twin.set_deployment("x", far_view());
  auto s = twin.snapshot(0);
  EXPECT_AIORA_ERROR(twin.what_if(s, proposal("quota/vc/mars", Action::scale_up(rv(1)))), ErrorCode::UnknownEntity);
  EXPECT_AIORA_ERROR(twin.what_if(s, proposal("app/y", Action::migrate("eas", "near"))), ErrorCode::UnknownEntity);
  EXPECT_AIORA_ERROR(twin.what_if(s, proposal("app/x", Action::migrate("gpu", "near"))), ErrorCode::UnknownEntity);
  EXPECT_AIORA_ERROR(twin.what_if(s, proposal("app/x", Action::migrate("eas", "mars"))), ErrorCode::UnknownEntity);
  EXPECT_AIORA_ERROR(twin.what_if(s, proposal("bogus", Action::scale_up(rv(1)))), ErrorCode::UnknownEntity);
}

TEST(TwinWhatIf, RemovedDeploymentIsUnknown) {
  DigitalTwin twin(near_far_topology());
  twin.set_deployment("x", far_view());
  twin.remove_deployment("x");
  EXPECT_AIORA_ERROR(twin.what_if(twin.snapshot(0), proposal("app/x", Action::migrate("eas", "near"))),
                     ErrorCode::UnknownEntity);
}

TEST(Twin, IssuedSnapshotsNeverChange) {
  DigitalTwin twin(near_far_topology());
  twin.ingest({rec(1, "segment/near", "cpu_utilization", 0.2)});
  const auto s1 = twin.snapshot(1);
  const auto frozen = s1.segments.at("near").utilization;
  twin.ingest({rec(1, "segment/near", "cpu_utilization", 0.9), rec(2, "segment/near", "cpu_utilization", 0.7)});
  EXPECT_DOUBLE_EQ(s1.segments.at("near").utilization, frozen);
  EXPECT_DOUBLE_EQ(twin.snapshot(1).segments.at("near").utilization, 0.9);
  EXPECT_DOUBLE_EQ(twin.snapshot(2).segments.at("near").utilization, 0.7);
}

TEST(TwinWhatIf, NoOpIsIdempotent) {
  DigitalTwin twin(near_far_topology());
  twin.set_deployment("x", far_view());
  twin.ingest({rec(1, "segment/far", "cpu_utilization", 0.4)});
  const auto s = twin.snapshot(1);
  const auto once = twin.what_if(s, proposal("app/x", Action::reconfigure("k", "v")));
  const auto twice = twin.what_if(once, proposal("app/x", Action::reconfigure("k", "v")));
  // Migrating to where the component already is changes no load either.
  const auto same = twin.what_if(s, proposal("app/x", Action::migrate("eas", "far")));
  for (const auto* snap : {&once, &twice, &same})
    for (const auto& [id, v] : s.segments) EXPECT_EQ(snap->segments.at(id).utilization, v.utilization);
}
