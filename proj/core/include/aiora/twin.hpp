#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aiora/actuation.hpp"
#include "aiora/placement.hpp"
#include "aiora/topology.hpp"

namespace aiora {

enum class Provenance { Local, ExternalTwin };

// Telemetry sources are named like managed entities:
//   segment/<id>        cpu_utilization, reserved_fraction, status (0 up, 1 draining, 2 failed)
//   app/<id>            latency_ms, throughput_mbps, ready_instances
//   quota/<c>/<s>       utilization, quota_cpu
struct TelemetryRecord {
  std::int64_t tick = 0;
  std::string source;
  std::string metric;
  double value = 0.0;
  std::string unit;
  Provenance provenance = Provenance::Local;
};

enum class SegmentStatus { Up = 0, Draining = 1, Failed = 2 };

struct SegmentView {
  double utilization = 0.0;
  double reserved_fraction = 0.0;
  double power_w = 0.0;
  double carbon_g_per_h = 0.0;
  SegmentStatus status = SegmentStatus::Up;
  Provenance provenance = Provenance::Local;
};

struct AppKpis {
  double latency_ms = 0.0;
  double throughput_mbps = 0.0;
  double ready_instances = 0.0;
  Provenance provenance = Provenance::Local;
};

struct QuotaKpis {
  double utilization = 0.0;
  double quota_cpu = 0.0;
  Provenance provenance = Provenance::Local;
};

struct ComponentView {
  std::string segment;
  ResourceVector demand;
  ComponentRole role = ComponentRole::Generic;
};

// Model-side mirror of one deployment; what-if projections move components
// between segments in this view.
struct DeploymentView {
  std::string continuum;
  std::string user_zone;
  std::map<std::string, ComponentView> components;
};

struct MetricSample {
  double value = 0.0;
  Provenance provenance = Provenance::Local;
};

struct TwinSnapshot {
  std::int64_t tick = 0;
  std::map<std::string, SegmentView> segments;
  std::map<std::string, AppKpis> apps;
  std::map<std::string, QuotaKpis> quotas;
  std::map<std::string, DeploymentView> deployments;
  std::map<std::string, std::map<std::string, MetricSample>> raw;  // source -> metric -> sample
  std::set<std::string> saturated;  // segments a prediction pushed past capacity

  std::optional<double> metric(const std::string& source, const std::string& metric) const;
};

// Analytic network digital twin: single writer, snapshots are values.
class DigitalTwin {
 public:
  explicit DigitalTwin(Topology topology);

  // Throws OutOfOrderTelemetry when a record's tick regresses for its source;
  // the whole batch is rejected in that case.
  void ingest(const std::vector<TelemetryRecord>& records);
  // Records mirrored from an external segment's twin.
  void import_external(std::vector<TelemetryRecord> records);

  void set_deployment(const std::string& app, DeploymentView view);
  void remove_deployment(const std::string& app);

  TwinSnapshot snapshot(std::int64_t tick) const;

  // Analytic projection of `proposal` applied to `snap`; `snap` is untouched.
  // Throws UnknownEntity.
  TwinSnapshot what_if(const TwinSnapshot& snap, const ActuationProposal& proposal) const;

  const Topology& topology() const { return topology_; }

 private:
  struct Sample {
    std::int64_t tick;
    double value;
    Provenance provenance;
  };

  void refresh_derived(TwinSnapshot& s, const std::string& segment) const;
  void refresh_app(TwinSnapshot& s, const std::string& app) const;

  Topology topology_;
  LatencyModel latency_;
  std::map<std::pair<std::string, std::string>, std::vector<Sample>> series_;
  std::map<std::string, std::int64_t> last_tick_;
  std::map<std::string, DeploymentView> deployments_;
};

std::string_view to_string(Provenance p);

}  // namespace aiora
