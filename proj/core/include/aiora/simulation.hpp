#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiora/broker.hpp"
#include "aiora/closed_loop.hpp"
#include "aiora/coordinator.hpp"
#include "aiora/exposure.hpp"
#include "aiora/lifecycle.hpp"
#include "aiora/scenario_config.hpp"
#include "aiora/trace.hpp"
#include "aiora/twin.hpp"

namespace aiora {

// Analytic state the harness derives telemetry from.
struct SegmentTruth {
  double utilization = 0.0;
  double reserved_fraction = 0.0;
  double power_w = 0.0;
  double carbon_g_per_h = 0.0;
  SegmentStatus status = SegmentStatus::Up;
};

struct AppTruth {
  double latency_ms = 0.0;
  double throughput_mbps = 0.0;
  int ready_instances = 0;  // minimum over components
  std::map<std::string, int> ready;  // per component
};

struct QuotaTruth {
  double utilization = 0.0;
  double quota_cpu = 0.0;
};

struct GroundTruth {
  std::map<std::string, SegmentTruth> segments;
  std::map<std::string, AppTruth> apps;
  std::map<std::string, QuotaTruth> quotas;  // keyed by quota entity
};

// Everything one coordination round saw and decided.
struct CoordinationRound {
  std::int64_t tick = 0;
  std::vector<ActuationProposal> proposals;
  TwinSnapshot snapshot;
  CoordinationContext context;
  ConflictReport report;
  CoordinationDecision decision;
};

struct SimulationResult {
  std::vector<TraceRecord> trace;
  MetricsSummary metrics;
};

// Live engine: broker, lifecycle, twin, loops, coordinator and exposure over
// one scenario. Not copyable; components hold references to each other.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig config);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  // Registers segments, creates and activates continuums, deploys
  // applications (negotiating when a deploy is infeasible), registers
  // exposure records and composes loops. Runs once.
  void setup();
  // Runs the next tick through the full pipeline.
  void step();
  bool finished() const { return tick_ >= config_.horizon; }
  void run_to_end();
  std::int64_t next_tick() const { return tick_; }

  GroundTruth ground_truth() const;
  // Σ Held + residual == capacity with no negative residual, on every segment.
  bool conservation_holds() const;

  // Deploys through the lifecycle manager. On Infeasible with a declared
  // ladder the negotiation workflow runs and the accepted rung is deployed.
  // Returns the actuation payload recorded in the trace.
  nlohmann::json deploy(const ApplicationConfig& app);
  // Creates and activates a continuum.
  const VirtualContinuum& create_continuum(const ContinuumRequest& request);

  const ScenarioConfig& config() const { return config_; }
  const TraceLog& trace() const { return trace_; }
  const ResourceBroker& broker() const { return *broker_; }
  const LifecycleManager& lifecycle() const { return *lifecycle_; }
  LifecycleManager& lifecycle() { return *lifecycle_; }
  const DigitalTwin& twin() const { return *twin_; }
  const LoopEngine& loops() const { return loops_; }
  ExposureRegistry& exposure() { return *exposure_; }
  const ExposureRegistry& exposure() const { return *exposure_; }
  const TwinSnapshot& last_snapshot() const { return snapshot_; }
  std::int64_t conservation_violations() const { return conservation_violations_; }

  void set_round_observer(std::function<void(const CoordinationRound&)> f) { observer_ = std::move(f); }

 private:
  void apply_events(std::int64_t tick, std::set<std::string>& fired);
  std::vector<TelemetryRecord> synthesize(std::int64_t tick, const GroundTruth& truth);
  void sync_twin();
  EvaluationContext evaluation_context() const;
  CoordinationContext coordination_context() const;
  nlohmann::json actuate(const ActuationProposal& p);
  nlohmann::json negotiate(const std::string& continuum, const std::string& app);
  void flush_lifecycle(std::int64_t tick);
  void record_kpis(std::int64_t tick);
  double noisy(double v);
  const ApplicationConfig* app_config(const std::string& app) const;

  ScenarioConfig config_;
  std::unique_ptr<ResourceBroker> broker_;
  std::unique_ptr<LifecycleManager> lifecycle_;
  std::unique_ptr<DigitalTwin> twin_;
  std::unique_ptr<ExposureRegistry> exposure_;
  LatencyModel latency_;
  LoopEngine loops_;
  TraceLog trace_;
  TwinSnapshot snapshot_;
  std::mt19937_64 rng_;
  std::map<std::string, double> load_factor_;           // app -> factor
  std::map<std::string, std::int64_t> maintenance_until_;  // segment -> first tick back up
  std::set<std::string> failed_;
  std::set<std::string> twin_apps_;
  std::map<std::string, ApplicationConfig> apps_;       // by app id, including API deploys
  std::function<void(const CoordinationRound&)> observer_;
  std::int64_t tick_ = 0;
  std::int64_t conservation_violations_ = 0;
  bool set_up_ = false;
};

// setup + every tick + summarize.
SimulationResult run(const ScenarioConfig& config);

}  // namespace aiora
