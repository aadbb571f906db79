#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiora/actuation.hpp"
#include "aiora/placement.hpp"
#include "aiora/topology.hpp"
#include "aiora/twin.hpp"

namespace aiora {

struct MetricSelector {
  std::string source;
  std::string metric;
};

struct Trigger {
  enum class Kind { Periodic, OnEvent };
  Kind kind = Kind::Periodic;
  std::int64_t every = 1;  // Periodic
  std::string event;       // OnEvent: event kind name, e.g. "UserMobility"
};

struct PolicyRef {
  std::string id;
  nlohmann::json params = nlohmann::json::object();
};

struct ClosedLoopSpec {
  std::string id;
  std::optional<std::string> scope;  // continuum id; nullopt = cross-segment
  std::vector<MetricSelector> monitors;
  std::string analyzer = "latest";
  PolicyRef policy;
  std::vector<std::string> targets;
  Trigger trigger;
  std::optional<std::string> parent;
  int priority = 0;
};

struct PolicyOutcome {
  std::optional<ActuationProposal> proposal;
  std::string rationale;
};

// Hysteresis memory of one loop; the engine updates it whenever the loop
// emits a proposal.
struct LoopState {
  std::optional<std::int64_t> last_action_tick;
  std::optional<ActionKind> last_action;
};

// Read-only orchestration view a policy may consult besides the snapshot.
struct EvaluationContext {
  const Topology* topology = nullptr;
  const LatencyModel* latency = nullptr;  // optional cache of `topology`
  std::map<std::string, ApplicationDescriptor> apps;   // current descriptors
  std::map<std::string, ObjectiveWeights> weights;
  std::map<std::string, Assignment> assignments;
  std::map<std::string, std::string> app_continuum;
  std::map<std::string, CapacityView> app_views;       // quota view to replan each app in
};

// Existence and ownership of managed entities, for compose-time checks.
struct EntityDirectory {
  std::set<std::string> continuums;
  std::set<std::string> segments;
  std::map<std::string, std::string> app_continuum;

  // Owning continuum of a managed entity; nullopt if the entity is unknown.
  std::optional<std::string> owner_of(const std::string& entity) const;
};

struct PolicyInput {
  const ClosedLoopSpec& spec;
  std::optional<double> analyzed;  // analyzer output over the monitors
  const TwinSnapshot& snapshot;
  const EvaluationContext& context;
  const LoopState& state;
  std::int64_t tick;
};

using AnalyzerFn = std::function<double(const std::vector<double>&)>;

struct PolicyDefinition {
  std::function<void(const ClosedLoopSpec&)> validate;  // throws BadParams
  std::function<PolicyOutcome(const PolicyInput&)> decide;
  std::string params_schema;  // human-readable parameter description
};

struct LoopRegistry {
  std::map<std::string, AnalyzerFn> analyzers;
  std::map<std::string, PolicyDefinition> policies;

  // latest / max / min / mean analyzers; threshold_scale, latency_migration,
  // drain_evacuation policies.
  static LoopRegistry builtin();
};

struct ComposedLoop {
  ClosedLoopSpec spec;
  int depth = 1;  // 1 for a root loop
  std::vector<std::string> ancestors;  // nearest first
};

// ---- built-in policies as plain functions ----------------------------------

struct ThresholdParams {
  double hi = 0.8;
  double lo = 0.2;
  ResourceVector step;
  std::int64_t cooldown = 0;

  static ThresholdParams from_json(const nlohmann::json& j);  // throws BadParams
};

// Strict thresholds: u > hi scales up, u < lo scales down. Any action starts a
// cooldown during which nothing further is proposed. Scale-down is withheld
// when the target quota would drop below one step.
PolicyOutcome threshold_scale_policy(const ThresholdParams& p, double utilization,
                                     const std::string& target,
                                     std::optional<double> target_quota_cpu,
                                     const LoopState& state, std::int64_t tick);

// Migrates the worst-latency component of `app` to the nearest feasible
// segment with strictly lower model latency when measured latency exceeds
// `bound_ms`; falls back to NegotiateQuality when every nearer segment is
// infeasible.
PolicyOutcome latency_migration_policy(double bound_ms, const std::string& app,
                                       const TwinSnapshot& snapshot,
                                       const EvaluationContext& context);

// Moves a component off a draining or failed segment.
PolicyOutcome drain_evacuation_policy(const std::string& app, const TwinSnapshot& snapshot,
                                      const EvaluationContext& context);

// Pure evaluation of one loop. Throws MissingMetric.
PolicyOutcome evaluate_loop(const ComposedLoop& loop, const LoopRegistry& registry,
                            const LoopState& state, const TwinSnapshot& snapshot,
                            const EvaluationContext& context, std::int64_t tick);

struct LoopError {
  std::string loop_id;
  std::string message;
};

struct EvaluationRound {
  std::vector<ActuationProposal> proposals;  // loop id order
  std::vector<std::pair<std::string, std::string>> rationales;  // (loop id, rationale)
  std::vector<LoopError> errors;
};

class LoopEngine {
 public:
  LoopEngine();
  explicit LoopEngine(LoopRegistry registry);

  // Validates and registers. A parent must already be composed.
  // Throws UnknownAnalyzer, UnknownPolicy, BadParams, CyclicNesting,
  // UnknownLoop, UnknownEntity, ScopeViolation, DuplicateId.
  const ComposedLoop& compose(const ClosedLoopSpec& spec, const EntityDirectory& dir);
  // Composes a batch in dependency order; detects nesting cycles across it.
  void compose_all(const std::vector<ClosedLoopSpec>& specs, const EntityDirectory& dir);

  bool due(const ComposedLoop& loop, std::int64_t tick,
           const std::set<std::string>& fired_events) const;

  EvaluationRound evaluate_due(const TwinSnapshot& snapshot, const EvaluationContext& context,
                               std::int64_t tick, const std::set<std::string>& fired_events);

  const std::map<std::string, ComposedLoop>& loops() const { return loops_; }
  const ComposedLoop& loop(const std::string& id) const;
  const LoopState& state(const std::string& id) const;
  const LoopRegistry& registry() const { return registry_; }

 private:
  LoopRegistry registry_;
  std::map<std::string, ComposedLoop> loops_;
  std::map<std::string, LoopState> states_;
};

// Cycle check over a batch of specs, independent of registration order.
// Returns the loop ids on a cycle, empty when acyclic.
std::vector<std::string> find_nesting_cycle(const std::vector<ClosedLoopSpec>& specs);

}  // namespace aiora
