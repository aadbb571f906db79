#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aiora/actuation.hpp"
#include "aiora/broker.hpp"
#include "aiora/placement.hpp"
#include "aiora/twin.hpp"

namespace aiora {

enum class ConflictKind { SameTarget, SharedResourceContention, ParentChildOverlap, ContradictoryDirection };

struct Conflict {
  std::string a;  // proposal ids, a < b
  std::string b;
  ConflictKind kind = ConflictKind::SameTarget;
  std::string detail;
};

struct ConflictReport {
  std::vector<Conflict> conflicts;

  bool empty() const { return conflicts.empty(); }
  bool conflicting(const std::string& a, const std::string& b) const;
};

struct LoopRelation {
  std::vector<std::string> ancestors;
  std::set<std::string> targets;
};

// Resource and nesting facts the coordinator needs besides the snapshot.
//   broker_residual: segment -> residual at the broker (ScaleUp draws on it)
//   quota_remaining: (continuum, segment) -> unused quota (Migrate draws on it)
struct CoordinationContext {
  std::map<std::string, LoopRelation> loops;
  std::map<std::string, ResourceVector> broker_residual;
  std::map<std::pair<std::string, std::string>, ResourceVector> quota_remaining;
};

// What a proposal consumes, if anything: a pool key and an amount.
struct ResourceDraw {
  std::string pool;
  ResourceVector amount;
};
std::optional<ResourceDraw> resource_draw(const ActuationProposal& p, const TwinSnapshot& snapshot);
ResourceVector pool_capacity(const std::string& pool, const CoordinationContext& ctx);

ConflictReport detect_conflicts(const std::vector<ActuationProposal>& proposals,
                                const TwinSnapshot& snapshot, const CoordinationContext& ctx);

struct Deferral {
  std::string id;
  std::string blocking;  // accepted proposal that blocked this one
  std::string reason;
};

struct CoordinationDecision {
  std::vector<std::string> accepted;  // in selection order
  std::vector<Deferral> deferred;
  std::vector<ActuationProposal> negotiations;  // accepted NegotiateQuality items
};

// Greedy selection in order (priority desc, nesting depth asc, loop id asc,
// proposal id asc). A candidate is accepted when it conflicts with no accepted
// proposal and its pool still has room for everything accepted from it.
CoordinationDecision resolve(const std::vector<ActuationProposal>& proposals,
                             const ConflictReport& report, const TwinSnapshot& snapshot,
                             const CoordinationContext& ctx);

// One relaxation step; rungs apply cumulatively in ladder order.
struct RequirementsPatch {
  std::optional<double> max_latency_ms;
  std::optional<double> max_latency_factor;
  std::optional<double> carbon_cap;
  bool drop_carbon_cap = false;
  std::optional<std::int64_t> min_throughput;
  bool drop_data_locality = false;

  ServiceRequirements apply(ServiceRequirements r) const;
};

using RelaxationLadder = std::vector<RequirementsPatch>;
using FeasibilityFn = std::function<PlacementResult(const ServiceRequirements&)>;

struct RungAttempt {
  std::size_t rung = 0;  // 1-based
  ServiceRequirements requirements;
  bool feasible = false;
  std::vector<BlockingConstraint> blocking;
};

struct NegotiationOutcome {
  bool accepted = false;
  std::optional<ServiceRequirements> requirements;
  std::optional<PlacementPlan> plan;
  std::size_t rung = 0;
  std::vector<BlockingConstraint> initial_blocking;
  std::vector<RungAttempt> attempts;
};

// Walks the ladder until `feasible` accepts a rung. Throws NoLadderDeclared
// when `ladder` is absent; an empty ladder is Rejected.
NegotiationOutcome negotiate_quality_targets(const ApplicationDescriptor& app,
                                             const std::vector<BlockingConstraint>& blocking,
                                             const std::optional<RelaxationLadder>& ladder,
                                             const FeasibilityFn& feasible);

std::string_view to_string(ConflictKind k);

}  // namespace aiora
