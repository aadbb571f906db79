#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aiora/broker.hpp"
#include "aiora/resources.hpp"
#include "aiora/topology.hpp"

namespace aiora {

enum class ComponentRole { EAS, EES, ECS, Generic };
enum class AvailabilityClass { BestEffort, High };

struct ComponentSpec {
  std::string id;
  ResourceVector demand;
  ComponentRole role = ComponentRole::Generic;
  std::vector<std::string> colocation;     // must share a segment with these
  std::vector<std::string> anti_affinity;  // must not share a segment with these
};

struct ServiceRequirements {
  std::string user_zone;
  double max_latency_ms = 0.0;
  std::int64_t min_throughput = 0;  // Mbps
  std::optional<std::vector<std::string>> data_locality;  // allowed zones for storage
  std::optional<double> carbon_cap;                        // gCO2 per hour
  AvailabilityClass availability = AvailabilityClass::BestEffort;

  friend bool operator==(const ServiceRequirements&, const ServiceRequirements&) = default;
};

struct ApplicationDescriptor {
  std::string id;
  std::string provider;
  std::vector<ComponentSpec> components;
  ServiceRequirements requirements;

  const ComponentSpec* find_component(const std::string& id) const;
};

// Checks the descriptor's own invariants; empty when well formed.
std::vector<std::string> validate_application(const ApplicationDescriptor& app);

// Weighted sum of normalized terms. A normalizer left empty takes its default:
// latency by max_latency, energy by the fleet's summed power_max, carbon by
// carbon_cap (or the fleet's full-power carbon rate), cost by the highest
// unit cost times the app's total cores.
struct ObjectiveWeights {
  double latency = 0.0;
  double energy = 0.0;
  double carbon = 0.0;
  double cost = 0.0;
  std::optional<double> latency_norm;
  std::optional<double> energy_norm;
  std::optional<double> carbon_norm;
  std::optional<double> cost_norm;

  bool valid() const;
  ObjectiveWeights scaled(double k) const;
};

struct CostBreakdown {
  double latency_ms = 0.0;
  double energy_watts = 0.0;   // marginal draw attributed to the app
  double carbon_g_per_h = 0.0;
  double money_per_h = 0.0;
  double scalar = 0.0;
};

using Assignment = std::map<std::string, std::string>;  // component id -> segment id

// Available capacity per candidate segment. Segments missing from the view
// are not candidates.
using CapacityView = std::map<std::string, ResourceVector>;

struct PlacementPlan {
  Assignment assignment;
  CostBreakdown cost;
};

struct ScoreResult {
  std::optional<CostBreakdown> cost;
  std::vector<BlockingConstraint> violations;

  bool ok() const { return cost.has_value(); }
};

struct PlacementResult {
  std::optional<PlacementPlan> plan;
  std::vector<BlockingConstraint> blocking;

  bool feasible() const { return plan.has_value(); }
  bool blocked_by(const std::string& kind) const;
  // Throws Infeasible carrying the blocking constraints.
  const PlacementPlan& value() const;
};

// Evaluates one total assignment directly against the topology. Capacity is
// checked against `available` when given, else against raw segment capacity.
// Throws UnknownSegment / UnknownComponent.
ScoreResult score_placement(const Topology& t, const ApplicationDescriptor& app,
                            const Assignment& assignment, const ObjectiveWeights& w,
                            const CapacityView* available = nullptr);

// Cost-optimal feasible assignment. Ties resolve to the lexicographically
// smallest assignment (components in declaration order, segments by id).
PlacementResult place(const Topology& t, const CapacityView& available,
                      const ApplicationDescriptor& app, const ObjectiveWeights& w);

// Like place() but minimizes scalar + move_penalty * (#moved components).
// An infinite penalty prefers fewest moves, then lowest scalar. `available`
// must already include the capacity the app currently occupies.
PlacementResult replan_migration(const Assignment& current, const Topology& t,
                                 const CapacityView& available,
                                 const ApplicationDescriptor& app, const ObjectiveWeights& w,
                                 double move_penalty);

inline constexpr double kInfinitePenalty = std::numeric_limits<double>::infinity();

// Full-capacity view of every topology segment.
CapacityView full_capacity_view(const Topology& t);

std::string_view to_string(ComponentRole r);
std::optional<ComponentRole> parse_component_role(std::string_view s);
std::string_view to_string(AvailabilityClass a);
std::optional<AvailabilityClass> parse_availability_class(std::string_view s);

}  // namespace aiora
