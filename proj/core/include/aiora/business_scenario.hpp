#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aiora/topology.hpp"

namespace aiora {

enum class ScenarioVariant { A, B, C };
enum class EntityClass { VirtualInfrastructure, Continuum, ApplicationServer };
enum class OperationBucket { Offer, Manage };

// Northbound operation kinds. Create/Offer fall in the Offer bucket; the
// rest are management operations.
enum class Operation { Create, Offer, Register, Lifecycle, Actuate, Deploy };

OperationBucket bucket_of(Operation op);

struct RoleAssignment {
  std::string offering;
  std::string managing;
};

struct BusinessScenario {
  ScenarioVariant variant = ScenarioVariant::A;
  std::map<EntityClass, RoleAssignment> roles;

  // One operator offers and manages everything.
  static BusinessScenario make_a(const std::string& operator_id);
  // `operator_id` offers infrastructure and continuums and manages all;
  // `app_provider` only offers the application server.
  static BusinessScenario make_b(const std::string& operator_id, const std::string& app_provider);
  // The MNO offers and manages infrastructure, the edge provider offers and
  // manages continuums and manages the app provider's application server.
  static BusinessScenario make_c(const std::string& mno, const std::string& edge_provider,
                                 const std::string& app_provider);

  const RoleAssignment& role(EntityClass c) const;
};

// Structural check of the role matrix against its variant, plus stakeholder
// role types when a topology is supplied. Empty when well formed.
std::vector<std::string> validate_scenario(const BusinessScenario& s,
                                           const Topology* topology = nullptr);

struct AuthDecision {
  bool allowed = false;
  std::string reason;  // empty on Allow
};

// Pure lookup in the scenario role matrix. `known` lists every stakeholder id
// the caller may assert; anything else is denied.
AuthDecision authorize(const std::string& actor, OperationBucket bucket, EntityClass entity,
                       const BusinessScenario& scenario, const std::vector<std::string>& known);
AuthDecision authorize(const std::string& actor, Operation op, EntityClass entity,
                       const BusinessScenario& scenario, const std::vector<std::string>& known);

std::string_view to_string(ScenarioVariant v);
std::string_view to_string(EntityClass c);
std::string_view to_string(OperationBucket b);
std::optional<ScenarioVariant> parse_scenario_variant(std::string_view s);
std::optional<EntityClass> parse_entity_class(std::string_view s);

}  // namespace aiora
