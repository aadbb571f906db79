#include "aiora/business_scenario.hpp"

#include <algorithm>
#include <initializer_list>

#include "aiora/error.hpp"

namespace aiora {

OperationBucket bucket_of(Operation op) {
  switch (op) {
    case Operation::Create:
    case Operation::Offer:
      return OperationBucket::Offer;
    default:
      return OperationBucket::Manage;
  }
}

BusinessScenario BusinessScenario::make_a(const std::string& op) {
  BusinessScenario s;
  s.variant = ScenarioVariant::A;
  for (auto c : {EntityClass::VirtualInfrastructure, EntityClass::Continuum,
                 EntityClass::ApplicationServer})
    s.roles[c] = {op, op};
  return s;
}

BusinessScenario BusinessScenario::make_b(const std::string& op, const std::string& app) {
  BusinessScenario s;
  s.variant = ScenarioVariant::B;
  s.roles[EntityClass::VirtualInfrastructure] = {op, op};
  s.roles[EntityClass::Continuum] = {op, op};
  s.roles[EntityClass::ApplicationServer] = {app, op};
  return s;
}

BusinessScenario BusinessScenario::make_c(const std::string& mno, const std::string& edge,
                                          const std::string& app) {
  BusinessScenario s;
  s.variant = ScenarioVariant::C;
  s.roles[EntityClass::VirtualInfrastructure] = {mno, mno};
  s.roles[EntityClass::Continuum] = {edge, edge};
  s.roles[EntityClass::ApplicationServer] = {app, edge};
  return s;
}

const RoleAssignment& BusinessScenario::role(EntityClass c) const {
  auto it = roles.find(c);
  if (it == roles.end())
    throw Error(ErrorCode::ValidationError,
                "scenario has no role entry for " + std::string(to_string(c)));
  return it->second;
}

namespace {

bool role_in(const Topology& t, const std::string& id, std::initializer_list<StakeholderRole> ok) {
  const auto* s = t.find_stakeholder(id);
  return s && std::find(ok.begin(), ok.end(), s->role) != ok.end();
}

}  // namespace

std::vector<std::string> validate_scenario(const BusinessScenario& s, const Topology* t) {
  std::vector<std::string> out;
  for (auto c : {EntityClass::VirtualInfrastructure, EntityClass::Continuum,
                 EntityClass::ApplicationServer}) {
    if (!s.roles.count(c)) {
      out.push_back("missing role entry for " + std::string(to_string(c)));
      return out;
    }
  }
  const auto& vi = s.roles.at(EntityClass::VirtualInfrastructure);
  const auto& cont = s.roles.at(EntityClass::Continuum);
  const auto& as = s.roles.at(EntityClass::ApplicationServer);
  using R = StakeholderRole;

  switch (s.variant) {
    case ScenarioVariant::A: {
      const auto& op = vi.offering;
      for (const auto* r : {&vi, &cont, &as})
        if (r->offering != op || r->managing != op)
          out.push_back("scenario A requires one stakeholder to offer and manage everything");
      if (t && !role_in(*t, op, {R::MNO, R::AppProvider, R::ContinuumBusinessProvider}))
        out.push_back("scenario A operator " + op + " must be an MNO or application provider");
      break;
    }
    case ScenarioVariant::B: {
      const auto& op = vi.offering;
      if (cont.offering != op) out.push_back("scenario B: one operator offers infrastructure and continuums");
      if (as.offering == op) out.push_back("scenario B: the application server is offered by the app provider");
      for (const auto* r : {&vi, &cont, &as})
        if (r->managing != op) out.push_back("scenario B: a single operator manages all entities");
      if (t && !role_in(*t, op, {R::MNO, R::EdgeProvider, R::ContinuumBusinessProvider}))
        out.push_back("scenario B operator " + op + " must be an MNO or edge provider");
      if (t && !role_in(*t, as.offering, {R::AppProvider}))
        out.push_back("scenario B application server offerer must be an app provider");
      break;
    }
    case ScenarioVariant::C: {
      if (vi.offering != vi.managing) out.push_back("scenario C: the MNO offers and manages infrastructure");
      if (cont.offering != cont.managing) out.push_back("scenario C: the edge provider offers and manages continuums");
      if (as.managing != cont.managing) out.push_back("scenario C: the continuum manager manages the application server");
      if (as.offering == cont.managing || vi.offering == cont.offering)
        out.push_back("scenario C requires three distinct stakeholders");
      if (t && !role_in(*t, vi.offering, {R::MNO}))
        out.push_back("scenario C infrastructure owner " + vi.offering + " must be an MNO");
      if (t && !role_in(*t, cont.offering, {R::EdgeProvider, R::ContinuumBusinessProvider}))
        out.push_back("scenario C continuum provider " + cont.offering + " must be an edge provider");
      if (t && !role_in(*t, as.offering, {R::AppProvider}))
        out.push_back("scenario C application server offerer must be an app provider");
      break;
    }
  }
  return out;
}

AuthDecision authorize(const std::string& actor, OperationBucket bucket, EntityClass entity,
                       const BusinessScenario& scenario, const std::vector<std::string>& known) {
  if (std::find(known.begin(), known.end(), actor) == known.end())
    return {false, "unknown stakeholder"};
  auto it = scenario.roles.find(entity);
  if (it == scenario.roles.end())
    return {false, "scenario defines no role for " + std::string(to_string(entity))};
  const auto& holder =
      bucket == OperationBucket::Offer ? it->second.offering : it->second.managing;
  if (holder == actor) return {true, {}};
  const std::string verb = bucket == OperationBucket::Offer ? "offer" : "manage";
  return {false, actor + " may not " + verb + " " + std::string(to_string(entity)) +
                     " in scenario " + std::string(to_string(scenario.variant)) + "; " + holder +
                     " is the " + (bucket == OperationBucket::Offer ? "offering" : "managing") +
                     " stakeholder"};
}

AuthDecision authorize(const std::string& actor, Operation op, EntityClass entity,
                       const BusinessScenario& scenario, const std::vector<std::string>& known) {
  return authorize(actor, bucket_of(op), entity, scenario, known);
}

std::string_view to_string(ScenarioVariant v) {
  switch (v) {
    case ScenarioVariant::A: return "A";
    case ScenarioVariant::B: return "B";
    case ScenarioVariant::C: return "C";
  }
  return "?";
}

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::VirtualInfrastructure: return "VirtualInfrastructure";
    case EntityClass::Continuum: return "Continuum";
    case EntityClass::ApplicationServer: return "ApplicationServer";
  }
  return "?";
}

std::string_view to_string(OperationBucket b) {
  return b == OperationBucket::Offer ? "Offer" : "Manage";
}

std::optional<ScenarioVariant> parse_scenario_variant(std::string_view s) {
  if (s == "A") return ScenarioVariant::A;
  if (s == "B") return ScenarioVariant::B;
  if (s == "C") return ScenarioVariant::C;
  return std::nullopt;
}

std::optional<EntityClass> parse_entity_class(std::string_view s) {
  for (auto c : {EntityClass::VirtualInfrastructure, EntityClass::Continuum,
                 EntityClass::ApplicationServer})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

}  // namespace aiora
