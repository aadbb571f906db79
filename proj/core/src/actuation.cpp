#include "aiora/actuation.hpp"

namespace aiora {

Action Action::scale_up(const ResourceVector& amount) {
  Action a;
  a.kind = ActionKind::ScaleUp;
  a.amount = amount;
  return a;
}

Action Action::scale_down(const ResourceVector& amount) {
  Action a;
  a.kind = ActionKind::ScaleDown;
  a.amount = amount;
  return a;
}

Action Action::migrate(const std::string& component, const std::string& to) {
  Action a;
  a.kind = ActionKind::Migrate;
  a.component = component;
  a.segment = to;
  return a;
}

Action Action::reconfigure(const std::string& key, const std::string& value) {
  Action a;
  a.kind = ActionKind::Reconfigure;
  a.key = key;
  a.value = value;
  return a;
}

Action Action::negotiate(const std::string& app, std::optional<ServiceRequirements> relaxed) {
  Action a;
  a.kind = ActionKind::NegotiateQuality;
  a.app = app;
  a.relaxed = std::move(relaxed);
  return a;
}

bool ActuationProposal::well_formed() const {
  switch (action.kind) {
    case ActionKind::ScaleUp:
    case ActionKind::ScaleDown:
      return action.amount.positive() && parse_quota_entity(target).has_value();
    case ActionKind::Migrate:
      return !action.component.empty() && !action.segment.empty() &&
             parse_app_entity(target).has_value();
    case ActionKind::NegotiateQuality:
      return !action.app.empty();
    case ActionKind::Reconfigure:
      return !action.key.empty();
  }
  return false;
}

std::string quota_entity(const std::string& continuum, const std::string& segment) {
  return "quota/" + continuum + "/" + segment;
}

std::string app_entity(const std::string& app) { return "app/" + app; }

std::optional<QuotaEntity> parse_quota_entity(const std::string& entity) {
  constexpr std::string_view prefix = "quota/";
  if (entity.rfind(prefix, 0) != 0) return std::nullopt;
  const auto rest = entity.substr(prefix.size());
  const auto slash = rest.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == rest.size()) return std::nullopt;
  return QuotaEntity{rest.substr(0, slash), rest.substr(slash + 1)};
}

std::optional<std::string> parse_app_entity(const std::string& entity) {
  constexpr std::string_view prefix = "app/";
  if (entity.rfind(prefix, 0) != 0 || entity.size() == prefix.size()) return std::nullopt;
  return entity.substr(prefix.size());
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::ScaleUp: return "ScaleUp";
    case ActionKind::ScaleDown: return "ScaleDown";
    case ActionKind::Migrate: return "Migrate";
    case ActionKind::Reconfigure: return "Reconfigure";
    case ActionKind::NegotiateQuality: return "NegotiateQuality";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view s) {
  for (auto k : {ActionKind::ScaleUp, ActionKind::ScaleDown, ActionKind::Migrate,
                 ActionKind::Reconfigure, ActionKind::NegotiateQuality})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

}  // namespace aiora
