#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aiora/placement.hpp"
#include "aiora/resources.hpp"

namespace aiora {

enum class ActionKind { ScaleUp, ScaleDown, Migrate, Reconfigure, NegotiateQuality };

struct Action {
  ActionKind kind = ActionKind::Reconfigure;
  ResourceVector amount;                   // ScaleUp / ScaleDown
  std::string component;                   // Migrate
  std::string segment;                     // Migrate destination
  std::string key, value;                  // Reconfigure
  std::string app;                         // NegotiateQuality
  std::optional<ServiceRequirements> relaxed;

  static Action scale_up(const ResourceVector& amount);
  static Action scale_down(const ResourceVector& amount);
  static Action migrate(const std::string& component, const std::string& to);
  static Action reconfigure(const std::string& key, const std::string& value);
  static Action negotiate(const std::string& app, std::optional<ServiceRequirements> relaxed);
};

struct ExpectedEffect {
  std::string metric;
  double delta = 0.0;
};

// Managed entity names:
//   quota/<continuum>/<segment>   a continuum's quota on one segment
//   app/<app id>                  a deployed application
struct ActuationProposal {
  std::string id;
  std::string loop_id;
  std::string target;
  Action action;
  ExpectedEffect expected_effect;
  int priority = 0;
  std::int64_t tick = 0;

  // Well-formedness; scale actions need a positive amount.
  bool well_formed() const;
};

struct QuotaEntity {
  std::string continuum;
  std::string segment;
};

std::string quota_entity(const std::string& continuum, const std::string& segment);
std::string app_entity(const std::string& app);
std::optional<QuotaEntity> parse_quota_entity(const std::string& entity);
std::optional<std::string> parse_app_entity(const std::string& entity);

std::string_view to_string(ActionKind k);
std::optional<ActionKind> parse_action_kind(std::string_view s);

}  // namespace aiora
