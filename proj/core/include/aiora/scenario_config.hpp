#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiora/business_scenario.hpp"
#include "aiora/closed_loop.hpp"
#include "aiora/coordinator.hpp"
#include "aiora/exposure.hpp"
#include "aiora/lifecycle.hpp"
#include "aiora/placement.hpp"
#include "aiora/topology.hpp"

namespace aiora {

enum class EventKind { UserMobility, MaintenanceShutdown, LoadSurge, SegmentFailure };

struct Event {
  std::int64_t tick = 0;
  EventKind kind = EventKind::UserMobility;
  std::string from_zone;       // UserMobility
  std::string to_zone;         // UserMobility
  std::string app;             // UserMobility (optional filter), LoadSurge
  std::string segment;         // MaintenanceShutdown, SegmentFailure
  std::int64_t duration = 1;   // MaintenanceShutdown, ticks
  double factor = 1.0;         // LoadSurge, absolute multiplier on the app's cpu load
};

struct ApplicationConfig {
  std::string continuum;
  ApplicationDescriptor app;
  ObjectiveWeights weights;
  std::optional<RelaxationLadder> ladder;
};

struct EesConfig {
  std::string actor;
  std::string continuum;
  EESRecord record;
};

struct EasConfig {
  std::string actor;
  std::string ees;
  EASRecord record;
};

struct SimulationSettings {
  double tick_seconds = 1.0;
  std::int64_t startup_delay_ticks = 2;
  double noise = 0.0;  // uniform multiplicative amplitude in [0, 1)
  MigrationMode migration_mode = MigrationMode::MakeBeforeBreak;
  double move_penalty = 0.0;  // replanning during negotiation
};

struct ScenarioConfig {
  Topology topology;
  BusinessScenario scenario;
  std::vector<ContinuumRequest> continuums;
  std::vector<ApplicationConfig> applications;
  std::vector<ClosedLoopSpec> loops;
  std::vector<Event> events;
  std::vector<EesConfig> ees;
  std::vector<EasConfig> eas;
  std::int64_t horizon = 1;
  std::uint64_t seed = 0;
  SimulationSettings settings;
};

// Every cross-reference problem in `cfg`; empty when valid.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

// Throws ValidationError carrying every violation as details.
ScenarioConfig parse_scenario(const nlohmann::json& j);
// Throws ParseError / ValidationError.
ScenarioConfig load_scenario(const std::filesystem::path& path);

BusinessScenario parse_business_scenario(const nlohmann::json& j);
nlohmann::json business_scenario_json(const BusinessScenario& s);

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

}  // namespace aiora
