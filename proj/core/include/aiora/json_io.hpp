#pragma once

// Strict JSON mapping for the domain types. Readers reject unknown keys and
// report type mismatches as ValidationError naming the offending path.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aiora/actuation.hpp"
#include "aiora/broker.hpp"
#include "aiora/closed_loop.hpp"
#include "aiora/coordinator.hpp"
#include "aiora/error.hpp"
#include "aiora/placement.hpp"
#include "aiora/resources.hpp"
#include "aiora/topology.hpp"
#include "aiora/twin.hpp"

namespace aiora {

namespace json_io {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what);

template <class T>
T required(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key))
    throw Error(ErrorCode::ValidationError, std::string(what) + ": missing key " + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string(what) + "." + key + ": " + e.what());
  }
}

template <class T>
T optional(const json& j, const char* key, T fallback, std::string_view what) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return required<T>(j, key, what);
}

template <class T>
std::optional<T> maybe(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return required<T>(j, key, what);
}

// Throws ParseError.
json parse(std::string_view text, std::string_view what);
json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const json& j);

Topology load_topology(const std::filesystem::path& path);
ApplicationDescriptor load_application(const std::filesystem::path& path);
ObjectiveWeights load_weights(const std::filesystem::path& path);

// Telemetry batch as JSON lines, one TelemetryRecord per line.
std::vector<TelemetryRecord> parse_telemetry_lines(const std::string& jsonl);

}  // namespace json_io

void to_json(nlohmann::json& j, const ResourceVector& v);
void from_json(const nlohmann::json& j, ResourceVector& v);
void to_json(nlohmann::json& j, const Agreement& v);
void from_json(const nlohmann::json& j, Agreement& v);
void to_json(nlohmann::json& j, const StakeholderDescriptor& v);
void from_json(const nlohmann::json& j, StakeholderDescriptor& v);
void to_json(nlohmann::json& j, const SegmentDescriptor& v);
void from_json(const nlohmann::json& j, SegmentDescriptor& v);
void to_json(nlohmann::json& j, const LinkDescriptor& v);
void from_json(const nlohmann::json& j, LinkDescriptor& v);
void to_json(nlohmann::json& j, const ZoneAccess& v);
void from_json(const nlohmann::json& j, ZoneAccess& v);
void to_json(nlohmann::json& j, const ZoneDescriptor& v);
void from_json(const nlohmann::json& j, ZoneDescriptor& v);
void to_json(nlohmann::json& j, const Topology& v);
void from_json(const nlohmann::json& j, Topology& v);

void to_json(nlohmann::json& j, const Reservation& v);
void from_json(const nlohmann::json& j, Reservation& v);
void to_json(nlohmann::json& j, const BlockingConstraint& v);
void to_json(nlohmann::json& j, const SegmentUsage& v);

void to_json(nlohmann::json& j, const ComponentSpec& v);
void from_json(const nlohmann::json& j, ComponentSpec& v);
void to_json(nlohmann::json& j, const ServiceRequirements& v);
void from_json(const nlohmann::json& j, ServiceRequirements& v);
void to_json(nlohmann::json& j, const ApplicationDescriptor& v);
void from_json(const nlohmann::json& j, ApplicationDescriptor& v);
void to_json(nlohmann::json& j, const ObjectiveWeights& v);
void from_json(const nlohmann::json& j, ObjectiveWeights& v);
void to_json(nlohmann::json& j, const CostBreakdown& v);
void to_json(nlohmann::json& j, const PlacementPlan& v);
nlohmann::json placement_result_json(const PlacementResult& r);

void to_json(nlohmann::json& j, const Action& v);
void from_json(const nlohmann::json& j, Action& v);
void to_json(nlohmann::json& j, const ActuationProposal& v);
void from_json(const nlohmann::json& j, ActuationProposal& v);

void to_json(nlohmann::json& j, const TelemetryRecord& v);
void from_json(const nlohmann::json& j, TelemetryRecord& v);
void to_json(nlohmann::json& j, const TwinSnapshot& v);

void to_json(nlohmann::json& j, const ClosedLoopSpec& v);
void from_json(const nlohmann::json& j, ClosedLoopSpec& v);

void to_json(nlohmann::json& j, const Conflict& v);
void to_json(nlohmann::json& j, const ConflictReport& v);
void to_json(nlohmann::json& j, const CoordinationDecision& v);
void to_json(nlohmann::json& j, const RequirementsPatch& v);
void from_json(const nlohmann::json& j, RequirementsPatch& v);
void to_json(nlohmann::json& j, const NegotiationOutcome& v);

}  // namespace aiora
