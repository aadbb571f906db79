#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiora/business_scenario.hpp"
#include "aiora/placement.hpp"
#include "aiora/scenario_config.hpp"
#include "aiora/topology.hpp"

namespace aiora::test {

ResourceVector rv(std::int64_t cpu, std::int64_t memory = 0, std::int64_t storage = 0,
                  std::int64_t bandwidth = 0);

SegmentDescriptor segment(const std::string& id, const std::string& owner, ResourceVector capacity,
                          double idle_w = 100, double max_w = 300, double carbon = 0,
                          const std::string& zone = "", double unit_cost = 0,
                          SegmentKind kind = SegmentKind::Edge);

ComponentSpec component(const std::string& id, ResourceVector demand,
                        ComponentRole role = ComponentRole::Generic);

ApplicationDescriptor application(const std::string& id, std::vector<ComponentSpec> components,
                                  const std::string& zone, double max_latency_ms);

ObjectiveWeights weights(double latency, double energy = 0, double carbon = 0, double cost = 0);

// Two edge segments "near" (5 ms from zone z) and "far" (50 ms), one owner.
Topology near_far_topology();

std::filesystem::path fixture_path(const std::string& name);
std::filesystem::path scenario_path(const std::string& name);
nlohmann::json read_json(const std::filesystem::path& p);
ScenarioConfig load_named_scenario(const std::string& name);

}  // namespace aiora::test
