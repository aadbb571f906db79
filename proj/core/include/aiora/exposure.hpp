#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aiora/business_scenario.hpp"
#include "aiora/lifecycle.hpp"
#include "aiora/topology.hpp"

namespace aiora {

struct EESRecord {
  std::string id;
  std::string continuum;
  std::string segment;
  std::set<std::string> capabilities;
  std::string registered_by;
};

struct EASRecord {
  std::string id;
  std::string ees;
  std::string segment;
  std::set<std::string> capabilities;
  std::string app;  // optional application binding
  std::string registered_by;
};

struct EESCandidate {
  std::string ees;
  std::string segment;
  double latency_ms = 0.0;
};

// Edge configuration handed to a client in `zone`.
struct ECSConfiguration {
  std::string zone;
  std::vector<EESCandidate> candidates;  // (latency asc, id asc); unreachable ones omitted
};

struct EASFilter {
  std::set<std::string> capabilities;  // every key must be exposed
  std::optional<double> max_latency_ms;  // measured from the EES's segment
};

struct DiscoveredEAS {
  EASRecord record;
  double latency_ms = 0.0;
};

// EES/EAS registry with scenario-based authorization. Continuum state and
// scenario are read from the lifecycle manager at call time.
class ExposureRegistry {
 public:
  ExposureRegistry(const Topology& topology, const LifecycleManager& lifecycle);

  // Throws Unauthorized, ContinuumNotActive, UnknownContinuum, UnknownSegment, DuplicateId.
  const EESRecord& register_ees(const std::string& actor, const std::string& continuum,
                                EESRecord record);
  // Throws UnknownEES, Unauthorized, UnknownSegment, DuplicateId.
  const EASRecord& register_eas(const std::string& actor, const std::string& ees, EASRecord record);

  // Removing an EES removes every EAS registered under it.
  void deregister_ees(const std::string& actor, const std::string& id);
  void deregister_eas(const std::string& actor, const std::string& id);
  // Drops every EES (and their EAS) whose continuum is no longer Active or Maintenance.
  std::vector<std::string> prune_inactive();

  ECSConfiguration provision_client(const std::string& zone) const;  // throws UnknownZone
  std::vector<DiscoveredEAS> discover_eas(const std::string& ees, const EASFilter& filter) const;

  const std::map<std::string, EESRecord>& ees() const { return ees_; }
  const std::map<std::string, EASRecord>& eas() const { return eas_; }

 private:
  const BusinessScenario& scenario_of(const std::string& continuum) const;
  void require(const std::string& actor, Operation op, EntityClass entity,
               const BusinessScenario& scenario) const;

  Topology topology_;
  LatencyModel latency_;
  const LifecycleManager& lifecycle_;
  std::vector<std::string> known_;
  std::map<std::string, EESRecord> ees_;
  std::map<std::string, EASRecord> eas_;
};

}  // namespace aiora
