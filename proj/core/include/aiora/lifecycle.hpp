#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiora/broker.hpp"
#include "aiora/business_scenario.hpp"
#include "aiora/placement.hpp"
#include "aiora/topology.hpp"

namespace aiora {

enum class ContinuumState { Prepared, Instantiated, Active, Maintenance, Modifying, Terminated };
enum class Plane { User, Control, Cloud, Management, Intelligence };
enum class InstanceState { Starting, Ready, Draining, Stopped };
enum class MigrationMode { MakeBeforeBreak, BreakBeforeMake };

// The declared transition relation.
bool transition_allowed(ContinuumState from, ContinuumState to);
const std::set<Plane>& all_planes();

struct InstanceRecord {
  std::string segment;
  InstanceState state = InstanceState::Starting;
  std::int64_t since_tick = 0;
};

struct MigrationWindow {
  MigrationMode mode = MigrationMode::MakeBeforeBreak;
  std::string from;
  std::string to;
  std::int64_t started = 0;
  std::int64_t ready_at = 0;
};

struct DeploymentRecord {
  ApplicationDescriptor app;
  ObjectiveWeights weights;
  PlacementPlan plan;
  std::map<std::string, std::vector<InstanceRecord>> instances;  // live + draining
  std::map<std::string, MigrationWindow> windows;

  int ready_count(const std::string& component) const;
  bool in_window(const std::string& component) const { return windows.count(component) > 0; }
};

struct VirtualContinuum {
  std::string id;
  std::string business_provider;
  BusinessScenario scenario;
  std::vector<std::string> quotas;  // reservation ids, Held or Released
  ContinuumState state = ContinuumState::Prepared;
  std::map<std::string, DeploymentRecord> deployed_apps;
  std::vector<std::string> loops;
  std::set<Plane> planes;
  std::map<std::string, std::string> config;  // Reconfigure targets
};

struct QuotaDemand {
  std::string segment;
  ResourceVector amount;
};

struct ContinuumRequest {
  std::string id;
  std::string provider;
  BusinessScenario scenario;
  std::vector<QuotaDemand> quotas;
  std::set<Plane> planes = all_planes();
};

struct ContinuumModification {
  std::vector<QuotaDemand> add_quotas;
  std::vector<std::string> release_reservations;
  std::optional<std::set<Plane>> planes;
};

struct MigrationReport {
  std::int64_t downtime_ticks = 0;
  std::int64_t ready_at = 0;
};

// Drives continuums and their applications through the lifecycle state
// machines. Deployments bind against continuum quotas held at the broker,
// never against raw segment capacity.
class LifecycleManager {
 public:
  struct Options {
    std::int64_t startup_delay_ticks = 2;
  };

  LifecycleManager(const Topology& topology, ResourceBroker& broker);
  LifecycleManager(const Topology& topology, ResourceBroker& broker, Options options);

  const VirtualContinuum& create_continuum(const ContinuumRequest& req);
  void transition(const std::string& continuum, ContinuumState to);
  void modify_continuum(const std::string& continuum, const ContinuumModification& mod);

  // Placement against the continuum's remaining quota, without side effects.
  PlacementResult plan_in_continuum(const std::string& continuum, const ApplicationDescriptor& app,
                                    const ObjectiveWeights& w) const;
  const DeploymentRecord& deploy_application(const std::string& continuum,
                                             const ApplicationDescriptor& app,
                                             const ObjectiveWeights& w);
  MigrationReport migrate_component(const std::string& continuum, const std::string& app,
                                    const std::string& component, const std::string& target,
                                    MigrationMode mode);
  void terminate_application(const std::string& continuum, const std::string& app);
  void update_requirements(const std::string& continuum, const std::string& app,
                           const ServiceRequirements& req);

  Reservation scale_quota_up(const std::string& continuum, const std::string& segment,
                             const ResourceVector& amount);
  // Shrinks the quota by `amount`, which must be unused. Releases a
  // reservation of exactly that size when one exists, else splits the newest
  // covering one. Throws Infeasible when the quota would not stay positive.
  void scale_quota_down(const std::string& continuum, const std::string& segment,
                        const ResourceVector& amount);
  void reconfigure(const std::string& continuum, const std::string& key, const std::string& value);

  // Applies instance transitions due at or before `tick`.
  void advance_to(std::int64_t tick);
  std::int64_t now() const { return now_; }

  void set_segment_available(const std::string& segment, bool available);
  bool segment_available(const std::string& segment) const;
  // Abrupt loss: every instance on the segment stops immediately.
  void fail_segment(const std::string& segment);

  ResourceVector quota(const std::string& continuum, const std::string& segment) const;
  ResourceVector used(const std::string& continuum, const std::string& segment) const;
  std::map<std::string, ResourceVector> quotas(const std::string& continuum) const;
  // Remaining quota on available segments.
  CapacityView quota_view(const std::string& continuum) const;
  // quota_view plus what `app` itself occupies; the view to replan `app` in.
  CapacityView quota_view_for(const std::string& continuum, const std::string& app) const;

  const VirtualContinuum& continuum(const std::string& id) const;
  const std::map<std::string, VirtualContinuum>& continuums() const { return continuums_; }
  const DeploymentRecord& deployment(const std::string& continuum, const std::string& app) const;
  // Continuum hosting `app`, if deployed anywhere.
  std::optional<std::string> continuum_of_app(const std::string& app) const;

  const Options& options() const { return options_; }
  const Topology& topology() const { return topology_; }
  const ResourceBroker& broker() const { return broker_; }

  std::vector<nlohmann::json> take_events();

 private:
  VirtualContinuum& mutable_continuum(const std::string& id);
  DeploymentRecord& mutable_deployment(VirtualContinuum& c, const std::string& app);
  void stop_all(VirtualContinuum& c, DeploymentRecord& d);
  void emit(nlohmann::json event);
  void reserve_all(VirtualContinuum& c, const std::vector<QuotaDemand>& demands);

  Topology topology_;
  ResourceBroker& broker_;
  Options options_;
  std::int64_t now_ = 0;
  std::map<std::string, VirtualContinuum> continuums_;
  std::set<std::string> unavailable_;
  std::vector<nlohmann::json> events_;
};

std::string_view to_string(ContinuumState s);
std::string_view to_string(Plane p);
std::string_view to_string(InstanceState s);
std::string_view to_string(MigrationMode m);
std::optional<ContinuumState> parse_continuum_state(std::string_view s);
std::optional<Plane> parse_plane(std::string_view s);
std::optional<MigrationMode> parse_migration_mode(std::string_view s);

}  // namespace aiora
