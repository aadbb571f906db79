#include "aiora/lifecycle.hpp"

#include <algorithm>

#include "aiora/error.hpp"

namespace aiora {

namespace {

using nlohmann::json;

std::vector<std::string> describe(const std::vector<BlockingConstraint>& b) {
  std::vector<std::string> out;
  for (const auto& x : b) out.push_back(x.kind + ": " + x.detail);
  return out;
}

bool live(InstanceState s) { return s != InstanceState::Stopped; }

// Constraints a single component must satisfy wherever it runs; app-level
// QoS bounds (latency, throughput, carbon) are the loops' concern.
bool component_level(const std::string& kind) {
  return kind == "capacity" || kind == "locality" || kind == "colocation" ||
         kind == "anti_affinity";
}

}  // namespace

bool transition_allowed(ContinuumState from, ContinuumState to) {
  using S = ContinuumState;
  switch (from) {
    case S::Prepared: return to == S::Instantiated || to == S::Terminated;
    case S::Instantiated: return to == S::Active || to == S::Terminated;
    case S::Active: return to == S::Maintenance || to == S::Modifying || to == S::Terminated;
    case S::Maintenance: return to == S::Active || to == S::Terminated;
    case S::Modifying: return to == S::Active;
    case S::Terminated: return false;
  }
  return false;
}

const std::set<Plane>& all_planes() {
  static const std::set<Plane> planes{Plane::User, Plane::Control, Plane::Cloud,
                                      Plane::Management, Plane::Intelligence};
  return planes;
}

int DeploymentRecord::ready_count(const std::string& component) const {
  auto it = instances.find(component);
  if (it == instances.end()) return 0;
  return static_cast<int>(std::count_if(it->second.begin(), it->second.end(), [](const auto& i) {
    return i.state == InstanceState::Ready;
  }));
}

LifecycleManager::LifecycleManager(const Topology& topology, ResourceBroker& broker)
    : LifecycleManager(topology, broker, Options{}) {}

LifecycleManager::LifecycleManager(const Topology& topology, ResourceBroker& broker,
                                   Options options)
    : topology_(topology), broker_(broker), options_(options) {
  if (options_.startup_delay_ticks < 0)
    throw Error(ErrorCode::BadParams, "startup delay must be non-negative");
}

void LifecycleManager::emit(json event) {
  event["tick"] = now_;
  events_.push_back(std::move(event));
}

std::vector<json> LifecycleManager::take_events() {
  std::vector<json> out;
  out.swap(events_);
  return out;
}

void LifecycleManager::reserve_all(VirtualContinuum& c, const std::vector<QuotaDemand>& demands) {
  std::map<std::string, ResourceVector> merged;
  for (const auto& q : demands) {
    topology_.segment(q.segment);
    merged[q.segment] += q.amount;
  }
  std::vector<DemandLine> lines;
  for (const auto& [seg, amount] : merged) {
    SegmentFilter f;
    f.segment = seg;
    lines.push_back({f, amount});
  }
  auto report = broker_.query_feasibility(lines);
  if (!report.feasible)
    throw Error(ErrorCode::Infeasible, "quota request for " + c.id + " is infeasible",
                describe(report.blocking));

  std::vector<std::string> made;
  try {
    for (const auto& [seg, amount] : merged) made.push_back(broker_.reserve(c.id, seg, amount).id);
  } catch (const Error& e) {
    for (const auto& id : made) broker_.release(id);
    throw Error(ErrorCode::Infeasible, "quota request for " + c.id + " rejected: " + e.what(),
                {std::string(to_string(e.code())) + ": " + e.what()});
  }
  c.quotas.insert(c.quotas.end(), made.begin(), made.end());
}

const VirtualContinuum& LifecycleManager::create_continuum(const ContinuumRequest& req) {
  if (continuums_.count(req.id))
    throw Error(ErrorCode::DuplicateId, "continuum " + req.id + " already exists");
  if (!topology_.find_stakeholder(req.provider))
    throw Error(ErrorCode::UnknownStakeholder, "unknown stakeholder " + req.provider);
  auto problems = validate_scenario(req.scenario, &topology_);
  if (!problems.empty())
    throw Error(ErrorCode::UnauthorizedScenario, "malformed business scenario", problems);
  std::vector<std::string> known;
  for (const auto& s : topology_.stakeholders) known.push_back(s.id);
  auto decision = authorize(req.provider, Operation::Offer, EntityClass::Continuum, req.scenario,
                            known);
  if (!decision.allowed) throw Error(ErrorCode::UnauthorizedScenario, decision.reason);

  VirtualContinuum c;
  c.id = req.id;
  c.business_provider = req.provider;
  c.scenario = req.scenario;
  c.planes = req.planes;
  c.state = ContinuumState::Prepared;
  broker_.bind_continuum(c.id, c.business_provider);
  reserve_all(c, req.quotas);

  auto [it, _] = continuums_.emplace(c.id, std::move(c));
  emit({{"event", "continuum_created"}, {"continuum", req.id}, {"state", "Prepared"},
        {"reservations", it->second.quotas}});
  return it->second;
}

void LifecycleManager::transition(const std::string& id, ContinuumState to) {
  auto& c = mutable_continuum(id);
  if (!transition_allowed(c.state, to))
    throw Error(ErrorCode::IllegalTransition, "continuum " + id + ": " +
                                                  std::string(to_string(c.state)) + " -> " +
                                                  std::string(to_string(to)) + " not allowed");
  if (to == ContinuumState::Active && !std::includes(c.planes.begin(), c.planes.end(),
                                                      all_planes().begin(), all_planes().end()))
    throw Error(ErrorCode::PlanesIncomplete, "continuum " + id + " lacks planes for activation");

  const auto from = c.state;
  if (to == ContinuumState::Terminated) {
    for (auto& [app_id, d] : c.deployed_apps) stop_all(c, d);
    c.deployed_apps.clear();
    for (const auto& rid : c.quotas)
      if (broker_.reservation(rid).state == ReservationState::Held) broker_.release(rid);
  }
  c.state = to;
  emit({{"event", "continuum_transition"}, {"continuum", id}, {"from", to_string(from)},
        {"to", to_string(to)}});
}

void LifecycleManager::modify_continuum(const std::string& id, const ContinuumModification& mod) {
  auto& c = mutable_continuum(id);
  transition(id, ContinuumState::Modifying);

  const auto planes_before = c.planes;
  const auto quotas_before = c.quotas;
  try {
    if (mod.planes) {
      if (!std::includes(mod.planes->begin(), mod.planes->end(), all_planes().begin(),
                         all_planes().end()))
        throw Error(ErrorCode::PlanesIncomplete, "modification would drop a plane of " + id);
      c.planes = *mod.planes;
    }
    for (const auto& rid : mod.release_reservations) {
      if (std::find(c.quotas.begin(), c.quotas.end(), rid) == c.quotas.end())
        throw Error(ErrorCode::UnknownReservation, "reservation " + rid + " is not held by " + id);
      const auto& r = broker_.reservation(rid);
      if (r.state != ReservationState::Held)
        throw Error(ErrorCode::AlreadyReleased, "reservation " + rid + " already released");
      if (!used(id, r.segment).fits_within(quota(id, r.segment) - r.amount))
        throw Error(ErrorCode::Infeasible, "releasing " + rid + " would strand deployed apps");
    }
    reserve_all(c, mod.add_quotas);
    for (const auto& rid : mod.release_reservations) broker_.release(rid);
  } catch (...) {
    // Roll back to the pre-modification configuration.
    for (const auto& rid : c.quotas) {
      if (std::find(quotas_before.begin(), quotas_before.end(), rid) == quotas_before.end() &&
          broker_.reservation(rid).state == ReservationState::Held)
        broker_.release(rid);
    }
    c.quotas = quotas_before;
    c.planes = planes_before;
    transition(id, ContinuumState::Active);
    throw;
  }
  transition(id, ContinuumState::Active);
}

PlacementResult LifecycleManager::plan_in_continuum(const std::string& id,
                                                    const ApplicationDescriptor& app,
                                                    const ObjectiveWeights& w) const {
  return place(topology_, quota_view(id), app, w);
}

const DeploymentRecord& LifecycleManager::deploy_application(const std::string& id,
                                                             const ApplicationDescriptor& app,
                                                             const ObjectiveWeights& w) {
  auto& c = mutable_continuum(id);
  if (c.state != ContinuumState::Active)
    throw Error(ErrorCode::ContinuumNotActive, "continuum " + id + " is " +
                                                   std::string(to_string(c.state)));
  if (continuum_of_app(app.id))
    throw Error(ErrorCode::DuplicateId, "application " + app.id + " is already deployed");

  auto result = plan_in_continuum(id, app, w);
  if (!result.feasible())
    throw Error(ErrorCode::Infeasible, "application " + app.id + " does not fit continuum " + id,
                describe(result.blocking));

  DeploymentRecord d;
  d.app = app;
  d.weights = w;
  d.plan = *result.plan;
  for (const auto& comp : app.components) {
    const auto& seg = d.plan.assignment.at(comp.id);
    // Initial startup completes before the deployment is reported.
    d.instances[comp.id].push_back({seg, InstanceState::Ready, now_});
  }
  auto [it, _] = c.deployed_apps.emplace(app.id, std::move(d));
  json assignment = it->second.plan.assignment;
  emit({{"event", "app_deployed"}, {"continuum", id}, {"app", app.id},
        {"assignment", assignment}});
  return it->second;
}

MigrationReport LifecycleManager::migrate_component(const std::string& id, const std::string& app,
                                                    const std::string& component,
                                                    const std::string& target,
                                                    MigrationMode mode) {
  auto& c = mutable_continuum(id);
  if (c.state != ContinuumState::Active && c.state != ContinuumState::Maintenance)
    throw Error(ErrorCode::ContinuumNotActive, "continuum " + id + " is " +
                                                   std::string(to_string(c.state)));
  auto& d = mutable_deployment(c, app);
  const auto* spec = d.app.find_component(component);
  if (!spec) throw Error(ErrorCode::UnknownComponent, "unknown component " + component);
  topology_.segment(target);
  if (d.in_window(component))
    throw Error(ErrorCode::Infeasible, component + " is already migrating");

  auto& instances = d.instances[component];
  const std::string from = d.plan.assignment.at(component);
  const bool had_ready = d.ready_count(component) > 0;
  if (target == from && had_ready)
    throw Error(ErrorCode::Infeasible, component + " already runs on " + target);
  if (!segment_available(target))
    throw Error(ErrorCode::Infeasible, "segment " + target + " is not available");

  auto view = quota_view(id);
  auto vit = view.find(target);
  if (vit == view.end() || !spec->demand.fits_within(vit->second))
    throw Error(ErrorCode::Infeasible,
                "continuum " + id + " has no quota for " + component + " on " + target);

  auto proposed = d.plan.assignment;
  proposed[component] = target;
  const auto own_view = quota_view_for(id, app);
  auto score = score_placement(topology_, d.app, proposed, d.weights, &own_view);
  std::vector<std::string> blocking;
  for (const auto& v : score.violations)
    if (component_level(v.kind)) blocking.push_back(v.kind + ": " + v.detail);
  if (!blocking.empty())
    throw Error(ErrorCode::Infeasible, "target " + target + " violates constraints of " + component,
                blocking);

  const auto delay = options_.startup_delay_ticks;
  MigrationReport report;
  report.ready_at = now_ + delay;
  if (mode == MigrationMode::BreakBeforeMake) {
    for (auto& inst : instances) {
      if (live(inst.state)) {
        inst.state = InstanceState::Stopped;
        inst.since_tick = now_;
      }
    }
    report.downtime_ticks = delay;
  } else {
    report.downtime_ticks = had_ready ? 0 : delay;
  }
  instances.push_back({target, InstanceState::Starting, now_});
  d.windows[component] = MigrationWindow{mode, from, target, now_, now_ + delay};
  d.plan.assignment = proposed;
  if (score.cost) d.plan.cost = *score.cost;
  else if (auto relaxed = score_placement(topology_, d.app, proposed, d.weights); relaxed.cost)
    d.plan.cost = *relaxed.cost;

  emit({{"event", "migration_started"}, {"continuum", id}, {"app", app},
        {"component", component}, {"from", from}, {"to", target}, {"mode", to_string(mode)},
        {"ready_at", report.ready_at}, {"downtime_ticks", report.downtime_ticks}});
  advance_to(now_);
  return report;
}

void LifecycleManager::terminate_application(const std::string& id, const std::string& app) {
  auto& c = mutable_continuum(id);
  auto& d = mutable_deployment(c, app);
  stop_all(c, d);
  c.deployed_apps.erase(app);
}

void LifecycleManager::stop_all(VirtualContinuum& c, DeploymentRecord& d) {
  for (auto& [comp, list] : d.instances)
    for (auto& inst : list)
      if (live(inst.state)) {
        inst.state = InstanceState::Stopped;
        inst.since_tick = now_;
      }
  const bool had_window = !d.windows.empty();
  d.windows.clear();
  emit({{"event", "app_terminated"}, {"continuum", c.id}, {"app", d.app.id},
        {"closed_migration_window", had_window}});
}

void LifecycleManager::update_requirements(const std::string& id, const std::string& app,
                                           const ServiceRequirements& req) {
  auto& c = mutable_continuum(id);
  auto& d = mutable_deployment(c, app);
  d.app.requirements = req;
  emit({{"event", "requirements_updated"}, {"continuum", id}, {"app", app},
        {"user_zone", req.user_zone}, {"max_latency_ms", req.max_latency_ms},
        {"carbon_cap", req.carbon_cap ? json(*req.carbon_cap) : json(nullptr)}});
}

Reservation LifecycleManager::scale_quota_up(const std::string& id, const std::string& segment,
                                             const ResourceVector& amount) {
  auto& c = mutable_continuum(id);
  if (c.state != ContinuumState::Active && c.state != ContinuumState::Maintenance)
    throw Error(ErrorCode::ContinuumNotActive, "continuum " + id + " is not active");
  if (!amount.positive()) throw Error(ErrorCode::BadParams, "scale amount must be positive");
  auto r = broker_.reserve(id, segment, amount);
  c.quotas.push_back(r.id);
  emit({{"event", "quota_scaled_up"}, {"continuum", id}, {"segment", segment},
        {"reservation", r.id}});
  return r;
}

void LifecycleManager::scale_quota_down(const std::string& id, const std::string& segment,
                                        const ResourceVector& amount) {
  auto& c = mutable_continuum(id);
  if (c.state != ContinuumState::Active && c.state != ContinuumState::Maintenance)
    throw Error(ErrorCode::ContinuumNotActive, "continuum " + id + " is not active");
  if (!amount.positive()) throw Error(ErrorCode::BadParams, "scale amount must be positive");
  const auto total = quota(id, segment);
  const auto unused = total - used(id, segment);
  if (!amount.fits_within(unused))
    throw Error(ErrorCode::Infeasible, "quota of " + id + " on " + segment + " has only " +
                                           unused.to_string() + " unused");
  if (!(total - amount).positive())
    throw Error(ErrorCode::Infeasible, "continuum " + id + " keeps a quota on " + segment);

  std::vector<std::string> held_here;  // newest last
  for (const auto& rid : c.quotas) {
    const auto& r = broker_.reservation(rid);
    if (r.segment == segment && r.state == ReservationState::Held) held_here.push_back(rid);
  }
  for (auto it = held_here.rbegin(); it != held_here.rend(); ++it) {
    if (broker_.reservation(*it).amount != amount) continue;
    broker_.release(*it);
    emit({{"event", "quota_scaled_down"}, {"continuum", id}, {"segment", segment},
          {"reservation", *it}});
    return;
  }
  // No exact match: split the newest reservation that covers `amount`. The
  // remainder is smaller than what was just freed, so re-reserving it fits.
  for (auto it = held_here.rbegin(); it != held_here.rend(); ++it) {
    const auto r = broker_.reservation(*it);
    if (!amount.fits_within(r.amount)) continue;
    broker_.release(r.id);
    auto rest = broker_.reserve(id, segment, r.amount - amount);
    std::replace(c.quotas.begin(), c.quotas.end(), r.id, rest.id);
    emit({{"event", "quota_scaled_down"}, {"continuum", id}, {"segment", segment},
          {"reservation", r.id}, {"remainder", rest.id}});
    return;
  }
  throw Error(ErrorCode::Infeasible, "no reservation of " + id + " on " + segment + " covers " +
                                         amount.to_string());
}

void LifecycleManager::reconfigure(const std::string& id, const std::string& key,
                                   const std::string& value) {
  auto& c = mutable_continuum(id);
  c.config[key] = value;
  emit({{"event", "reconfigured"}, {"continuum", id}, {"key", key}, {"value", value}});
}

void LifecycleManager::advance_to(std::int64_t tick) {
  if (tick < now_) throw Error(ErrorCode::BadParams, "lifecycle clock cannot go backwards");
  now_ = tick;
  for (auto& [cid, c] : continuums_) {
    for (auto& [app_id, d] : c.deployed_apps) {
      for (auto wit = d.windows.begin(); wit != d.windows.end();) {
        const auto& comp = wit->first;
        auto& w = wit->second;
        auto& list = d.instances[comp];
        if (now_ < w.ready_at) {
          ++wit;
          continue;
        }
        // The replacement is the newest instance on the target.
        for (auto it = list.rbegin(); it != list.rend(); ++it) {
          if (it->segment == w.to && it->state == InstanceState::Starting) {
            it->state = InstanceState::Ready;
            it->since_tick = w.ready_at;
            emit({{"event", "instance_ready"}, {"continuum", cid}, {"app", app_id},
                  {"component", comp}, {"segment", w.to}});
            break;
          }
        }
        bool closed = true;
        if (w.mode == MigrationMode::MakeBeforeBreak) {
          const bool replacement_ready = std::any_of(list.begin(), list.end(), [&](const auto& i) {
            return i.segment == w.to && i.state == InstanceState::Ready;
          });
          for (std::size_t k = 0; k + 1 < list.size(); ++k) {
            auto& old = list[k];
            if (!replacement_ready) break;
            if (old.state == InstanceState::Ready) {
              old.state = InstanceState::Draining;
              old.since_tick = w.ready_at;
            }
            if (old.state == InstanceState::Draining) {
              if (now_ >= w.ready_at + 1) {
                old.state = InstanceState::Stopped;
                old.since_tick = w.ready_at + 1;
              } else {
                closed = false;
              }
            }
          }
        }
        if (closed) {
          std::erase_if(list, [](const auto& i) { return i.state == InstanceState::Stopped; });
          emit({{"event", "migration_completed"}, {"continuum", cid}, {"app", app_id},
                {"component", comp}, {"to", w.to}});
          wit = d.windows.erase(wit);
        } else {
          ++wit;
        }
      }
    }
  }
}

void LifecycleManager::set_segment_available(const std::string& segment, bool available) {
  topology_.segment(segment);
  if (available) unavailable_.erase(segment);
  else unavailable_.insert(segment);
}

bool LifecycleManager::segment_available(const std::string& segment) const {
  return !unavailable_.count(segment);
}

void LifecycleManager::fail_segment(const std::string& segment) {
  set_segment_available(segment, false);
  for (auto& [cid, c] : continuums_) {
    for (auto& [app_id, d] : c.deployed_apps) {
      for (auto& [comp, list] : d.instances) {
        bool lost = false;
        for (auto& inst : list) {
          if (inst.segment == segment && live(inst.state)) {
            inst.state = InstanceState::Stopped;
            inst.since_tick = now_;
            lost = true;
          }
        }
        if (!lost) continue;
        auto w = d.windows.find(comp);
        if (w != d.windows.end() && w->second.to == segment) d.windows.erase(w);
        std::erase_if(list, [](const auto& i) { return i.state == InstanceState::Stopped; });
        emit({{"event", "instances_lost"}, {"continuum", cid}, {"app", app_id},
              {"component", comp}, {"segment", segment}});
      }
    }
  }
}

ResourceVector LifecycleManager::quota(const std::string& id, const std::string& segment) const {
  const auto& c = continuum(id);
  ResourceVector total;
  for (const auto& rid : c.quotas) {
    const auto& r = broker_.reservation(rid);
    if (r.segment == segment && r.state == ReservationState::Held) total += r.amount;
  }
  return total;
}

std::map<std::string, ResourceVector> LifecycleManager::quotas(const std::string& id) const {
  const auto& c = continuum(id);
  std::map<std::string, ResourceVector> out;
  for (const auto& rid : c.quotas) {
    const auto& r = broker_.reservation(rid);
    if (r.state == ReservationState::Held) out[r.segment] += r.amount;
  }
  return out;
}

ResourceVector LifecycleManager::used(const std::string& id, const std::string& segment) const {
  const auto& c = continuum(id);
  ResourceVector total;
  for (const auto& [app_id, d] : c.deployed_apps) {
    for (const auto& comp : d.app.components) {
      auto it = d.instances.find(comp.id);
      if (it == d.instances.end()) continue;
      for (const auto& inst : it->second)
        if (inst.segment == segment && live(inst.state)) total += comp.demand;
    }
  }
  return total;
}

CapacityView LifecycleManager::quota_view(const std::string& id) const {
  CapacityView view;
  for (const auto& [seg, q] : quotas(id)) {
    if (!segment_available(seg)) continue;
    view[seg] = max(q - used(id, seg), ResourceVector{});
  }
  return view;
}

CapacityView LifecycleManager::quota_view_for(const std::string& id, const std::string& app) const {
  auto view = quota_view(id);
  const auto& d = deployment(id, app);
  for (const auto& comp : d.app.components) {
    auto it = d.instances.find(comp.id);
    if (it == d.instances.end()) continue;
    for (const auto& inst : it->second) {
      if (!live(inst.state)) continue;
      auto v = view.find(inst.segment);
      if (v != view.end()) v->second += comp.demand;
    }
  }
  return view;
}

const VirtualContinuum& LifecycleManager::continuum(const std::string& id) const {
  auto it = continuums_.find(id);
  if (it == continuums_.end()) throw Error(ErrorCode::UnknownContinuum, "unknown continuum " + id);
  return it->second;
}

VirtualContinuum& LifecycleManager::mutable_continuum(const std::string& id) {
  auto it = continuums_.find(id);
  if (it == continuums_.end()) throw Error(ErrorCode::UnknownContinuum, "unknown continuum " + id);
  return it->second;
}

const DeploymentRecord& LifecycleManager::deployment(const std::string& id,
                                                     const std::string& app) const {
  const auto& c = continuum(id);
  auto it = c.deployed_apps.find(app);
  if (it == c.deployed_apps.end())
    throw Error(ErrorCode::UnknownApplication, "application " + app + " not deployed in " + id);
  return it->second;
}

DeploymentRecord& LifecycleManager::mutable_deployment(VirtualContinuum& c, const std::string& app) {
  auto it = c.deployed_apps.find(app);
  if (it == c.deployed_apps.end())
    throw Error(ErrorCode::UnknownApplication, "application " + app + " not deployed in " + c.id);
  return it->second;
}

std::optional<std::string> LifecycleManager::continuum_of_app(const std::string& app) const {
  for (const auto& [cid, c] : continuums_)
    if (c.deployed_apps.count(app)) return cid;
  return std::nullopt;
}

std::string_view to_string(ContinuumState s) {
  switch (s) {
    case ContinuumState::Prepared: return "Prepared";
    case ContinuumState::Instantiated: return "Instantiated";
    case ContinuumState::Active: return "Active";
    case ContinuumState::Maintenance: return "Maintenance";
    case ContinuumState::Modifying: return "Modifying";
    case ContinuumState::Terminated: return "Terminated";
  }
  return "?";
}

std::string_view to_string(Plane p) {
  switch (p) {
    case Plane::User: return "User";
    case Plane::Control: return "Control";
    case Plane::Cloud: return "Cloud";
    case Plane::Management: return "Management";
    case Plane::Intelligence: return "Intelligence";
  }
  return "?";
}

std::string_view to_string(InstanceState s) {
  switch (s) {
    case InstanceState::Starting: return "Starting";
    case InstanceState::Ready: return "Ready";
    case InstanceState::Draining: return "Draining";
    case InstanceState::Stopped: return "Stopped";
  }
  return "?";
}

std::string_view to_string(MigrationMode m) {
  return m == MigrationMode::MakeBeforeBreak ? "MakeBeforeBreak" : "BreakBeforeMake";
}

std::optional<ContinuumState> parse_continuum_state(std::string_view s) {
  for (auto v : {ContinuumState::Prepared, ContinuumState::Instantiated, ContinuumState::Active,
                 ContinuumState::Maintenance, ContinuumState::Modifying, ContinuumState::Terminated})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<Plane> parse_plane(std::string_view s) {
  for (auto p : all_planes())
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::optional<MigrationMode> parse_migration_mode(std::string_view s) {
  if (s == "MakeBeforeBreak") return MigrationMode::MakeBeforeBreak;
  if (s == "BreakBeforeMake") return MigrationMode::BreakBeforeMake;
  return std::nullopt;
}

}  // namespace aiora
