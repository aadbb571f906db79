#include "aiora/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "aiora/error.hpp"
#include "aiora/json_io.hpp"

namespace aiora {

using nlohmann::json;

namespace {

json error_json(const Error& e) {
  json j = {{"code", to_string(e.code())}, {"message", e.what()}};
  if (!e.details().empty()) j["details"] = e.details();
  return j;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

bool live(InstanceState s) { return s != InstanceState::Stopped; }

json penalty_json(double p) { return std::isinf(p) ? json("infinite") : json(p); }

}  // namespace

Simulator::Simulator(ScenarioConfig config)
    : config_(std::move(config)),
      broker_(std::make_unique<ResourceBroker>(config_.topology.stakeholders)),
      lifecycle_(std::make_unique<LifecycleManager>(
          config_.topology, *broker_,
          LifecycleManager::Options{config_.settings.startup_delay_ticks})),
      twin_(std::make_unique<DigitalTwin>(config_.topology)),
      exposure_(std::make_unique<ExposureRegistry>(config_.topology, *lifecycle_)),
      latency_(config_.topology),
      rng_(config_.seed) {}

const ApplicationConfig* Simulator::app_config(const std::string& app) const {
  auto it = apps_.find(app);
  return it == apps_.end() ? nullptr : &it->second;
}

void Simulator::flush_lifecycle(std::int64_t tick) {
  for (auto& e : lifecycle_->take_events()) trace_.append(tick, "lifecycle", std::move(e));
}

const VirtualContinuum& Simulator::create_continuum(const ContinuumRequest& request) {
  lifecycle_->create_continuum(request);
  try {
    lifecycle_->transition(request.id, ContinuumState::Instantiated);
    lifecycle_->transition(request.id, ContinuumState::Active);
  } catch (...) {
    flush_lifecycle(tick_);
    throw;
  }
  flush_lifecycle(tick_);
  return lifecycle_->continuum(request.id);
}

void Simulator::setup() {
  if (set_up_) return;
  set_up_ = true;
  trace_.append(0, "meta",
                {{"seed", config_.seed},
                 {"horizon", config_.horizon},
                 {"tick_seconds", config_.settings.tick_seconds},
                 {"noise", config_.settings.noise},
                 {"startup_delay_ticks", config_.settings.startup_delay_ticks},
                 {"migration_mode", to_string(config_.settings.migration_mode)},
                 {"move_penalty", penalty_json(config_.settings.move_penalty)}});

  auto guarded = [&](const char* stage, auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      flush_lifecycle(0);
      auto j = error_json(e);
      j["stage"] = stage;
      trace_.append(0, "error", j);
    }
  };

  for (const auto& s : config_.topology.segments) broker_->register_segment(s);
  for (const auto& c : config_.continuums) guarded("continuum", [&] { create_continuum(c); });
  for (const auto& a : config_.applications) guarded("deploy", [&] { deploy(a); });
  for (const auto& e : config_.ees)
    guarded("exposure", [&] { exposure_->register_ees(e.actor, e.continuum, e.record); });
  for (const auto& e : config_.eas)
    guarded("exposure", [&] { exposure_->register_eas(e.actor, e.ees, e.record); });

  EntityDirectory dir;
  for (const auto& [id, c] : lifecycle_->continuums()) dir.continuums.insert(id);
  for (const auto& s : config_.topology.segments) dir.segments.insert(s.id);
  for (const auto& a : config_.applications) dir.app_continuum[a.app.id] = a.continuum;
  guarded("loops", [&] { loops_.compose_all(config_.loops, dir); });
  sync_twin();
  flush_lifecycle(0);
}

json Simulator::deploy(const ApplicationConfig& cfg) {
  try {
    lifecycle_->deploy_application(cfg.continuum, cfg.app, cfg.weights);
    apps_[cfg.app.id] = cfg;
    flush_lifecycle(tick_);
    sync_twin();
    return {{"app", cfg.app.id}, {"continuum", cfg.continuum}, {"status", "applied"}};
  } catch (const Error& e) {
    flush_lifecycle(tick_);
    if (e.code() != ErrorCode::Infeasible) throw;
  }

  // Infeasible as declared: run the negotiation workflow.
  const auto initial = lifecycle_->plan_in_continuum(cfg.continuum, cfg.app, cfg.weights);
  ActuationProposal p;
  p.id = std::to_string(tick_) + ":deploy:" + cfg.app.id;
  p.target = app_entity(cfg.app.id);
  p.action = Action::negotiate(cfg.app.id, std::nullopt);
  p.tick = tick_;
  trace_.append(tick_, "proposal", p);
  CoordinationDecision decision;
  decision.accepted.push_back(p.id);
  decision.negotiations.push_back(p);
  trace_.append(tick_, "conflict_report", {{"conflicts", json::array()}});
  trace_.append(tick_, "decision", decision);

  json payload = {{"proposal", p.id}, {"loop", ""}, {"target", p.target}, {"action", p.action}};
  try {
    auto outcome = negotiate_quality_targets(
        cfg.app, initial.blocking, cfg.ladder, [&](const ServiceRequirements& req) {
          auto a = cfg.app;
          a.requirements = req;
          return lifecycle_->plan_in_continuum(cfg.continuum, a, cfg.weights);
        });
    payload["negotiation"] = outcome;
    if (!outcome.accepted) {
      payload["status"] = "rejected";
      trace_.append(tick_, "actuation", payload);
      std::vector<std::string> details;
      for (const auto& b : initial.blocking) details.push_back(b.kind + ": " + b.detail);
      throw Error(ErrorCode::Infeasible, "application " + cfg.app.id + " is infeasible at every rung", details);
    }
    auto relaxed = cfg.app;
    relaxed.requirements = *outcome.requirements;
    lifecycle_->deploy_application(cfg.continuum, relaxed, cfg.weights);
    apps_[cfg.app.id] = cfg;
    payload["status"] = "applied";
    trace_.append(tick_, "actuation", payload);
    flush_lifecycle(tick_);
    sync_twin();
    return payload;
  } catch (const Error& e) {
    if (!payload.contains("status")) {
      payload["status"] = "failed";
      payload["error"] = error_json(e);
      trace_.append(tick_, "actuation", payload);
    }
    flush_lifecycle(tick_);
    throw;
  }
}

void Simulator::run_to_end() {
  setup();
  while (!finished()) step();
}

void Simulator::apply_events(std::int64_t tick, std::set<std::string>& fired) {
  for (auto it = maintenance_until_.begin(); it != maintenance_until_.end();) {
    if (it->second != tick) {
      ++it;
      continue;
    }
    lifecycle_->set_segment_available(it->first, true);
    trace_.append(tick, "lifecycle", {{"event", "maintenance_ended"}, {"segment", it->first}, {"tick", tick}});
    it = maintenance_until_.erase(it);
  }

  for (const auto& e : config_.events) {
    if (e.tick != tick) continue;
    json j = {{"event", "disturbance"}, {"kind", to_string(e.kind)}, {"tick", tick}};
    switch (e.kind) {
      case EventKind::UserMobility: {
        json moved = json::array();
        for (const auto& [cid, c] : lifecycle_->continuums()) {
          for (const auto& [app_id, d] : c.deployed_apps) {
            if (d.app.requirements.user_zone != e.from_zone) continue;
            if (!e.app.empty() && e.app != app_id) continue;
            auto req = d.app.requirements;
            req.user_zone = e.to_zone;
            lifecycle_->update_requirements(cid, app_id, req);
            moved.push_back(app_id);
          }
        }
        j["from"] = e.from_zone;
        j["to"] = e.to_zone;
        j["apps"] = moved;
        break;
      }
      case EventKind::MaintenanceShutdown: {
        if (!failed_.count(e.segment)) {
          lifecycle_->set_segment_available(e.segment, false);
          auto& until = maintenance_until_[e.segment];
          until = std::max(until, tick + e.duration);
        }
        j["segment"] = e.segment;
        j["until"] = tick + e.duration;
        break;
      }
      case EventKind::LoadSurge:
        load_factor_[e.app] = e.factor;
        j["app"] = e.app;
        j["factor"] = e.factor;
        break;
      case EventKind::SegmentFailure:
        failed_.insert(e.segment);
        maintenance_until_.erase(e.segment);
        lifecycle_->fail_segment(e.segment);
        j["segment"] = e.segment;
        break;
    }
    trace_.append(tick, "lifecycle", j);
    flush_lifecycle(tick);
    fired.insert(std::string(to_string(e.kind)));
  }
}

GroundTruth Simulator::ground_truth() const {
  GroundTruth g;
  const auto& topo = config_.topology;
  std::map<std::string, double> load;  // segment -> effective cpu millicores
  for (const auto& [cid, c] : lifecycle_->continuums()) {
    std::map<std::string, double> used;  // segment -> effective cpu of this continuum
    for (const auto& [app_id, d] : c.deployed_apps) {
      auto f = load_factor_.find(app_id);
      const double factor = f == load_factor_.end() ? 1.0 : f->second;
      AppTruth at;
      const bool any_eas = std::any_of(d.app.components.begin(), d.app.components.end(),
                                       [](const auto& x) { return x.role == ComponentRole::EAS; });
      double latency = 0.0;
      std::optional<double> throughput;
      std::optional<int> min_ready;
      for (const auto& comp : d.app.components) {
        std::vector<std::string> serving;
        int ready = 0;
        if (auto it = d.instances.find(comp.id); it != d.instances.end()) {
          for (const auto& inst : it->second) {
            if (!live(inst.state)) continue;
            const double cpu = static_cast<double>(comp.demand.cpu) * factor;
            load[inst.segment] += cpu;
            used[inst.segment] += cpu;
            if (inst.state == InstanceState::Ready) {
              ++ready;
              serving.push_back(inst.segment);
            }
          }
        }
        at.ready[comp.id] = ready;
        min_ready = min_ready ? std::min(*min_ready, ready) : ready;
        if (any_eas && comp.role != ComponentRole::EAS) continue;
        if (serving.empty()) serving.push_back(d.plan.assignment.at(comp.id));
        std::optional<double> best_latency;
        double best_bw = 0.0;
        for (const auto& seg : serving) {
          if (auto l = latency_.from_zone(d.app.requirements.user_zone, seg))
            best_latency = best_latency ? std::min(*best_latency, *l) : *l;
          best_bw = std::max(best_bw, static_cast<double>(
                                          latency_.throughput_from_zone(d.app.requirements.user_zone, seg)));
        }
        if (best_latency) latency = std::max(latency, *best_latency);
        throughput = throughput ? std::min(*throughput, best_bw) : best_bw;
      }
      at.latency_ms = latency;
      at.throughput_mbps = throughput.value_or(0.0);
      at.ready_instances = min_ready.value_or(0);
      g.apps[app_id] = at;
    }
    if (c.state == ContinuumState::Terminated) continue;
    for (const auto& [seg, q] : lifecycle_->quotas(cid)) {
      QuotaTruth qt;
      qt.quota_cpu = static_cast<double>(q.cpu);
      qt.utilization = q.cpu > 0 ? clamp01(used[seg] / static_cast<double>(q.cpu)) : 0.0;
      g.quotas[quota_entity(cid, seg)] = qt;
    }
  }

  const auto usage = broker_->utilization_report();
  for (const auto& s : topo.segments) {
    SegmentTruth st;
    const double cap = static_cast<double>(s.capacity.cpu);
    st.utilization = cap > 0 ? clamp01(load[s.id] / cap) : 0.0;
    if (auto u = usage.find(s.id); u != usage.end() && cap > 0)
      st.reserved_fraction = clamp01(static_cast<double>(u->second.held.cpu) / cap);
    if (failed_.count(s.id))
      st.status = SegmentStatus::Failed;
    else if (maintenance_until_.count(s.id))
      st.status = SegmentStatus::Draining;
    st.power_w = st.status == SegmentStatus::Failed ? 0.0 : power_draw(s, st.utilization);
    st.carbon_g_per_h = carbon_rate(s, st.power_w);
    g.segments[s.id] = st;
  }
  return g;
}

bool Simulator::conservation_holds() const {
  std::map<std::string, ResourceVector> held;
  for (const auto& [id, r] : broker_->reservations())
    if (r.state == ReservationState::Held) held[r.segment] += r.amount;
  for (const auto& [id, u] : broker_->utilization_report()) {
    if (!u.residual.non_negative()) return false;
    if (held[id] + u.residual != u.capacity) return false;
    if (u.held != held[id]) return false;
  }
  return true;
}

double Simulator::noisy(double v) {
  const double a = config_.settings.noise;
  if (a <= 0.0) return v;
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return v * (1.0 + a * (2.0 * u - 1.0));
}

std::vector<TelemetryRecord> Simulator::synthesize(std::int64_t tick, const GroundTruth& g) {
  std::vector<TelemetryRecord> out;
  auto add = [&](const std::string& source, const char* metric, double value, const char* unit) {
    out.push_back({tick, source, metric, value, unit, Provenance::Local});
  };
  for (const auto& [id, s] : g.segments) {
    const auto src = "segment/" + id;
    add(src, "cpu_utilization", clamp01(noisy(s.utilization)), "ratio");
    add(src, "reserved_fraction", s.reserved_fraction, "ratio");
    add(src, "status", static_cast<double>(static_cast<int>(s.status)), "code");
  }
  for (const auto& [id, a] : g.apps) {
    const auto src = app_entity(id);
    add(src, "latency_ms", noisy(a.latency_ms), "ms");
    add(src, "throughput_mbps", noisy(a.throughput_mbps), "Mbps");
    add(src, "ready_instances", static_cast<double>(a.ready_instances), "count");
  }
  for (const auto& [id, q] : g.quotas) {
    add(id, "utilization", clamp01(noisy(q.utilization)), "ratio");
    add(id, "quota_cpu", q.quota_cpu, "millicores");
  }
  return out;
}

void Simulator::sync_twin() {
  std::set<std::string> present;
  for (const auto& [cid, c] : lifecycle_->continuums()) {
    for (const auto& [app_id, d] : c.deployed_apps) {
      DeploymentView v;
      v.continuum = cid;
      v.user_zone = d.app.requirements.user_zone;
      for (const auto& comp : d.app.components)
        v.components[comp.id] = ComponentView{d.plan.assignment.at(comp.id), comp.demand, comp.role};
      twin_->set_deployment(app_id, std::move(v));
      present.insert(app_id);
    }
  }
  for (const auto& app : twin_apps_)
    if (!present.count(app)) twin_->remove_deployment(app);
  twin_apps_ = std::move(present);
}

EvaluationContext Simulator::evaluation_context() const {
  EvaluationContext ctx;
  ctx.topology = &config_.topology;
  ctx.latency = &latency_;
  for (const auto& [cid, c] : lifecycle_->continuums()) {
    for (const auto& [app_id, d] : c.deployed_apps) {
      ctx.apps[app_id] = d.app;
      ctx.weights[app_id] = d.weights;
      ctx.assignments[app_id] = d.plan.assignment;
      ctx.app_continuum[app_id] = cid;
      ctx.app_views[app_id] = lifecycle_->quota_view_for(cid, app_id);
    }
  }
  return ctx;
}

CoordinationContext Simulator::coordination_context() const {
  CoordinationContext ctx;
  for (const auto& [id, l] : loops_.loops())
    ctx.loops[id] = LoopRelation{l.ancestors, {l.spec.targets.begin(), l.spec.targets.end()}};
  for (const auto& s : config_.topology.segments) ctx.broker_residual[s.id] = broker_->residual(s.id);
  for (const auto& [cid, c] : lifecycle_->continuums()) {
    if (c.state == ContinuumState::Terminated) continue;
    for (const auto& [seg, rem] : lifecycle_->quota_view(cid)) ctx.quota_remaining[{cid, seg}] = rem;
  }
  return ctx;
}

json Simulator::negotiate(const std::string& continuum, const std::string& app) {
  const auto* cfg = app_config(app);
  const auto& d = lifecycle_->deployment(continuum, app);
  // Rungs relax the declared requirements, carried to the user's current zone.
  auto base = d.app;
  if (cfg) {
    base.requirements = cfg->app.requirements;
    base.requirements.user_zone = d.app.requirements.user_zone;
  }
  const auto current = d.plan.assignment;
  const auto weights = d.weights;
  const auto view = lifecycle_->quota_view_for(continuum, app);
  auto outcome = negotiate_quality_targets(
      base, {}, cfg ? cfg->ladder : std::nullopt, [&](const ServiceRequirements& req) {
        auto a = base;
        a.requirements = req;
        return replan_migration(current, config_.topology, view, a, weights, config_.settings.move_penalty);
      });
  json j = outcome;
  if (!outcome.accepted) return j;
  if (*outcome.requirements != d.app.requirements)
    lifecycle_->update_requirements(continuum, app, *outcome.requirements);
  json moves = json::array();
  for (const auto& [comp, seg] : outcome.plan->assignment) {
    if (current.at(comp) == seg) continue;
    json m = {{"component", comp}, {"to", seg}};
    try {
      auto r = lifecycle_->migrate_component(continuum, app, comp, seg, config_.settings.migration_mode);
      m["status"] = "applied";
      m["downtime_ticks"] = r.downtime_ticks;
    } catch (const Error& e) {
      m["status"] = "failed";
      m["error"] = error_json(e);
    }
    moves.push_back(m);
  }
  j["moves"] = moves;
  return j;
}

json Simulator::actuate(const ActuationProposal& p) {
  json payload = {{"proposal", p.id}, {"loop", p.loop_id}, {"target", p.target}, {"action", p.action}};
  auto continuum_of = [&](const std::string& target) -> std::string {
    if (auto q = parse_quota_entity(target)) return q->continuum;
    if (auto a = parse_app_entity(target)) {
      if (auto c = lifecycle_->continuum_of_app(*a)) return *c;
      throw Error(ErrorCode::UnknownApplication, "application " + *a + " is not deployed");
    }
    throw Error(ErrorCode::UnknownEntity, "unknown target " + target);
  };
  try {
    const auto& a = p.action;
    switch (a.kind) {
      case ActionKind::ScaleUp: {
        auto q = parse_quota_entity(p.target);
        if (!q) throw Error(ErrorCode::UnknownEntity, "scale target must be a quota: " + p.target);
        payload["reservation"] = lifecycle_->scale_quota_up(q->continuum, q->segment, a.amount).id;
        break;
      }
      case ActionKind::ScaleDown: {
        auto q = parse_quota_entity(p.target);
        if (!q) throw Error(ErrorCode::UnknownEntity, "scale target must be a quota: " + p.target);
        lifecycle_->scale_quota_down(q->continuum, q->segment, a.amount);
        break;
      }
      case ActionKind::Migrate: {
        auto app = parse_app_entity(p.target);
        if (!app) throw Error(ErrorCode::UnknownEntity, "migration target must be an app: " + p.target);
        auto r = lifecycle_->migrate_component(continuum_of(p.target), *app, a.component, a.segment,
                                               config_.settings.migration_mode);
        payload["mode"] = to_string(config_.settings.migration_mode);
        payload["downtime_ticks"] = r.downtime_ticks;
        payload["ready_at"] = r.ready_at;
        break;
      }
      case ActionKind::Reconfigure:
        lifecycle_->reconfigure(continuum_of(p.target), a.key, a.value);
        break;
      case ActionKind::NegotiateQuality: {
        const auto app = a.app.empty() ? parse_app_entity(p.target).value_or("") : a.app;
        auto outcome = negotiate(continuum_of(app_entity(app)), app);
        const bool accepted = outcome.at("accepted").get<bool>();
        payload["negotiation"] = std::move(outcome);
        payload["status"] = accepted ? "applied" : "rejected";
        return payload;
      }
    }
    payload["status"] = "applied";
  } catch (const Error& e) {
    payload["status"] = "failed";
    payload["error"] = error_json(e);
  }
  return payload;
}

void Simulator::record_kpis(std::int64_t tick) {
  const auto g = ground_truth();
  json segs = json::object();
  for (const auto& [id, s] : g.segments)
    segs[id] = {{"utilization", s.utilization},
                {"power_w", s.power_w},
                {"carbon_g_per_h", s.carbon_g_per_h},
                {"status", static_cast<int>(s.status)}};
  json apps = json::object();
  for (const auto& [id, a] : g.apps)
    apps[id] = {{"latency_ms", a.latency_ms},
                {"throughput_mbps", a.throughput_mbps},
                {"ready_instances", a.ready_instances},
                {"ready", a.ready}};
  trace_.append(tick, "kpi", {{"segments", segs}, {"apps", apps}, {"conservation", conservation_holds()}});
}

void Simulator::step() {
  setup();
  if (finished()) return;
  const auto t = tick_;
  lifecycle_->advance_to(t);
  flush_lifecycle(t);

  std::set<std::string> fired;
  apply_events(t, fired);
  for (const auto& id : exposure_->prune_inactive())
    trace_.append(t, "lifecycle", {{"event", "ees_pruned"}, {"ees", id}, {"tick", t}});
  sync_twin();

  const auto records = synthesize(t, ground_truth());
  twin_->ingest(records);
  trace_.append(t, "telemetry", {{"records", records}});
  snapshot_ = twin_->snapshot(t);
  trace_.append(t, "snapshot", snapshot_);

  auto round = loops_.evaluate_due(snapshot_, evaluation_context(), t, fired);
  for (const auto& e : round.errors)
    trace_.append(t, "error", {{"stage", "loop"}, {"loop", e.loop_id}, {"message", e.message}});
  for (const auto& p : round.proposals) trace_.append(t, "proposal", p);

  if (!round.proposals.empty()) {
    CoordinationRound cr;
    cr.tick = t;
    cr.context = coordination_context();
    cr.report = detect_conflicts(round.proposals, snapshot_, cr.context);
    cr.decision = resolve(round.proposals, cr.report, snapshot_, cr.context);
    trace_.append(t, "conflict_report", {{"conflicts", cr.report}});
    trace_.append(t, "decision", cr.decision);
    for (const auto& id : cr.decision.accepted) {
      auto it = std::find_if(round.proposals.begin(), round.proposals.end(),
                             [&](const auto& p) { return p.id == id; });
      trace_.append(t, "actuation", actuate(*it));
      flush_lifecycle(t);
    }
    sync_twin();
    if (observer_) {
      cr.proposals = std::move(round.proposals);
      cr.snapshot = snapshot_;
      observer_(cr);
    }
  }

  if (!conservation_holds()) {
    ++conservation_violations_;
    trace_.append(t, "error", {{"stage", "conservation"}, {"message", "broker conservation violated"}});
  }
  record_kpis(t);
  ++tick_;
}

SimulationResult run(const ScenarioConfig& config) {
  Simulator sim(config);
  sim.run_to_end();
  SimulationResult r;
  r.trace = sim.trace().records();
  r.metrics = summarize(r.trace);
  return r;
}

}  // namespace aiora
