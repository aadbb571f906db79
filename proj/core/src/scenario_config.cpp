#include "aiora/scenario_config.hpp"

#include <set>

#include "aiora/json_io.hpp"

namespace aiora {

using nlohmann::json;
using json_io::check_keys;
using json_io::maybe;
using json_io::optional;
using json_io::required;

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::UserMobility: return "UserMobility";
    case EventKind::MaintenanceShutdown: return "MaintenanceShutdown";
    case EventKind::LoadSurge: return "LoadSurge";
    case EventKind::SegmentFailure: return "SegmentFailure";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::UserMobility, EventKind::MaintenanceShutdown, EventKind::LoadSurge,
                 EventKind::SegmentFailure})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

BusinessScenario parse_business_scenario(const json& j) {
  check_keys(j, {"variant", "operator", "app_provider", "mno", "edge_provider"}, "scenario");
  const auto v = required<std::string>(j, "variant", "scenario");
  const auto variant = parse_scenario_variant(v);
  if (!variant) throw Error(ErrorCode::ValidationError, "scenario: unknown variant " + v);
  auto need = [&](const char* key) {
    if (!j.contains(key))
      throw Error(ErrorCode::ValidationError, "scenario " + v + ": missing key " + key);
    return required<std::string>(j, key, "scenario");
  };
  switch (*variant) {
    case ScenarioVariant::A:
      check_keys(j, {"variant", "operator"}, "scenario A");
      return BusinessScenario::make_a(need("operator"));
    case ScenarioVariant::B:
      check_keys(j, {"variant", "operator", "app_provider"}, "scenario B");
      return BusinessScenario::make_b(need("operator"), need("app_provider"));
    case ScenarioVariant::C:
      check_keys(j, {"variant", "mno", "edge_provider", "app_provider"}, "scenario C");
      return BusinessScenario::make_c(need("mno"), need("edge_provider"), need("app_provider"));
  }
  throw Error(ErrorCode::ValidationError, "scenario: unknown variant " + v);
}

json business_scenario_json(const BusinessScenario& s) {
  const auto& vi = s.role(EntityClass::VirtualInfrastructure);
  const auto& as = s.role(EntityClass::ApplicationServer);
  const auto& cont = s.role(EntityClass::Continuum);
  switch (s.variant) {
    case ScenarioVariant::A: return {{"variant", "A"}, {"operator", vi.offering}};
    case ScenarioVariant::B:
      return {{"variant", "B"}, {"operator", vi.offering}, {"app_provider", as.offering}};
    case ScenarioVariant::C:
      return {{"variant", "C"},
              {"mno", vi.offering},
              {"edge_provider", cont.offering},
              {"app_provider", as.offering}};
  }
  return json::object();
}

namespace {

ContinuumRequest parse_continuum(const json& j, const BusinessScenario& fallback) {
  const std::string w = "continuum";
  check_keys(j, {"id", "provider", "scenario", "quotas", "planes"}, w);
  ContinuumRequest r;
  r.id = required<std::string>(j, "id", w);
  r.provider = required<std::string>(j, "provider", w + " " + r.id);
  r.scenario = j.contains("scenario") ? parse_business_scenario(j.at("scenario")) : fallback;
  for (const auto& q : optional<json>(j, "quotas", json::array(), w)) {
    check_keys(q, {"segment", "amount"}, w + " " + r.id + " quota");
    r.quotas.push_back({required<std::string>(q, "segment", w + " quota"),
                        required<ResourceVector>(q, "amount", w + " quota")});
  }
  if (j.contains("planes")) {
    r.planes.clear();
    for (const auto& p : required<std::vector<std::string>>(j, "planes", w)) {
      auto plane = parse_plane(p);
      if (!plane) throw Error(ErrorCode::ValidationError, w + " " + r.id + ": unknown plane " + p);
      r.planes.insert(*plane);
    }
  }
  return r;
}

ApplicationConfig parse_application(const json& j) {
  check_keys(j, {"continuum", "app", "weights", "ladder"}, "application");
  ApplicationConfig a;
  a.continuum = required<std::string>(j, "continuum", "application");
  a.app = required<ApplicationDescriptor>(j, "app", "application");
  if (j.contains("weights")) {
    a.weights = required<ObjectiveWeights>(j, "weights", "application " + a.app.id);
  } else {
    a.weights.latency = 1.0;
  }
  a.ladder = maybe<RelaxationLadder>(j, "ladder", "application " + a.app.id);
  return a;
}

Event parse_event(const json& j) {
  check_keys(j, {"tick", "kind", "from", "to", "app", "segment", "duration", "factor"}, "event");
  Event e;
  e.tick = required<std::int64_t>(j, "tick", "event");
  const auto k = required<std::string>(j, "kind", "event");
  auto kind = parse_event_kind(k);
  if (!kind) throw Error(ErrorCode::ValidationError, "event: unknown kind " + k);
  e.kind = *kind;
  const std::string w = "event " + k + "@" + std::to_string(e.tick);
  switch (e.kind) {
    case EventKind::UserMobility:
      check_keys(j, {"tick", "kind", "from", "to", "app"}, w);
      e.from_zone = required<std::string>(j, "from", w);
      e.to_zone = required<std::string>(j, "to", w);
      e.app = optional<std::string>(j, "app", "", w);
      break;
    case EventKind::MaintenanceShutdown:
      check_keys(j, {"tick", "kind", "segment", "duration"}, w);
      e.segment = required<std::string>(j, "segment", w);
      e.duration = required<std::int64_t>(j, "duration", w);
      break;
    case EventKind::LoadSurge:
      check_keys(j, {"tick", "kind", "app", "factor"}, w);
      e.app = required<std::string>(j, "app", w);
      e.factor = required<double>(j, "factor", w);
      break;
    case EventKind::SegmentFailure:
      check_keys(j, {"tick", "kind", "segment"}, w);
      e.segment = required<std::string>(j, "segment", w);
      break;
  }
  return e;
}

SimulationSettings parse_settings(const json& j) {
  check_keys(j, {"tick_seconds", "startup_delay_ticks", "noise", "migration_mode", "move_penalty"},
             "settings");
  SimulationSettings s;
  s.tick_seconds = optional<double>(j, "tick_seconds", 1.0, "settings");
  s.startup_delay_ticks = optional<std::int64_t>(j, "startup_delay_ticks", 2, "settings");
  s.noise = optional<double>(j, "noise", 0.0, "settings");
  if (j.contains("migration_mode")) {
    const auto m = required<std::string>(j, "migration_mode", "settings");
    auto mode = parse_migration_mode(m);
    if (!mode) throw Error(ErrorCode::ValidationError, "settings: unknown migration_mode " + m);
    s.migration_mode = *mode;
  }
  if (j.contains("move_penalty")) {
    const auto& p = j.at("move_penalty");
    if (p.is_string() && p.get<std::string>() == "infinite")
      s.move_penalty = kInfinitePenalty;
    else
      s.move_penalty = required<double>(j, "move_penalty", "settings");
  }
  return s;
}

// Each parse step runs on its own so one malformed entry does not hide the rest.
template <class F>
void collect(std::vector<std::string>& errors, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    errors.push_back(e.what());
  }
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> out;
  const auto& t = cfg.topology;
  const auto report = validate_topology(t);
  for (const auto& v : report.violations) out.push_back("topology: " + v);
  for (const auto& v : validate_scenario(cfg.scenario, &t)) out.push_back("scenario: " + v);

  if (cfg.horizon < 1) out.push_back("horizon must be >= 1");
  const auto& s = cfg.settings;
  if (!(s.tick_seconds > 0.0)) out.push_back("settings: tick_seconds must be positive");
  if (s.startup_delay_ticks < 0) out.push_back("settings: startup_delay_ticks must be >= 0");
  if (!(s.noise >= 0.0 && s.noise < 1.0)) out.push_back("settings: noise must be in [0, 1)");
  if (!(s.move_penalty >= 0.0)) out.push_back("settings: move_penalty must be >= 0");

  std::set<std::string> continuums;
  for (const auto& c : cfg.continuums) {
    if (!continuums.insert(c.id).second) out.push_back("duplicate continuum id " + c.id);
    if (!t.find_stakeholder(c.provider))
      out.push_back("continuum " + c.id + ": unknown provider " + c.provider);
    for (const auto& v : validate_scenario(c.scenario, &t))
      out.push_back("continuum " + c.id + " scenario: " + v);
    for (const auto& q : c.quotas) {
      if (!t.find_segment(q.segment))
        out.push_back("continuum " + c.id + ": unknown segment " + q.segment);
      if (!q.amount.positive())
        out.push_back("continuum " + c.id + ": quota on " + q.segment + " must be positive");
    }
  }

  std::set<std::string> apps;
  std::map<std::string, std::string> app_continuum;
  for (const auto& a : cfg.applications) {
    const auto& id = a.app.id;
    if (!apps.insert(id).second) out.push_back("duplicate application id " + id);
    app_continuum[id] = a.continuum;
    if (!continuums.count(a.continuum))
      out.push_back("application " + id + ": unknown continuum " + a.continuum);
    for (const auto& v : validate_application(a.app)) out.push_back("application " + id + ": " + v);
    if (!t.find_zone(a.app.requirements.user_zone))
      out.push_back("application " + id + ": unknown zone " + a.app.requirements.user_zone);
    if (a.app.requirements.data_locality)
      for (const auto& z : *a.app.requirements.data_locality)
        if (!t.find_zone(z)) out.push_back("application " + id + ": unknown locality zone " + z);
  }

  const auto registry = LoopRegistry::builtin();
  std::set<std::string> loops;
  for (const auto& l : cfg.loops) {
    if (!loops.insert(l.id).second) out.push_back("duplicate loop id " + l.id);
  }
  for (const auto& l : cfg.loops) {
    const auto w = "loop " + l.id;
    if (l.scope && !continuums.count(*l.scope)) out.push_back(w + ": unknown scope " + *l.scope);
    if (l.parent && !loops.count(*l.parent)) out.push_back(w + ": unknown parent " + *l.parent);
    if (!registry.analyzers.count(l.analyzer)) out.push_back(w + ": unknown analyzer " + l.analyzer);
    auto pit = registry.policies.find(l.policy.id);
    if (pit == registry.policies.end()) {
      out.push_back(w + ": unknown policy " + l.policy.id);
    } else {
      collect(out, [&] { pit->second.validate(l); });
    }
    if (l.trigger.kind == Trigger::Kind::Periodic && l.trigger.every < 1)
      out.push_back(w + ": trigger period must be >= 1");
    if (l.trigger.kind == Trigger::Kind::OnEvent && !parse_event_kind(l.trigger.event))
      out.push_back(w + ": unknown trigger event " + l.trigger.event);
    for (const auto& target : l.targets) {
      if (auto q = parse_quota_entity(target)) {
        if (!continuums.count(q->continuum) || !t.find_segment(q->segment))
          out.push_back(w + ": unknown target " + target);
        else if (l.scope && q->continuum != *l.scope)
          out.push_back(w + ": target " + target + " is outside scope " + *l.scope);
      } else if (auto a = parse_app_entity(target)) {
        if (!apps.count(*a))
          out.push_back(w + ": unknown target " + target);
        else if (l.scope && app_continuum.at(*a) != *l.scope)
          out.push_back(w + ": target " + target + " is outside scope " + *l.scope);
      } else {
        out.push_back(w + ": unknown target " + target);
      }
    }
    for (const auto& m : l.monitors) {
      if (auto q = parse_quota_entity(m.source)) {
        if (!continuums.count(q->continuum) || !t.find_segment(q->segment))
          out.push_back(w + ": unknown monitor source " + m.source);
      } else if (auto a = parse_app_entity(m.source)) {
        if (!apps.count(*a)) out.push_back(w + ": unknown monitor source " + m.source);
      } else if (m.source.rfind("segment/", 0) == 0) {
        if (!t.find_segment(m.source.substr(8))) out.push_back(w + ": unknown monitor source " + m.source);
      } else {
        out.push_back(w + ": unknown monitor source " + m.source);
      }
    }
  }
  if (auto cycle = find_nesting_cycle(cfg.loops); !cycle.empty()) {
    std::string ids;
    for (const auto& c : cycle) ids += (ids.empty() ? "" : " -> ") + c;
    out.push_back("loop nesting cycle: " + ids);
  }

  for (const auto& e : cfg.events) {
    const auto w = "event " + std::string(to_string(e.kind)) + "@" + std::to_string(e.tick);
    if (e.tick < 0 || e.tick >= cfg.horizon) out.push_back(w + ": tick outside horizon");
    switch (e.kind) {
      case EventKind::UserMobility:
        if (!t.find_zone(e.from_zone)) out.push_back(w + ": unknown zone " + e.from_zone);
        if (!t.find_zone(e.to_zone)) out.push_back(w + ": unknown zone " + e.to_zone);
        if (!e.app.empty() && !apps.count(e.app)) out.push_back(w + ": unknown application " + e.app);
        break;
      case EventKind::MaintenanceShutdown:
        if (!t.find_segment(e.segment)) out.push_back(w + ": unknown segment " + e.segment);
        if (e.duration < 1) out.push_back(w + ": duration must be >= 1");
        break;
      case EventKind::LoadSurge:
        if (!apps.count(e.app)) out.push_back(w + ": unknown application " + e.app);
        if (!(e.factor >= 1.0)) out.push_back(w + ": factor must be >= 1");
        break;
      case EventKind::SegmentFailure:
        if (!t.find_segment(e.segment)) out.push_back(w + ": unknown segment " + e.segment);
        break;
    }
  }

  std::set<std::string> ees_ids;
  for (const auto& e : cfg.ees) {
    const auto w = "ees " + e.record.id;
    if (!ees_ids.insert(e.record.id).second) out.push_back("duplicate EES id " + e.record.id);
    if (!continuums.count(e.continuum)) out.push_back(w + ": unknown continuum " + e.continuum);
    if (!t.find_segment(e.record.segment)) out.push_back(w + ": unknown segment " + e.record.segment);
    if (!t.find_stakeholder(e.actor)) out.push_back(w + ": unknown actor " + e.actor);
  }
  std::set<std::string> eas_ids;
  for (const auto& e : cfg.eas) {
    const auto w = "eas " + e.record.id;
    if (!eas_ids.insert(e.record.id).second) out.push_back("duplicate EAS id " + e.record.id);
    if (!ees_ids.count(e.ees)) out.push_back(w + ": unknown EES " + e.ees);
    if (!t.find_segment(e.record.segment)) out.push_back(w + ": unknown segment " + e.record.segment);
    if (!t.find_stakeholder(e.actor)) out.push_back(w + ": unknown actor " + e.actor);
  }
  return out;
}

ScenarioConfig parse_scenario(const json& j) {
  std::vector<std::string> errors;
  ScenarioConfig cfg;
  try {
    check_keys(j, {"topology", "scenario", "continuums", "applications", "loops", "events", "exposure",
                   "horizon", "seed", "settings"},
               "scenario file");
  } catch (const Error& e) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, e.what(), {e.what()});
    errors.push_back(e.what());
  }
  const std::size_t key_errors = errors.size();
  collect(errors, [&] { cfg.topology = required<Topology>(j, "topology", "scenario file"); });
  collect(errors, [&] { cfg.scenario = parse_business_scenario(required<json>(j, "scenario", "scenario file")); });
  for (const auto& c : optional<json>(j, "continuums", json::array(), "scenario file"))
    collect(errors, [&] { cfg.continuums.push_back(parse_continuum(c, cfg.scenario)); });
  for (const auto& a : optional<json>(j, "applications", json::array(), "scenario file"))
    collect(errors, [&] { cfg.applications.push_back(parse_application(a)); });
  for (const auto& l : optional<json>(j, "loops", json::array(), "scenario file"))
    collect(errors, [&] { cfg.loops.push_back(l.get<ClosedLoopSpec>()); });
  for (const auto& e : optional<json>(j, "events", json::array(), "scenario file"))
    collect(errors, [&] { cfg.events.push_back(parse_event(e)); });
  collect(errors, [&] {
    const auto ex = optional<json>(j, "exposure", json::object(), "scenario file");
    check_keys(ex, {"ees", "eas"}, "exposure");
    for (const auto& e : optional<json>(ex, "ees", json::array(), "exposure")) {
      check_keys(e, {"id", "actor", "continuum", "segment", "capabilities"}, "exposure ees");
      EesConfig c;
      c.actor = required<std::string>(e, "actor", "exposure ees");
      c.continuum = required<std::string>(e, "continuum", "exposure ees");
      c.record.id = required<std::string>(e, "id", "exposure ees");
      c.record.segment = required<std::string>(e, "segment", "exposure ees");
      c.record.capabilities = optional<std::set<std::string>>(e, "capabilities", {}, "exposure ees");
      cfg.ees.push_back(c);
    }
    for (const auto& e : optional<json>(ex, "eas", json::array(), "exposure")) {
      check_keys(e, {"id", "actor", "ees", "segment", "capabilities", "app"}, "exposure eas");
      EasConfig c;
      c.actor = required<std::string>(e, "actor", "exposure eas");
      c.ees = required<std::string>(e, "ees", "exposure eas");
      c.record.id = required<std::string>(e, "id", "exposure eas");
      c.record.segment = required<std::string>(e, "segment", "exposure eas");
      c.record.capabilities = optional<std::set<std::string>>(e, "capabilities", {}, "exposure eas");
      c.record.app = optional<std::string>(e, "app", "", "exposure eas");
      cfg.eas.push_back(c);
    }
  });
  collect(errors, [&] { cfg.horizon = required<std::int64_t>(j, "horizon", "scenario file"); });
  collect(errors, [&] { cfg.seed = optional<std::uint64_t>(j, "seed", 0, "scenario file"); });
  collect(errors, [&] {
    cfg.settings = parse_settings(optional<json>(j, "settings", json::object(), "scenario file"));
  });
  // Semantic checks need a fully parsed structure; unknown top-level keys do not prevent that.
  if (errors.size() == key_errors)
    for (auto& v : validate_config(cfg)) errors.push_back(std::move(v));
  if (!errors.empty()) {
    std::string msg = "invalid scenario (" + std::to_string(errors.size()) + " violation" +
                      (errors.size() == 1 ? "" : "s") + "): " + errors.front();
    throw Error(ErrorCode::ValidationError, msg, errors);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(json_io::read_file(path));
}

}  // namespace aiora
