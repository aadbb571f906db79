#include "aiora/json_io.hpp"

#include <fstream>
#include <sstream>

namespace aiora {

using nlohmann::json;

namespace json_io {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw Error(ErrorCode::ValidationError, std::string(what) + ": expected an object");
  std::vector<std::string> unknown;
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = std::string(what) + ": unknown key";
    for (const auto& k : unknown) msg += " " + k;
    throw Error(ErrorCode::ValidationError, msg, unknown);
  }
}

json parse(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void write_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Topology load_topology(const std::filesystem::path& path) {
  return read_file(path).get<Topology>();
}

ApplicationDescriptor load_application(const std::filesystem::path& path) {
  return read_file(path).get<ApplicationDescriptor>();
}

ObjectiveWeights load_weights(const std::filesystem::path& path) {
  return read_file(path).get<ObjectiveWeights>();
}

std::vector<TelemetryRecord> parse_telemetry_lines(const std::string& jsonl) {
  std::vector<TelemetryRecord> out;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse(line, "telemetry line " + std::to_string(n)).get<TelemetryRecord>());
  }
  return out;
}

}  // namespace json_io

namespace {

using json_io::check_keys;
using json_io::maybe;
using json_io::optional;
using json_io::required;

template <class E, class F>
E enum_field(const json& j, const char* key, std::string_view what, F parse_fn) {
  const auto s = required<std::string>(j, key, what);
  auto v = parse_fn(s);
  if (!v) throw Error(ErrorCode::ValidationError, std::string(what) + "." + key + ": unknown value " + s);
  return *v;
}

template <class E, class F>
E enum_field_or(const json& j, const char* key, E fallback, std::string_view what, F parse_fn) {
  if (!j.contains(key)) return fallback;
  return enum_field<E>(j, key, what, parse_fn);
}

std::string where(std::string_view kind, const json& j) {
  if (j.is_object() && j.contains("id") && j.at("id").is_string())
    return std::string(kind) + " " + j.at("id").get<std::string>();
  return std::string(kind);
}

std::optional<ReservationState> parse_reservation_state(std::string_view s) {
  if (s == "Held") return ReservationState::Held;
  if (s == "Released") return ReservationState::Released;
  return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "Local") return Provenance::Local;
  if (s == "ExternalTwin") return Provenance::ExternalTwin;
  return std::nullopt;
}

std::string_view status_name(SegmentStatus s) {
  switch (s) {
    case SegmentStatus::Up: return "Up";
    case SegmentStatus::Draining: return "Draining";
    case SegmentStatus::Failed: return "Failed";
  }
  return "?";
}

}  // namespace

void to_json(json& j, const ResourceVector& v) {
  j = {{"cpu", v.cpu}, {"memory", v.memory}, {"storage", v.storage}, {"bandwidth", v.bandwidth}};
}

void from_json(const json& j, ResourceVector& v) {
  check_keys(j, {"cpu", "memory", "storage", "bandwidth"}, "resource vector");
  v.cpu = optional<std::int64_t>(j, "cpu", 0, "resource vector");
  v.memory = optional<std::int64_t>(j, "memory", 0, "resource vector");
  v.storage = optional<std::int64_t>(j, "storage", 0, "resource vector");
  v.bandwidth = optional<std::int64_t>(j, "bandwidth", 0, "resource vector");
}

void to_json(json& j, const Agreement& v) { j = {{"peer", v.peer}, {"fraction", v.fraction}}; }

void from_json(const json& j, Agreement& v) {
  check_keys(j, {"peer", "fraction"}, "agreement");
  v.peer = required<std::string>(j, "peer", "agreement");
  v.fraction = required<double>(j, "fraction", "agreement");
}

void to_json(json& j, const StakeholderDescriptor& v) {
  j = {{"id", v.id}, {"role", to_string(v.role)}, {"agreements", v.agreements}};
}

void from_json(const json& j, StakeholderDescriptor& v) {
  const auto w = where("stakeholder", j);
  check_keys(j, {"id", "role", "agreements"}, w);
  v.id = required<std::string>(j, "id", w);
  v.role = enum_field<StakeholderRole>(j, "role", w, parse_stakeholder_role);
  v.agreements = optional<std::vector<Agreement>>(j, "agreements", {}, w);
}

void to_json(json& j, const SegmentDescriptor& v) {
  j = {{"id", v.id},
       {"owner", v.owner},
       {"kind", to_string(v.kind)},
       {"capacity", v.capacity},
       {"power_idle_w", v.power_idle_w},
       {"power_max_w", v.power_max_w},
       {"carbon_intensity", v.carbon_intensity},
       {"zone", v.zone},
       {"unit_cost", v.unit_cost}};
}

void from_json(const json& j, SegmentDescriptor& v) {
  const auto w = where("segment", j);
  check_keys(j, {"id", "owner", "kind", "capacity", "power_idle_w", "power_max_w", "carbon_intensity",
                 "zone", "unit_cost"},
             w);
  v.id = required<std::string>(j, "id", w);
  v.owner = required<std::string>(j, "owner", w);
  v.kind = enum_field<SegmentKind>(j, "kind", w, parse_segment_kind);
  v.capacity = required<ResourceVector>(j, "capacity", w);
  v.power_idle_w = optional<double>(j, "power_idle_w", 0.0, w);
  v.power_max_w = optional<double>(j, "power_max_w", 0.0, w);
  v.carbon_intensity = optional<double>(j, "carbon_intensity", 0.0, w);
  v.zone = optional<std::string>(j, "zone", "", w);
  v.unit_cost = optional<double>(j, "unit_cost", 0.0, w);
}

void to_json(json& j, const LinkDescriptor& v) {
  j = {{"endpoints", {v.a, v.b}}, {"latency_ms", v.latency_ms}, {"bandwidth", v.bandwidth}};
}

void from_json(const json& j, LinkDescriptor& v) {
  check_keys(j, {"endpoints", "latency_ms", "bandwidth"}, "link");
  const auto ends = required<std::vector<std::string>>(j, "endpoints", "link");
  if (ends.size() != 2) throw Error(ErrorCode::ValidationError, "link: endpoints must list two segments");
  v.a = ends[0];
  v.b = ends[1];
  const auto w = "link " + v.a + "-" + v.b;
  v.latency_ms = required<double>(j, "latency_ms", w);
  v.bandwidth = optional<std::int64_t>(j, "bandwidth", 0, w);
}

void to_json(json& j, const ZoneAccess& v) { j = {{"segment", v.segment}, {"latency_ms", v.latency_ms}}; }

void from_json(const json& j, ZoneAccess& v) {
  check_keys(j, {"segment", "latency_ms"}, "zone access");
  v.segment = required<std::string>(j, "segment", "zone access");
  v.latency_ms = required<double>(j, "latency_ms", "zone access");
}

void to_json(json& j, const ZoneDescriptor& v) { j = {{"id", v.id}, {"access", v.access}}; }

void from_json(const json& j, ZoneDescriptor& v) {
  const auto w = where("zone", j);
  check_keys(j, {"id", "access"}, w);
  v.id = required<std::string>(j, "id", w);
  v.access = optional<std::vector<ZoneAccess>>(j, "access", {}, w);
}

void to_json(json& j, const Topology& v) {
  j = {{"stakeholders", v.stakeholders}, {"segments", v.segments}, {"links", v.links}, {"zones", v.zones}};
}

void from_json(const json& j, Topology& v) {
  check_keys(j, {"stakeholders", "segments", "links", "zones"}, "topology");
  v.stakeholders = optional<std::vector<StakeholderDescriptor>>(j, "stakeholders", {}, "topology");
  v.segments = optional<std::vector<SegmentDescriptor>>(j, "segments", {}, "topology");
  v.links = optional<std::vector<LinkDescriptor>>(j, "links", {}, "topology");
  v.zones = optional<std::vector<ZoneDescriptor>>(j, "zones", {}, "topology");
}

void to_json(json& j, const Reservation& v) {
  j = {{"id", v.id},
       {"continuum", v.continuum},
       {"segment", v.segment},
       {"amount", v.amount},
       {"state", v.state == ReservationState::Held ? "Held" : "Released"}};
}

void from_json(const json& j, Reservation& v) {
  const auto w = where("reservation", j);
  check_keys(j, {"id", "continuum", "segment", "amount", "state"}, w);
  v.id = required<std::string>(j, "id", w);
  v.continuum = required<std::string>(j, "continuum", w);
  v.segment = required<std::string>(j, "segment", w);
  v.amount = required<ResourceVector>(j, "amount", w);
  v.state = enum_field<ReservationState>(j, "state", w, parse_reservation_state);
}

void to_json(json& j, const BlockingConstraint& v) { j = {{"kind", v.kind}, {"detail", v.detail}}; }

void to_json(json& j, const SegmentUsage& v) {
  j = {{"capacity", v.capacity}, {"held", v.held}, {"residual", v.residual}};
}

void to_json(json& j, const ComponentSpec& v) {
  j = {{"id", v.id}, {"demand", v.demand}, {"role", to_string(v.role)}};
  if (!v.colocation.empty()) j["colocation"] = v.colocation;
  if (!v.anti_affinity.empty()) j["anti_affinity"] = v.anti_affinity;
}

void from_json(const json& j, ComponentSpec& v) {
  const auto w = where("component", j);
  check_keys(j, {"id", "demand", "role", "colocation", "anti_affinity"}, w);
  v.id = required<std::string>(j, "id", w);
  v.demand = required<ResourceVector>(j, "demand", w);
  v.role = enum_field_or<ComponentRole>(j, "role", ComponentRole::Generic, w, parse_component_role);
  v.colocation = optional<std::vector<std::string>>(j, "colocation", {}, w);
  v.anti_affinity = optional<std::vector<std::string>>(j, "anti_affinity", {}, w);
}

void to_json(json& j, const ServiceRequirements& v) {
  j = {{"user_zone", v.user_zone},
       {"max_latency_ms", v.max_latency_ms},
       {"min_throughput", v.min_throughput},
       {"availability", to_string(v.availability)}};
  if (v.data_locality) j["data_locality"] = *v.data_locality;
  if (v.carbon_cap) j["carbon_cap"] = *v.carbon_cap;
}

void from_json(const json& j, ServiceRequirements& v) {
  check_keys(j, {"user_zone", "max_latency_ms", "min_throughput", "data_locality", "carbon_cap",
                 "availability"},
             "requirements");
  v.user_zone = required<std::string>(j, "user_zone", "requirements");
  v.max_latency_ms = required<double>(j, "max_latency_ms", "requirements");
  v.min_throughput = optional<std::int64_t>(j, "min_throughput", 0, "requirements");
  v.data_locality = maybe<std::vector<std::string>>(j, "data_locality", "requirements");
  v.carbon_cap = maybe<double>(j, "carbon_cap", "requirements");
  v.availability = enum_field_or<AvailabilityClass>(j, "availability", AvailabilityClass::BestEffort,
                                                    "requirements", parse_availability_class);
}

void to_json(json& j, const ApplicationDescriptor& v) {
  j = {{"id", v.id}, {"provider", v.provider}, {"components", v.components}, {"requirements", v.requirements}};
}

void from_json(const json& j, ApplicationDescriptor& v) {
  const auto w = where("application", j);
  check_keys(j, {"id", "provider", "components", "requirements"}, w);
  v.id = required<std::string>(j, "id", w);
  v.provider = optional<std::string>(j, "provider", "", w);
  v.components = required<std::vector<ComponentSpec>>(j, "components", w);
  v.requirements = required<ServiceRequirements>(j, "requirements", w);
}

void to_json(json& j, const ObjectiveWeights& v) {
  j = {{"latency", v.latency}, {"energy", v.energy}, {"carbon", v.carbon}, {"cost", v.cost}};
  if (v.latency_norm) j["latency_norm"] = *v.latency_norm;
  if (v.energy_norm) j["energy_norm"] = *v.energy_norm;
  if (v.carbon_norm) j["carbon_norm"] = *v.carbon_norm;
  if (v.cost_norm) j["cost_norm"] = *v.cost_norm;
}

void from_json(const json& j, ObjectiveWeights& v) {
  check_keys(j, {"latency", "energy", "carbon", "cost", "latency_norm", "energy_norm", "carbon_norm",
                 "cost_norm"},
             "weights");
  v.latency = optional<double>(j, "latency", 0.0, "weights");
  v.energy = optional<double>(j, "energy", 0.0, "weights");
  v.carbon = optional<double>(j, "carbon", 0.0, "weights");
  v.cost = optional<double>(j, "cost", 0.0, "weights");
  v.latency_norm = maybe<double>(j, "latency_norm", "weights");
  v.energy_norm = maybe<double>(j, "energy_norm", "weights");
  v.carbon_norm = maybe<double>(j, "carbon_norm", "weights");
  v.cost_norm = maybe<double>(j, "cost_norm", "weights");
  if (!v.valid()) throw Error(ErrorCode::ValidationError, "weights: must be non-negative with a positive sum");
}

void to_json(json& j, const CostBreakdown& v) {
  j = {{"latency_ms", v.latency_ms},
       {"energy_watts", v.energy_watts},
       {"carbon_g_per_h", v.carbon_g_per_h},
       {"money_per_h", v.money_per_h},
       {"scalar", v.scalar}};
}

void to_json(json& j, const PlacementPlan& v) { j = {{"assignment", v.assignment}, {"cost", v.cost}}; }

json placement_result_json(const PlacementResult& r) {
  json j = {{"feasible", r.feasible()}};
  if (r.plan) j["plan"] = *r.plan;
  j["blocking"] = r.blocking;
  return j;
}

void to_json(json& j, const Action& v) {
  j = {{"kind", to_string(v.kind)}};
  switch (v.kind) {
    case ActionKind::ScaleUp:
    case ActionKind::ScaleDown:
      j["amount"] = v.amount;
      break;
    case ActionKind::Migrate:
      j["component"] = v.component;
      j["segment"] = v.segment;
      break;
    case ActionKind::Reconfigure:
      j["key"] = v.key;
      j["value"] = v.value;
      break;
    case ActionKind::NegotiateQuality:
      j["app"] = v.app;
      if (v.relaxed) j["relaxed"] = *v.relaxed;
      break;
  }
}

void from_json(const json& j, Action& v) {
  check_keys(j, {"kind", "amount", "component", "segment", "key", "value", "app", "relaxed"}, "action");
  v.kind = enum_field<ActionKind>(j, "kind", "action", parse_action_kind);
  v.amount = optional<ResourceVector>(j, "amount", {}, "action");
  v.component = optional<std::string>(j, "component", "", "action");
  v.segment = optional<std::string>(j, "segment", "", "action");
  v.key = optional<std::string>(j, "key", "", "action");
  v.value = optional<std::string>(j, "value", "", "action");
  v.app = optional<std::string>(j, "app", "", "action");
  v.relaxed = maybe<ServiceRequirements>(j, "relaxed", "action");
}

void to_json(json& j, const ActuationProposal& v) {
  j = {{"id", v.id},
       {"loop_id", v.loop_id},
       {"target", v.target},
       {"action", v.action},
       {"expected_effect", {{"metric", v.expected_effect.metric}, {"delta", v.expected_effect.delta}}},
       {"priority", v.priority},
       {"tick", v.tick}};
}

void from_json(const json& j, ActuationProposal& v) {
  const auto w = where("proposal", j);
  check_keys(j, {"id", "loop_id", "target", "action", "expected_effect", "priority", "tick"}, w);
  v.id = required<std::string>(j, "id", w);
  v.loop_id = optional<std::string>(j, "loop_id", "", w);
  v.target = required<std::string>(j, "target", w);
  v.action = required<Action>(j, "action", w);
  if (j.contains("expected_effect")) {
    const auto& e = j.at("expected_effect");
    check_keys(e, {"metric", "delta"}, "expected_effect");
    v.expected_effect.metric = optional<std::string>(e, "metric", "", "expected_effect");
    v.expected_effect.delta = optional<double>(e, "delta", 0.0, "expected_effect");
  }
  v.priority = optional<int>(j, "priority", 0, w);
  v.tick = optional<std::int64_t>(j, "tick", 0, w);
}

void to_json(json& j, const TelemetryRecord& v) {
  j = {{"tick", v.tick},       {"source", v.source}, {"metric", v.metric},
       {"value", v.value},     {"unit", v.unit},     {"provenance", to_string(v.provenance)}};
}

void from_json(const json& j, TelemetryRecord& v) {
  check_keys(j, {"tick", "source", "metric", "value", "unit", "provenance"}, "telemetry");
  v.tick = required<std::int64_t>(j, "tick", "telemetry");
  v.source = required<std::string>(j, "source", "telemetry");
  v.metric = required<std::string>(j, "metric", "telemetry");
  v.value = required<double>(j, "value", "telemetry");
  v.unit = optional<std::string>(j, "unit", "", "telemetry");
  v.provenance = enum_field_or<Provenance>(j, "provenance", Provenance::Local, "telemetry", parse_provenance);
}

void to_json(json& j, const TwinSnapshot& v) {
  j = json::object();
  j["tick"] = v.tick;
  auto& segs = j["segments"] = json::object();
  for (const auto& [id, s] : v.segments) {
    segs[id] = {{"utilization", s.utilization},
                {"reserved_fraction", s.reserved_fraction},
                {"power_w", s.power_w},
                {"carbon_g_per_h", s.carbon_g_per_h},
                {"status", status_name(s.status)},
                {"provenance", to_string(s.provenance)}};
  }
  auto& apps = j["apps"] = json::object();
  for (const auto& [id, a] : v.apps) {
    apps[id] = {{"latency_ms", a.latency_ms},
                {"throughput_mbps", a.throughput_mbps},
                {"ready_instances", a.ready_instances},
                {"provenance", to_string(a.provenance)}};
  }
  auto& quotas = j["quotas"] = json::object();
  for (const auto& [id, q] : v.quotas) {
    quotas[id] = {{"utilization", q.utilization},
                  {"quota_cpu", q.quota_cpu},
                  {"provenance", to_string(q.provenance)}};
  }
  auto& deps = j["deployments"] = json::object();
  for (const auto& [id, d] : v.deployments) {
    json comps = json::object();
    for (const auto& [cid, c] : d.components) comps[cid] = c.segment;
    deps[id] = {{"continuum", d.continuum}, {"user_zone", d.user_zone}, {"components", comps}};
  }
  j["saturated"] = v.saturated;
}

void to_json(json& j, const ClosedLoopSpec& v) {
  j = {{"id", v.id},
       {"analyzer", v.analyzer},
       {"policy", {{"id", v.policy.id}, {"params", v.policy.params}}},
       {"targets", v.targets},
       {"priority", v.priority}};
  j["scope"] = v.scope ? json(*v.scope) : json(nullptr);
  json monitors = json::array();
  for (const auto& m : v.monitors) monitors.push_back({{"source", m.source}, {"metric", m.metric}});
  j["monitors"] = monitors;
  if (v.trigger.kind == Trigger::Kind::Periodic)
    j["trigger"] = {{"every", v.trigger.every}};
  else
    j["trigger"] = {{"on_event", v.trigger.event}};
  if (v.parent) j["parent"] = *v.parent;
}

void from_json(const json& j, ClosedLoopSpec& v) {
  const auto w = where("loop", j);
  check_keys(j, {"id", "scope", "monitors", "analyzer", "policy", "targets", "trigger", "parent", "priority"}, w);
  v.id = required<std::string>(j, "id", w);
  v.scope = maybe<std::string>(j, "scope", w);
  v.monitors.clear();
  for (const auto& m : optional<json>(j, "monitors", json::array(), w)) {
    check_keys(m, {"source", "metric"}, w + " monitor");
    v.monitors.push_back({required<std::string>(m, "source", w), required<std::string>(m, "metric", w)});
  }
  v.analyzer = optional<std::string>(j, "analyzer", "latest", w);
  const auto policy = required<json>(j, "policy", w);
  check_keys(policy, {"id", "params"}, w + " policy");
  v.policy.id = required<std::string>(policy, "id", w + " policy");
  v.policy.params = optional<json>(policy, "params", json::object(), w + " policy");
  v.targets = required<std::vector<std::string>>(j, "targets", w);
  v.trigger = Trigger{};
  if (j.contains("trigger")) {
    const auto& t = j.at("trigger");
    check_keys(t, {"every", "on_event"}, w + " trigger");
    if (t.contains("every") == t.contains("on_event"))
      throw Error(ErrorCode::ValidationError, w + " trigger: give exactly one of every / on_event");
    if (t.contains("every")) {
      v.trigger.every = required<std::int64_t>(t, "every", w + " trigger");
    } else {
      v.trigger.kind = Trigger::Kind::OnEvent;
      v.trigger.event = required<std::string>(t, "on_event", w + " trigger");
    }
  }
  v.parent = maybe<std::string>(j, "parent", w);
  v.priority = optional<int>(j, "priority", 0, w);
}

void to_json(json& j, const Conflict& v) {
  j = {{"a", v.a}, {"b", v.b}, {"kind", to_string(v.kind)}, {"detail", v.detail}};
}

void to_json(json& j, const ConflictReport& v) { j = v.conflicts; }

void to_json(json& j, const CoordinationDecision& v) {
  json deferred = json::array();
  for (const auto& d : v.deferred)
    deferred.push_back({{"id", d.id}, {"blocking", d.blocking}, {"reason", d.reason}});
  json negotiations = json::array();
  for (const auto& n : v.negotiations) negotiations.push_back(n.id);
  j = {{"accepted", v.accepted}, {"deferred", deferred}, {"negotiations", negotiations}};
}

void to_json(json& j, const RequirementsPatch& v) {
  j = json::object();
  if (v.max_latency_ms) j["max_latency_ms"] = *v.max_latency_ms;
  if (v.max_latency_factor) j["max_latency_factor"] = *v.max_latency_factor;
  if (v.carbon_cap) j["carbon_cap"] = *v.carbon_cap;
  if (v.drop_carbon_cap) j["drop_carbon_cap"] = true;
  if (v.min_throughput) j["min_throughput"] = *v.min_throughput;
  if (v.drop_data_locality) j["drop_data_locality"] = true;
}

void from_json(const json& j, RequirementsPatch& v) {
  check_keys(j, {"max_latency_ms", "max_latency_factor", "carbon_cap", "drop_carbon_cap", "min_throughput",
                 "drop_data_locality"},
             "ladder rung");
  v.max_latency_ms = maybe<double>(j, "max_latency_ms", "ladder rung");
  v.max_latency_factor = maybe<double>(j, "max_latency_factor", "ladder rung");
  v.carbon_cap = maybe<double>(j, "carbon_cap", "ladder rung");
  v.drop_carbon_cap = optional<bool>(j, "drop_carbon_cap", false, "ladder rung");
  v.min_throughput = maybe<std::int64_t>(j, "min_throughput", "ladder rung");
  v.drop_data_locality = optional<bool>(j, "drop_data_locality", false, "ladder rung");
  if (v.max_latency_factor && !(*v.max_latency_factor > 0.0))
    throw Error(ErrorCode::ValidationError, "ladder rung: max_latency_factor must be positive");
}

void to_json(json& j, const NegotiationOutcome& v) {
  json attempts = json::array();
  for (const auto& a : v.attempts)
    attempts.push_back({{"rung", a.rung}, {"requirements", a.requirements}, {"feasible", a.feasible},
                        {"blocking", a.blocking}});
  j = {{"accepted", v.accepted}, {"rung", v.rung}, {"initial_blocking", v.initial_blocking},
       {"attempts", attempts}};
  if (v.requirements) j["requirements"] = *v.requirements;
  if (v.plan) j["plan"] = *v.plan;
}

}  // namespace aiora
