#include "aiora/northbound.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "aiora/json_io.hpp"

namespace aiora {

using nlohmann::json;
using json_io::check_keys;
using json_io::maybe;
using json_io::optional;
using json_io::required;

namespace {

std::string percent_decode(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out += ' ';
    } else if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
               std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

ApiResponse error_response(const Error& e) {
  const int status = http_status(e.code());
  json body = {{"error", status == 403 ? "Forbidden" : std::string(to_string(e.code()))},
               {"reason", e.what()}};
  if (!e.details().empty()) body["details"] = e.details();
  return {status, body};
}

ApiResponse forbidden(const std::string& reason) {
  return {403, {{"error", "Forbidden"}, {"reason", reason}}};
}

std::vector<std::string> known_ids(const Topology& t) {
  std::vector<std::string> ids;
  for (const auto& s : t.stakeholders) ids.push_back(s.id);
  return ids;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  return json_io::parse(body, "request body");
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string p;
  while (std::getline(ss, p, '/'))
    if (!p.empty()) parts.push_back(p);
  return parts;
}

json ees_json(const EESRecord& r) {
  return {{"id", r.id}, {"continuum", r.continuum}, {"segment", r.segment},
          {"capabilities", r.capabilities}, {"registered_by", r.registered_by}};
}

json eas_json(const EASRecord& r) {
  json j = {{"id", r.id}, {"ees", r.ees}, {"segment", r.segment},
            {"capabilities", r.capabilities}, {"registered_by", r.registered_by}};
  if (!r.app.empty()) j["app"] = r.app;
  return j;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::BadParams:
      return 400;
    case ErrorCode::Unauthorized:
    case ErrorCode::UnauthorizedScenario:
      return 403;
    case ErrorCode::UnknownSegment:
    case ErrorCode::UnknownStakeholder:
    case ErrorCode::UnknownContinuum:
    case ErrorCode::UnknownApplication:
    case ErrorCode::UnknownComponent:
    case ErrorCode::UnknownReservation:
    case ErrorCode::UnknownEntity:
    case ErrorCode::UnknownZone:
    case ErrorCode::UnknownEES:
    case ErrorCode::UnknownLoop:
      return 404;
    case ErrorCode::Infeasible:
    case ErrorCode::InsufficientCapacity:
    case ErrorCode::AgreementExceeded:
    case ErrorCode::ContinuumNotActive:
    case ErrorCode::DuplicateId:
    case ErrorCode::DuplicateSegment:
    case ErrorCode::IllegalTransition:
    case ErrorCode::PlanesIncomplete:
    case ErrorCode::SegmentBusy:
    case ErrorCode::AlreadyReleased:
    case ErrorCode::NoLadderDeclared:
      return 409;
    default:
      return 500;
  }
}

ApiRequest ApiRequest::make(std::string method, const std::string& target, std::string body,
                            std::string stakeholder) {
  ApiRequest r;
  r.method = std::move(method);
  r.body = std::move(body);
  const auto q = target.find('?');
  r.path = target.substr(0, q);
  if (q != std::string::npos) {
    std::stringstream ss(target.substr(q + 1));
    std::string pair;
    while (std::getline(ss, pair, '&')) {
      if (pair.empty()) continue;
      const auto eq = pair.find('=');
      r.query[percent_decode(pair.substr(0, eq))] =
          eq == std::string::npos ? "" : percent_decode(pair.substr(eq + 1));
    }
  }
  if (!stakeholder.empty()) r.headers["X-Stakeholder-Id"] = std::move(stakeholder);
  return r;
}

ApiResponse NorthboundApi::handle(const ApiRequest& request) {
  std::string actor;
  bool has_actor = false;
  for (const auto& [k, v] : request.headers) {
    if (lower(k) == "x-stakeholder-id") {
      actor = v;
      has_actor = true;
    }
  }
  if (!has_actor) return {400, {{"error", "BadRequest"}, {"reason", "missing X-Stakeholder-Id header"}}};
  const auto& topo = sim_.config().topology;
  if (!topo.find_stakeholder(actor)) return forbidden("unknown stakeholder");

  const auto parts = split_path(request.path);
  auto route = [&](const char* method, std::initializer_list<const char*> pattern) {
    if (parts.size() != pattern.size()) return false;
    std::size_t i = 0;
    for (const char* p : pattern) {
      if (std::string(p) != "*" && parts[i] != p) return false;
      ++i;
    }
    return request.method == method;
  };
  auto path_known = [&] {
    return (parts.size() == 1 && (parts[0] == "continuums" || parts[0] == "ees" || parts[0] == "eas")) ||
           (parts.size() == 3 && parts[0] == "continuums" && parts[2] == "apps") ||
           (parts.size() == 2 && ((parts[0] == "ecs" && parts[1] == "provision") ||
                                  (parts[0] == "twin" && parts[1] == "snapshot") ||
                                  (parts[0] == "broker" && parts[1] == "utilization")));
  };

  try {
    if (route("POST", {"continuums"})) return post_continuum(actor, parse_body(request.body));
    if (route("POST", {"continuums", "*", "apps"})) return post_app(actor, parts[1], parse_body(request.body));
    if (route("POST", {"ees"})) return post_ees(actor, parse_body(request.body));
    if (route("POST", {"eas"})) return post_eas(actor, parse_body(request.body));
    if (route("GET", {"ecs", "provision"})) return get_provision(request);
    if (route("GET", {"eas"})) return get_eas(request);
    if (route("GET", {"twin", "snapshot"})) return get_snapshot();
    if (route("GET", {"broker", "utilization"})) return get_utilization();
  } catch (const Error& e) {
    return error_response(e);
  }
  if (path_known()) return {405, {{"error", "MethodNotAllowed"}, {"reason", request.method + " " + request.path}}};
  return {404, {{"error", "NotFound"}, {"reason", "no route for " + request.path}}};
}

ApiResponse NorthboundApi::post_continuum(const std::string& actor, const json& body) {
  check_keys(body, {"id", "scenario", "quotas", "planes"}, "continuum request");
  ContinuumRequest req;
  req.id = required<std::string>(body, "id", "continuum request");
  req.provider = actor;
  req.scenario = body.contains("scenario") ? parse_business_scenario(body.at("scenario")) : sim_.config().scenario;
  for (const auto& q : optional<json>(body, "quotas", json::array(), "continuum request")) {
    check_keys(q, {"segment", "amount"}, "quota");
    req.quotas.push_back({required<std::string>(q, "segment", "quota"), required<ResourceVector>(q, "amount", "quota")});
  }
  if (body.contains("planes")) {
    req.planes.clear();
    for (const auto& p : required<std::vector<std::string>>(body, "planes", "continuum request")) {
      auto plane = parse_plane(p);
      if (!plane) throw Error(ErrorCode::ValidationError, "unknown plane " + p);
      req.planes.insert(*plane);
    }
  }
  auto d = authorize(actor, Operation::Create, EntityClass::Continuum, req.scenario, known_ids(sim_.config().topology));
  if (!d.allowed) return forbidden(d.reason);

  const auto& c = sim_.create_continuum(req);
  json quotas = json::object();
  for (const auto& [seg, amount] : sim_.lifecycle().quotas(c.id)) quotas[seg] = amount;
  return {201, {{"id", c.id},
                {"provider", c.business_provider},
                {"state", to_string(c.state)},
                {"scenario", business_scenario_json(c.scenario)},
                {"reservations", c.quotas},
                {"quotas", quotas}}};
}

ApiResponse NorthboundApi::post_app(const std::string& actor, const std::string& continuum, const json& body) {
  check_keys(body, {"app", "weights", "ladder"}, "deploy request");
  const auto& c = sim_.lifecycle().continuum(continuum);
  auto d = authorize(actor, Operation::Deploy, EntityClass::ApplicationServer, c.scenario,
                     known_ids(sim_.config().topology));
  if (!d.allowed) return forbidden(d.reason);

  ApplicationConfig cfg;
  cfg.continuum = continuum;
  cfg.app = required<ApplicationDescriptor>(body, "app", "deploy request");
  if (auto problems = validate_application(cfg.app); !problems.empty())
    throw Error(ErrorCode::ValidationError, "application " + cfg.app.id + ": " + problems.front(), problems);
  if (body.contains("weights"))
    cfg.weights = required<ObjectiveWeights>(body, "weights", "deploy request");
  else
    cfg.weights.latency = 1.0;
  cfg.ladder = maybe<RelaxationLadder>(body, "ladder", "deploy request");

  auto result = sim_.deploy(cfg);
  const auto& dep = sim_.lifecycle().deployment(continuum, cfg.app.id);
  json out = {{"app", cfg.app.id},
              {"continuum", continuum},
              {"assignment", dep.plan.assignment},
              {"cost", dep.plan.cost},
              {"requirements", dep.app.requirements}};
  if (result.contains("negotiation")) out["negotiation"] = result.at("negotiation");
  return {201, out};
}

ApiResponse NorthboundApi::post_ees(const std::string& actor, const json& body) {
  check_keys(body, {"id", "continuum", "segment", "capabilities"}, "EES request");
  EESRecord r;
  r.id = required<std::string>(body, "id", "EES request");
  r.segment = required<std::string>(body, "segment", "EES request");
  r.capabilities = optional<std::set<std::string>>(body, "capabilities", {}, "EES request");
  const auto continuum = required<std::string>(body, "continuum", "EES request");
  return {201, ees_json(sim_.exposure().register_ees(actor, continuum, r))};
}

ApiResponse NorthboundApi::post_eas(const std::string& actor, const json& body) {
  check_keys(body, {"id", "ees", "segment", "capabilities", "app"}, "EAS request");
  EASRecord r;
  r.id = required<std::string>(body, "id", "EAS request");
  r.segment = required<std::string>(body, "segment", "EAS request");
  r.capabilities = optional<std::set<std::string>>(body, "capabilities", {}, "EAS request");
  r.app = optional<std::string>(body, "app", "", "EAS request");
  const auto ees = required<std::string>(body, "ees", "EAS request");
  return {201, eas_json(sim_.exposure().register_eas(actor, ees, r))};
}

ApiResponse NorthboundApi::get_provision(const ApiRequest& request) {
  auto it = request.query.find("zone");
  if (it == request.query.end() || it->second.empty())
    throw Error(ErrorCode::ValidationError, "query parameter zone is required");
  const auto cfg = sim_.exposure().provision_client(it->second);
  json candidates = json::array();
  for (const auto& c : cfg.candidates)
    candidates.push_back({{"ees", c.ees}, {"segment", c.segment}, {"latency_ms", c.latency_ms}});
  return {200, {{"zone", cfg.zone}, {"candidates", candidates}}};
}

ApiResponse NorthboundApi::get_eas(const ApiRequest& request) {
  auto it = request.query.find("ees");
  if (it == request.query.end() || it->second.empty())
    throw Error(ErrorCode::ValidationError, "query parameter ees is required");
  EASFilter filter;
  if (auto c = request.query.find("capability"); c != request.query.end()) {
    std::stringstream ss(c->second);
    std::string key;
    while (std::getline(ss, key, ','))
      if (!key.empty()) filter.capabilities.insert(key);
  }
  if (auto m = request.query.find("maxLatencyMs"); m != request.query.end() && !m->second.empty()) {
    try {
      std::size_t used = 0;
      filter.max_latency_ms = std::stod(m->second, &used);
      if (used != m->second.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::ValidationError, "maxLatencyMs must be a number");
    }
  }
  json list = json::array();
  for (const auto& d : sim_.exposure().discover_eas(it->second, filter)) {
    auto j = eas_json(d.record);
    j["latency_ms"] = d.latency_ms;
    list.push_back(j);
  }
  return {200, {{"ees", it->second}, {"eas", list}}};
}

ApiResponse NorthboundApi::get_snapshot() {
  if (sim_.next_tick() == 0) return {200, sim_.twin().snapshot(0)};
  return {200, sim_.last_snapshot()};
}

ApiResponse NorthboundApi::get_utilization() {
  json segs = json::object();
  for (const auto& [id, u] : sim_.broker().utilization_report()) segs[id] = u;
  return {200, {{"segments", segs}}};
}

}  // namespace aiora
