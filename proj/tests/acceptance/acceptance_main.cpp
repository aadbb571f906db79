// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aiora/broker.hpp"
#include "aiora/business_scenario.hpp"
#include "aiora/coordinator.hpp"
#include "aiora/error.hpp"
#include "aiora/json_io.hpp"
#include "aiora/lifecycle.hpp"
#include "aiora/placement.hpp"
#include "aiora/simulation.hpp"
#include "aiora/trace.hpp"
#include "support/api_goldens.hpp"
#include "support/builders.hpp"
#include "support/placement_oracle.hpp"
#include "support/random_instances.hpp"

using namespace aiora;
using namespace aiora::test;
using nlohmann::json;

namespace {

// Tolerances and sizes.
constexpr double kRelTol = 1e-9;
constexpr int kPlacementInstances = 200;
constexpr double kPlacementBudgetSeconds = 10.0;
constexpr int kMinFeasibleInstances = 50;
constexpr int kBrokerOps = 100000;
constexpr int kLifecycleSteps = 100000;
constexpr std::int64_t kBbmStartupDelay = 3;

struct Verdict {
  bool pass = false;
  std::string detail;
};

bool close_rel(double a, double b) {
  return a == b || std::fabs(a - b) <= kRelTol * std::max(std::fabs(a), std::fabs(b));
}

std::string res_id(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "res-%06llu", static_cast<unsigned long long>(n));
  return buf;
}

// ---- 1 ---------------------------------------------------------------------

Verdict placement_optimality() {
  const auto start = std::chrono::steady_clock::now();
  int feasible = 0, mismatches = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= kPlacementInstances; ++seed) {
    const auto in = random_instance(seed);
    const auto got = place(in.topology, in.available, in.app, in.weights);
    const auto want = exhaustive_place(in.topology, in.available, in.app, in.weights);
    bool ok = got.feasible() == want.assignment.has_value();
    if (ok && got.feasible()) {
      ++feasible;
      const PathOracle paths(in.topology);
      const auto rescored = oracle_score(in.topology, paths, in.available, in.app, in.weights,
                                         got.value().assignment);
      ok = rescored && close_rel(rescored->scalar, got.value().cost.scalar) &&
           close_rel(got.value().cost.scalar, want.cost.scalar);
    }
    if (!ok && mismatches++ == 0) first = "seed " + std::to_string(seed);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << kPlacementInstances << " instances, " << feasible << " feasible, " << mismatches
    << " mismatches" << (first.empty() ? "" : " (first " + first + ")") << ", " << secs << " s";
  return {mismatches == 0 && feasible >= kMinFeasibleInstances && secs < kPlacementBudgetSeconds,
          d.str()};
}

// ---- 2 ---------------------------------------------------------------------

Topology federation_topology() {
  Topology t;
  t.stakeholders.push_back({"mno", StakeholderRole::MNO, {{"edge", 0.5}}});
  t.stakeholders.push_back({"edge", StakeholderRole::EdgeProvider, {}});
  t.stakeholders.push_back({"app", StakeholderRole::AppProvider, {}});
  t.segments.push_back(segment("m0", "mno", rv(6000, 12000, 100, 1000), 100, 300, 300, "z"));
  t.segments.push_back(segment("m1", "mno", rv(4000, 8000, 60, 800), 100, 250, 200, "z"));
  t.segments.push_back(segment("m2", "mno", rv(10000, 20000, 400, 2000), 200, 700, 80, "core", 0,
                               SegmentKind::Cloud));
  t.segments.push_back(segment("e0", "edge", rv(5000, 10000, 100, 1000), 90, 260, 150, "z"));
  t.links = {{"m0", "m1", 3, 1000}, {"m1", "m2", 10, 2000}, {"m0", "e0", 4, 1000}};
  t.zones.push_back({"z", {{"m0", 2}}});
  return t;
}

ResourceVector random_amount(std::mt19937_64& rng, std::int64_t cpu_max) {
  auto u = [&](std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(0, hi)(rng); };
  return {u(cpu_max), u(cpu_max * 2), u(20), u(200)};
}

ApplicationDescriptor random_app(std::mt19937_64& rng, const std::string& id) {
  auto u = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  std::vector<ComponentSpec> comps;
  const auto n = u(1, 2);
  for (int i = 0; i < n; ++i)
    comps.push_back(component("c" + std::to_string(i), rv(u(100, 1500), u(64, 2000), u(0, 5), u(0, 50)),
                              i == 0 ? ComponentRole::EAS : ComponentRole::Generic));
  auto app = application(id, comps, "z", 1000);
  app.provider = "app";
  return app;
}

Verdict broker_conservation() {
  const auto topo = federation_topology();
  ResourceBroker broker(topo.stakeholders);
  for (const auto& s : topo.segments) broker.register_segment(s);
  LifecycleManager lm(topo, broker);
  auto scenario_c = BusinessScenario::make_c("mno", "edge", "app");
  lm.create_continuum({"vc-e", "edge", scenario_c,
                       {{"m0", rv(1500, 3000, 10, 100)}, {"m1", rv(1000, 2000, 10, 100)}, {"e0", rv(1500, 3000, 10, 100)}}});
  lm.create_continuum({"vc-m", "mno", BusinessScenario::make_a("mno"),
                       {{"m0", rv(1500, 3000, 10, 100)}, {"m2", rv(3000, 6000, 50, 200)}}});
  for (const auto* id : {"vc-e", "vc-m"}) {
    lm.transition(id, ContinuumState::Instantiated);
    lm.transition(id, ContinuumState::Active);
  }
  broker.bind_continuum("raw-e", "edge");
  broker.bind_continuum("raw-m", "mno");
  const std::map<std::string, std::string> provider_of{
      {"vc-e", "edge"}, {"vc-m", "mno"}, {"raw-e", "edge"}, {"raw-m", "mno"}};

  // Independent view: capacities and the agreement bound from the topology.
  std::map<std::string, ResourceVector> capacity;
  std::map<std::string, std::string> owner;
  ResourceVector mno_fleet;
  for (const auto& s : topo.segments) {
    capacity[s.id] = s.capacity;
    owner[s.id] = s.owner;
    if (s.owner == "mno") mno_fleet += s.capacity;
  }
  const ResourceVector bound{mno_fleet.cpu / 2, mno_fleet.memory / 2, mno_fleet.storage / 2,
                             mno_fleet.bandwidth / 2};

  std::mt19937_64 rng(20240601);
  std::map<std::string, Reservation> held;  // tracked copy of every Held reservation
  std::vector<std::string> raw_held;
  std::vector<std::pair<std::string, std::string>> deployed;  // (continuum, app)
  std::uint64_t next_probe = 1;
  std::map<std::string, int> successes;
  int app_seq = 0;
  const std::vector<std::string> segs{"m0", "m1", "m2", "e0"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  for (int op = 0; op < kBrokerOps; ++op) {
    const auto kind = std::uniform_int_distribution<int>(0, 7)(rng);
    try {
      switch (kind) {
        case 0: {
          const std::string c = pick(2) ? "raw-e" : "raw-m";
          auto r = broker.reserve(c, segs[pick(segs.size())], random_amount(rng, 2500));
          raw_held.push_back(r.id);
          ++successes["reserve"];
          break;
        }
        case 1:
        case 2:
          if (raw_held.empty()) break;
          {
            const auto i = pick(raw_held.size());
            broker.release(raw_held[i]);
            raw_held.erase(raw_held.begin() + static_cast<long>(i));
            ++successes["release"];
          }
          break;
        case 3: {
          const std::string c = pick(2) ? "vc-e" : "vc-m";
          const auto id = "app-" + std::to_string(app_seq++);
          lm.deploy_application(c, random_app(rng, id), weights(1));
          deployed.emplace_back(c, id);
          ++successes["deploy"];
          break;
        }
        case 4:
          if (deployed.empty()) break;
          {
            const auto i = pick(deployed.size());
            lm.terminate_application(deployed[i].first, deployed[i].second);
            deployed.erase(deployed.begin() + static_cast<long>(i));
            ++successes["terminate"];
          }
          break;
        case 5:
          lm.scale_quota_up(pick(2) ? "vc-e" : "vc-m", segs[pick(segs.size())], random_amount(rng, 1000));
          ++successes["scale_up"];
          break;
        case 6:
          lm.scale_quota_down(pick(2) ? "vc-e" : "vc-m", segs[pick(segs.size())], random_amount(rng, 800));
          ++successes["scale_down"];
          break;
        default:
          lm.advance_to(op);
          lm.take_events();
          break;
      }
    } catch (const Error&) {
      // Rejections are expected; the ledger must still balance.
    }

    // Pick up reservations created by this operation, then drop released ones.
    while (broker.reservations().count(res_id(next_probe))) {
      const auto& r = broker.reservation(res_id(next_probe));
      if (r.state == ReservationState::Held) held.emplace(r.id, r);
      ++next_probe;
    }
    for (auto it = held.begin(); it != held.end();) {
      if (broker.reservation(it->first).state == ReservationState::Released)
        it = held.erase(it);
      else
        ++it;
    }
    std::map<std::string, ResourceVector> sum;
    ResourceVector edge_on_mno;
    for (const auto& [id, r] : held) {
      if (r.amount != broker.reservation(id).amount || !r.amount.non_negative())
        return {false, "reservation " + id + " changed amount at op " + std::to_string(op)};
      sum[r.segment] += r.amount;
      if (owner.at(r.segment) == "mno" && provider_of.at(r.continuum) == "edge") edge_on_mno += r.amount;
    }
    for (const auto& [sid, cap] : capacity) {
      const auto residual = broker.residual(sid);
      if (!residual.non_negative())
        return {false, "negative residual on " + sid + " at op " + std::to_string(op)};
      if (sum[sid] + residual != cap)
        return {false, "conservation broken on " + sid + " at op " + std::to_string(op)};
    }
    if (!edge_on_mno.fits_within(bound))
      return {false, "agreement bound exceeded at op " + std::to_string(op)};
  }
  for (const auto* k : {"reserve", "release", "deploy", "terminate", "scale_up", "scale_down"})
    if (successes[k] == 0) return {false, std::string("no successful ") + k + " operation"};
  std::ostringstream d;
  d << kBrokerOps << " ops (";
  bool first = true;
  for (const auto& [k, n] : successes) {
    d << (first ? "" : ", ") << k << " " << n;
    first = false;
  }
  d << "), conservation and agreement bound held after every op";
  return {true, d.str()};
}

// ---- 3 ---------------------------------------------------------------------

// The declared relation, written out independently of the library.
const std::set<std::pair<std::string, std::string>>& declared_transitions() {
  static const std::set<std::pair<std::string, std::string>> edges{
      {"Prepared", "Instantiated"}, {"Instantiated", "Active"},  {"Active", "Maintenance"},
      {"Maintenance", "Active"},    {"Active", "Modifying"},     {"Modifying", "Active"},
      {"Active", "Terminated"},     {"Maintenance", "Terminated"}, {"Prepared", "Terminated"},
      {"Instantiated", "Terminated"}};
  return edges;
}

Verdict lifecycle_safety() {
  const auto topo = federation_topology();
  ResourceBroker broker(topo.stakeholders);
  for (const auto& s : topo.segments) broker.register_segment(s);
  LifecycleManager lm(topo, broker);
  std::mt19937_64 rng(777);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<ContinuumState> states{ContinuumState::Prepared,    ContinuumState::Instantiated,
                                           ContinuumState::Active,      ContinuumState::Maintenance,
                                           ContinuumState::Modifying,   ContinuumState::Terminated};
  const std::vector<std::string> segs{"m0", "m1", "m2", "e0"};
  std::map<std::string, std::string> last_state;
  std::vector<std::string> live;
  std::map<std::string, std::vector<std::string>> apps;
  int created = 0, app_seq = 0, transitions = 0, terminated = 0;

  auto terminated_clean = [&](const std::string& id) {
    const auto& c = lm.continuum(id);
    if (!c.deployed_apps.empty()) return false;
    for (const auto& rid : c.quotas)
      if (broker.reservation(rid).state == ReservationState::Held) return false;
    return broker.held_by(id).empty();
  };

  for (int step = 0; step < kLifecycleSteps; ++step) {
    const auto kind = std::uniform_int_distribution<int>(0, 9)(rng);
    try {
      if (kind == 0 || live.empty()) {
        if (live.size() < 6) {
          ContinuumRequest req;
          req.id = "vc-" + std::to_string(created++);
          req.provider = "mno";
          req.scenario = BusinessScenario::make_a("mno");
          const auto nq = 1 + pick(2);
          for (std::size_t i = 0; i < nq; ++i) req.quotas.push_back({segs[pick(segs.size())], random_amount(rng, 1500)});
          if (pick(10) == 0) req.planes.erase(Plane::Intelligence);
          lm.create_continuum(req);
          live.push_back(req.id);
        }
      } else {
        const auto id = live[pick(live.size())];
        if (kind <= 4) {
          lm.transition(id, states[pick(states.size())]);
        } else if (kind == 5) {
          ContinuumModification mod;
          if (pick(2)) mod.add_quotas.push_back({segs[pick(segs.size())], random_amount(rng, 1000)});
          const auto& q = lm.continuum(id).quotas;
          if (!q.empty() && pick(2)) mod.release_reservations.push_back(q[pick(q.size())]);
          lm.modify_continuum(id, mod);
        } else if (kind == 6 || kind == 7) {
          const auto app_id = "a" + std::to_string(app_seq++);
          lm.deploy_application(id, random_app(rng, app_id), weights(1));
          apps[id].push_back(app_id);
        } else if (kind == 8) {
          auto& list = apps[id];
          if (!list.empty()) {
            const auto i = pick(list.size());
            lm.terminate_application(id, list[i]);
            list.erase(list.begin() + static_cast<long>(i));
          }
        } else {
          lm.advance_to(step);
        }
      }
    } catch (const Error&) {
    }

    for (const auto& e : lm.take_events()) {
      const auto ev = e.at("event").get<std::string>();
      const auto cid = e.value("continuum", std::string{});
      if (ev == "continuum_created") {
        last_state[cid] = e.at("state").get<std::string>();
        if (last_state[cid] != "Prepared") return {false, cid + " created in state " + last_state[cid]};
      } else if (ev == "continuum_transition") {
        const auto from = e.at("from").get<std::string>(), to = e.at("to").get<std::string>();
        if (last_state[cid] != from) return {false, cid + " left a state it was not in"};
        if (!declared_transitions().count({from, to}))
          return {false, "undeclared transition " + from + " -> " + to + " at step " + std::to_string(step)};
        last_state[cid] = to;
        ++transitions;
        if (to == "Terminated") {
          ++terminated;
          if (!terminated_clean(cid)) return {false, cid + " terminated with Held reservations"};
        }
      }
    }
    for (const auto& id : live)
      if (std::string(to_string(lm.continuum(id).state)) != last_state[id])
        return {false, id + " changed state without a transition event"};
    std::erase_if(live, [&](const std::string& id) {
      return lm.continuum(id).state == ContinuumState::Terminated;
    });
  }
  // Terminated is absorbing and stays clean.
  for (const auto& [id, c] : lm.continuums())
    if (c.state == ContinuumState::Terminated && !terminated_clean(id))
      return {false, id + " holds reservations after termination"};
  std::ostringstream d;
  d << kLifecycleSteps << " steps, " << created << " continuums, " << transitions << " transitions, "
    << terminated << " terminated and clean";
  return {terminated > 0 && transitions > 0, d.str()};
}

// ---- 4 ---------------------------------------------------------------------

struct ContinuityRun {
  std::int64_t downtime = 0;          // ticks with some component lacking a Ready instance
  std::int64_t min_ready = 1 << 30;   // over every kpi record and component
  std::int64_t migrations = 0;
  std::int64_t reported_downtime = -1;
};

ContinuityRun continuity_run(MigrationMode mode, std::int64_t delay) {
  auto cfg = load_named_scenario("mobility.json");
  cfg.settings.migration_mode = mode;
  cfg.settings.startup_delay_ticks = delay;
  const auto result = run(cfg);
  ContinuityRun out;
  for (const auto& r : result.trace) {
    if (r.kind == "kpi") {
      bool down = false;
      for (const auto& [app, a] : r.payload.at("apps").items())
        for (const auto& [comp, n] : a.at("ready").items()) {
          out.min_ready = std::min<std::int64_t>(out.min_ready, n.get<std::int64_t>());
          down = down || n.get<std::int64_t>() < 1;
        }
      if (down) ++out.downtime;
    } else if (r.kind == "actuation" && r.payload.at("action").at("kind") == "Migrate" &&
               r.payload.at("status") == "applied") {
      ++out.migrations;
      out.reported_downtime = r.payload.at("downtime_ticks").get<std::int64_t>();
    }
  }
  return out;
}

Verdict service_continuity() {
  const auto mbb = continuity_run(MigrationMode::MakeBeforeBreak, 2);
  const auto bbm = continuity_run(MigrationMode::BreakBeforeMake, kBbmStartupDelay);
  std::ostringstream d;
  d << "MBB: " << mbb.migrations << " migration(s), downtime " << mbb.downtime << ", min ready "
    << mbb.min_ready << "; BBM (delay " << kBbmStartupDelay << "): downtime " << bbm.downtime
    << ", reported " << bbm.reported_downtime;
  const bool ok = mbb.migrations >= 1 && mbb.downtime == 0 && mbb.min_ready >= 1 &&
                  bbm.migrations == 1 && bbm.downtime == kBbmStartupDelay &&
                  bbm.reported_downtime == kBbmStartupDelay;
  return {ok, d.str()};
}

// ---- 5 ---------------------------------------------------------------------

Verdict coordination() {
  const auto cfg = load_named_scenario("contention.json");
  int scoped = 0, cross = 0;
  for (const auto& l : cfg.loops) (l.scope ? scoped : cross)++;
  if (cfg.loops.size() < 3 || scoped < 2 || cross < 1 || cfg.horizon < 500)
    return {false, "scenario does not have the required loop mix or horizon"};

  Simulator sim(cfg);
  int rounds = 0, deferral_rounds = 0, conflicted = 0;
  sim.set_round_observer([&](const CoordinationRound& cr) {
    ++rounds;
    if (!cr.decision.deferred.empty()) ++deferral_rounds;
    std::vector<ActuationProposal> accepted;
    for (const auto& id : cr.decision.accepted)
      for (const auto& p : cr.proposals)
        if (p.id == id) accepted.push_back(p);
    if (!detect_conflicts(accepted, cr.snapshot, cr.context).empty()) ++conflicted;
  });
  sim.setup();
  int negative = 0;
  while (!sim.finished()) {
    sim.step();
    for (const auto& [id, u] : sim.broker().utilization_report())
      if (!u.residual.non_negative() || u.held + u.residual != u.capacity) ++negative;
  }
  const auto m = summarize(sim.trace().records());
  std::ostringstream d;
  d << cfg.loops.size() << " loops over " << cfg.horizon << " ticks, " << rounds << " rounds, "
    << deferral_rounds << " with deferral, " << conflicted << " conflicted accepted sets, " << negative
    << " capacity violations, " << m.actuations_total << " actuations";
  return {conflicted == 0 && negative == 0 && sim.conservation_violations() == 0 && deferral_rounds >= 1,
          d.str()};
}

// ---- 6 ---------------------------------------------------------------------

Verdict authorization_matrix() {
  const auto fx = read_json(fixture_path("authorization_matrix.json"));
  Topology cast;
  std::vector<std::string> known;
  for (const auto& [id, role] : fx.at("cast").items()) {
    cast.stakeholders.push_back({id, *parse_stakeholder_role(role.get<std::string>()), {}});
    known.push_back(id);
  }
  const auto ghost = fx.at("unknown_actor").get<std::string>();
  const std::vector<EntityClass> entities{EntityClass::VirtualInfrastructure, EntityClass::Continuum,
                                          EntityClass::ApplicationServer};
  const std::vector<std::pair<OperationBucket, std::vector<Operation>>> buckets{
      {OperationBucket::Offer, {Operation::Create, Operation::Offer}},
      {OperationBucket::Manage, {Operation::Register, Operation::Lifecycle, Operation::Actuate, Operation::Deploy}}};

  int cells = 0, wrong = 0;
  std::string first;
  for (const auto& c : fx.at("cases")) {
    json sj = {{"variant", c.at("variant")}};
    for (const char* k : {"operator", "app_provider", "mno", "edge_provider"})
      if (c.contains(k)) sj[k] = c.at(k);
    const auto scenario = parse_business_scenario(sj);
    if (!validate_scenario(scenario, &cast).empty()) return {false, c.at("name").get<std::string>() + " is malformed"};
    std::vector<std::string> actors = known;
    actors.push_back(ghost);
    for (const auto& actor : actors) {
      for (const auto& [bucket, ops] : buckets) {
        for (auto e : entities) {
          bool expected = false;
          if (c.at("allow").contains(actor))
            for (const auto& x : c.at("allow").at(actor).at(std::string(to_string(bucket))))
              expected = expected || x.get<std::string>() == to_string(e);
          const auto got = authorize(actor, bucket, e, scenario, known);
          bool ok = got.allowed == expected && (got.allowed ? got.reason.empty() : !got.reason.empty());
          if (actor == ghost) ok = ok && got.reason == "unknown stakeholder";
          for (auto op : ops) {
            const auto via_op = authorize(actor, op, e, scenario, known);
            ok = ok && via_op.allowed == got.allowed;
          }
          ++cells;
          if (!ok && wrong++ == 0)
            first = c.at("name").get<std::string>() + "/" + actor + "/" + std::string(to_string(bucket)) +
                    "/" + std::string(to_string(e));
        }
      }
    }
  }
  std::ostringstream d;
  d << cells << " cells, " << wrong << " mismatches" << (first.empty() ? "" : " (first " + first + ")");
  return {wrong == 0 && cells > 0, d.str()};
}

// ---- 7 ---------------------------------------------------------------------

struct SteeringRun {
  std::string segment;
  double plan_carbon = 0;
  double run_carbon = 0;
};

SteeringRun steering_run(const ObjectiveWeights& w) {
  auto cfg = load_named_scenario("steering.json");
  cfg.applications.at(0).weights = w;
  Simulator sim(cfg);
  sim.run_to_end();
  const auto& d = sim.lifecycle().deployment("vc", "render");
  return {d.plan.assignment.at("eas"), d.plan.cost.carbon_g_per_h, summarize(sim.trace().records()).carbon_g};
}

Verdict objective_steering() {
  const auto lat = steering_run(weights(1, 0, 0, 0));
  const auto carb = steering_run(weights(0, 0, 1, 0));
  std::ostringstream d;
  d << "latency weights -> " << lat.segment << " (" << lat.run_carbon << " g), carbon weights -> "
    << carb.segment << " (" << carb.run_carbon << " g)";
  return {lat.segment == "near-coal" && carb.segment == "far-hydro" && carb.plan_carbon < lat.plan_carbon &&
              carb.run_carbon < lat.run_carbon,
          d.str()};
}

// ---- 8 ---------------------------------------------------------------------

Verdict negotiation() {
  const auto raw = read_json(scenario_path("carbon_negotiation.json"));
  const auto cfg = load_named_scenario("carbon_negotiation.json");
  Simulator sim(cfg);
  sim.setup();
  json outcome;
  for (const auto& r : sim.trace().records())
    if (r.kind == "actuation" && r.payload.contains("negotiation")) outcome = r.payload.at("negotiation");
  if (outcome.is_null()) return {false, "no negotiation recorded"};

  // Replay every rung against the exhaustive oracle with the continuum's quota.
  const auto& app_raw = raw.at("applications").at(0);
  const auto app = app_raw.at("app").get<ApplicationDescriptor>();
  const auto w = app_raw.at("weights").get<ObjectiveWeights>();
  CapacityView quota;
  for (const auto& q : raw.at("continuums").at(0).at("quotas"))
    quota[q.at("segment").get<std::string>()] += q.at("amount").get<ResourceVector>();

  auto feasible = [&](const ServiceRequirements& req) {
    auto a = app;
    a.requirements = req;
    return exhaustive_place(cfg.topology, quota, a, w);
  };
  if (feasible(app.requirements).assignment) return {false, "declared requirements are already feasible"};

  ServiceRequirements req = app.requirements;
  std::size_t first_feasible = 0;
  std::optional<OracleResult> chosen;
  const auto& ladder = app_raw.at("ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto& rung = ladder.at(i);
    if (rung.contains("carbon_cap")) req.carbon_cap = rung.at("carbon_cap").get<double>();
    if (rung.contains("max_latency_factor")) req.max_latency_ms *= rung.at("max_latency_factor").get<double>();
    if (rung.value("drop_carbon_cap", false)) req.carbon_cap.reset();
    auto r = feasible(req);
    if (r.assignment) {
      first_feasible = i + 1;
      chosen = r;
      break;
    }
  }
  if (!first_feasible) return {false, "oracle finds no feasible rung"};

  const auto rung = outcome.at("rung").get<std::size_t>();
  bool ok = outcome.at("accepted").get<bool>() && rung == first_feasible;
  int replayed_infeasible = 0;
  for (const auto& a : outcome.at("attempts")) {
    const auto k = a.at("rung").get<std::size_t>();
    const bool feas = a.at("feasible").get<bool>();
    if (k < rung) {
      ok = ok && !feas && !feasible(a.at("requirements").get<ServiceRequirements>()).assignment;
      ++replayed_infeasible;
    }
    if (k == rung) ok = ok && feas;
  }
  ok = ok && replayed_infeasible == static_cast<int>(rung) - 1;
  const auto& dep = sim.lifecycle().deployment("vc", app.id);
  ok = ok && dep.plan.assignment == *chosen->assignment && close_rel(dep.plan.cost.scalar, chosen->cost.scalar);
  std::ostringstream d;
  d << "accepted rung " << rung << " (oracle first feasible " << first_feasible << "), " << replayed_infeasible
    << " earlier rung(s) replayed infeasible, placed on " << dep.plan.assignment.begin()->second;
  return {ok, d.str()};
}

// ---- 9 ---------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> non_meta_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && json::parse(line).at("kind") != "meta") out.push_back(line);
  return out;
}

Verdict determinism() {
  const auto scenario = scenario_path("reference.json").string();
  auto produce = [&](std::uint64_t seed, const std::string& name) -> std::string {
#ifdef AIORA_CLI_PATH
    const std::string out = std::string(AIORA_WORK_DIR) + "/" + name;
    const std::string cmd = std::string("\"") + AIORA_CLI_PATH + "\" sim run \"" + scenario + "\" --seed " +
                            std::to_string(seed) + " --out \"" + out + "\" 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) return {};
    return slurp(out);
#else
    (void)name;
    auto cfg = load_scenario(scenario);
    cfg.seed = seed;
    return to_jsonl(run(cfg).trace);
#endif
  };
  const auto a = produce(42, "determinism_a.jsonl");
  const auto b = produce(42, "determinism_b.jsonl");
  const auto c = produce(43, "determinism_c.jsonl");
  if (a.empty() || b.empty() || c.empty()) return {false, "a run produced no trace"};
  const bool noisy = load_named_scenario("reference.json").settings.noise > 0.0;
  const bool same = a == b;
  const bool differs = non_meta_lines(a) != non_meta_lines(c);
  std::ostringstream d;
  d << "seed 42 twice: " << (same ? "byte-identical" : "DIFFERENT") << " (" << a.size()
    << " bytes); seed 43 with noise: " << (differs ? "different" : "IDENTICAL") << " non-meta records";
  return {same && differs && noisy, d.str()};
}

// ---- 10 --------------------------------------------------------------------

Verdict api_goldens() {
  const auto outcomes = run_golden_cases();
  std::set<std::string> endpoints;
  int failed = 0;
  bool mno_denied = false;
  std::string first;
  const auto cases = load_golden_cases();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    const auto req = to_request(cases[i].request);
    if (!o.matched && failed++ == 0) first = o.name;
    if (o.actual.status / 100 == 2) {
      auto path = req.path;
      if (path.rfind("/continuums/", 0) == 0) path = "/continuums/{id}/apps";
      endpoints.insert(req.method + " " + path);
    }
    if (req.method == "POST" && req.path == "/ees" && req.headers.count("X-Stakeholder-Id") &&
        req.headers.at("X-Stakeholder-Id") == "mno-1" && o.actual.status == 403 &&
        !o.actual.body.value("reason", std::string{}).empty())
      mno_denied = true;
  }
  std::ostringstream d;
  d << outcomes.size() << " golden exchanges, " << failed << " mismatched"
    << (first.empty() ? "" : " (first " + first + ")") << ", " << endpoints.size()
    << " endpoints answered 2xx, MNO continuum management " << (mno_denied ? "denied 403" : "NOT denied");
  return {failed == 0 && endpoints.size() == 8 && mno_denied, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"placement optimality", placement_optimality},
      {"broker conservation", broker_conservation},
      {"lifecycle safety", lifecycle_safety},
      {"service continuity", service_continuity},
      {"coordination conflict-freedom", coordination},
      {"scenario authorization matrix", authorization_matrix},
      {"objective steering", objective_steering},
      {"negotiation workflow", negotiation},
      {"determinism", determinism},
      {"northbound API goldens", api_goldens},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
