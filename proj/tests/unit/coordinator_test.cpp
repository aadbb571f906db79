#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "aiora/coordinator.hpp"
#include "support/builders.hpp"
#include "support/expect_error.hpp"

using namespace aiora;
using namespace aiora::test;

namespace {

ActuationProposal prop(const std::string& id, const std::string& loop, const std::string& target, Action a,
                       int priority = 0) {
  ActuationProposal p;
  p.id = id;
  p.loop_id = loop;
  p.target = target;
  p.action = std::move(a);
  p.priority = priority;
  return p;
}

TwinSnapshot snapshot_with_app() {
  TwinSnapshot s;
  DeploymentView v;
  v.continuum = "vc1";
  v.user_zone = "z";
  v.components["eas"] = {"far", rv(1000), ComponentRole::EAS};
  v.components["db"] = {"far", rv(800), ComponentRole::Generic};
  s.deployments["x"] = v;
  return s;
}

CoordinationContext context() {
  CoordinationContext c;
  c.broker_residual = {{"near", rv(1000)}, {"far", rv(8000)}};
  c.quota_remaining = {{{"vc1", "near"}, rv(1500)}, {{"vc1", "far"}, rv(0)}};
  c.loops["root"] = {{}, {"app/x"}};
  c.loops["child"] = {{"root"}, {"quota/vc1/near"}};
  c.loops["grandchild"] = {{"child", "root"}, {"app/x"}};
  return c;
}

bool has(const ConflictReport& r, const std::string& a, const std::string& b, ConflictKind k) {
  return std::any_of(r.conflicts.begin(), r.conflicts.end(), [&](const Conflict& c) {
    return c.a == std::min(a, b) && c.b == std::max(a, b) && c.kind == k;
  });
}

}  // namespace

TEST(Conflicts, SameTargetAndContradiction) {
  std::vector<ActuationProposal> ps{prop("b", "l1", "quota/vc1/far", Action::scale_up(rv(100))),
                                    prop("a", "l2", "quota/vc1/far", Action::scale_down(rv(100)))};
  auto r = detect_conflicts(ps, {}, context());
  EXPECT_TRUE(has(r, "a", "b", ConflictKind::SameTarget));
  EXPECT_TRUE(has(r, "a", "b", ConflictKind::ContradictoryDirection));
  EXPECT_EQ(r.conflicts.front().a, "a");
}

TEST(Conflicts, SharedPoolContention) {
  // Two continuums scale on one segment whose residual fits only one.
  std::vector<ActuationProposal> ps{prop("p", "l1", "quota/vc1/near", Action::scale_up(rv(600))),
                                    prop("q", "l2", "quota/vc2/near", Action::scale_up(rv(600)))};
  auto r = detect_conflicts(ps, {}, context());
  EXPECT_TRUE(has(r, "p", "q", ConflictKind::SharedResourceContention));
  ps[1].action.amount = rv(400);
  EXPECT_TRUE(detect_conflicts(ps, {}, context()).empty());
}

TEST(Conflicts, MigrationDrawsOnQuota) {
  auto snap = snapshot_with_app();
  auto m = prop("m", "l1", "app/x", Action::migrate("eas", "near"));
  auto draw = resource_draw(m, snap);
  ASSERT_TRUE(draw);
  EXPECT_EQ(draw->pool, "quota/vc1/near");
  EXPECT_EQ(draw->amount, rv(1000));
  EXPECT_FALSE(resource_draw(prop("s", "l", "app/x", Action::migrate("eas", "far")), snap));
  EXPECT_FALSE(resource_draw(prop("r", "l", "app/x", Action::reconfigure("k", "v")), snap));
  EXPECT_EQ(pool_capacity("quota/vc1/near", context()), rv(1500));
  EXPECT_EQ(pool_capacity("segment/near", context()), rv(1000));
  EXPECT_EQ(pool_capacity("segment/mars", context()), rv(0));
}

TEST(Conflicts, ParentChildOverlap) {
  auto ctx = context();
  std::vector<ActuationProposal> ps{prop("1", "root", "app/x", Action::reconfigure("a", "1")),
                                    prop("2", "grandchild", "app/x", Action::reconfigure("a", "2")),
                                    prop("3", "child", "quota/vc1/near", Action::reconfigure("b", "1"))};
  auto r = detect_conflicts(ps, {}, ctx);
  EXPECT_TRUE(has(r, "1", "2", ConflictKind::ParentChildOverlap));
  EXPECT_FALSE(r.conflicting("1", "3"));
  EXPECT_FALSE(r.conflicting("2", "3"));
}

TEST(Resolve, PriorityThenDepth) {
  auto ctx = context();
  std::vector<ActuationProposal> ps{prop("1", "root", "app/x", Action::reconfigure("a", "1")),
                                    prop("2", "grandchild", "app/x", Action::reconfigure("a", "2"))};
  auto r = detect_conflicts(ps, {}, ctx);
  auto d = resolve(ps, r, {}, ctx);
  EXPECT_EQ(d.accepted, std::vector<std::string>{"1"});
  ASSERT_EQ(d.deferred.size(), 1u);
  EXPECT_EQ(d.deferred[0].id, "2");
  EXPECT_EQ(d.deferred[0].blocking, "1");

  ps[1].priority = 5;
  d = resolve(ps, r, {}, ctx);
  EXPECT_EQ(d.accepted, std::vector<std::string>{"2"});
}

TEST(Resolve, CumulativeContentionDefers) {
  auto ctx = context();
  ctx.broker_residual["near"] = rv(1000);
  std::vector<ActuationProposal> ps{prop("a", "l1", "quota/vc1/near", Action::scale_up(rv(400))),
                                    prop("b", "l2", "quota/vc2/near", Action::scale_up(rv(400))),
                                    prop("c", "l3", "quota/vc3/near", Action::scale_up(rv(400)))};
  auto r = detect_conflicts(ps, {}, ctx);
  EXPECT_TRUE(r.empty());  // each pair fits
  auto d = resolve(ps, r, {}, ctx);
  EXPECT_EQ(d.accepted, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(d.deferred.size(), 1u);
  EXPECT_EQ(d.deferred[0].reason, "CumulativeContention");
}

TEST(Resolve, NegotiationsCollected) {
  std::vector<ActuationProposal> ps{prop("n", "l", "app/x", Action::negotiate("x", std::nullopt))};
  auto d = resolve(ps, detect_conflicts(ps, {}, {}), {}, {});
  ASSERT_EQ(d.negotiations.size(), 1u);
  EXPECT_EQ(d.negotiations[0].id, "n");
}

TEST(Resolve, RandomRoundsAreSafeAndOrderIndependent) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> loops{"root", "child", "grandchild", "solo1", "solo2"};
  const std::vector<std::string> targets{"quota/vc1/near", "quota/vc2/near", "quota/vc1/far", "app/x"};
  auto snap = snapshot_with_app();
  auto ctx = context();
  int rounds_with_deferral = 0;
  for (int round = 0; round < 400; ++round) {
    std::vector<ActuationProposal> ps;
    const int n = std::uniform_int_distribution<int>(1, 7)(rng);
    for (int i = 0; i < n; ++i) {
      const auto& target = targets[rng() % targets.size()];
      Action a;
      if (target == "app/x") {
        a = rng() % 2 ? Action::migrate(rng() % 2 ? "eas" : "db", "near") : Action::reconfigure("k", "v");
      } else {
        const auto amount = rv(100 * std::int64_t(1 + rng() % 8));
        a = rng() % 2 ? Action::scale_up(amount) : Action::scale_down(amount);
      }
      ps.push_back(prop("p" + std::to_string(i), loops[rng() % loops.size()], target, a, int(rng() % 3)));
    }
    auto report = detect_conflicts(ps, snap, ctx);
    auto d = resolve(ps, report, snap, ctx);

    EXPECT_FALSE(d.accepted.empty());  // progress
    // Every proposal is accounted for exactly once.
    EXPECT_EQ(d.accepted.size() + d.deferred.size(), ps.size());
    for (std::size_t i = 0; i < d.accepted.size(); ++i)
      for (std::size_t j = i + 1; j < d.accepted.size(); ++j)
        EXPECT_FALSE(report.conflicting(d.accepted[i], d.accepted[j]));

    std::map<std::string, std::pair<ResourceVector, int>> per_pool;
    for (const auto& id : d.accepted) {
      const auto& p = *std::find_if(ps.begin(), ps.end(), [&](const auto& x) { return x.id == id; });
      if (auto draw = resource_draw(p, snap)) {
        per_pool[draw->pool].first += draw->amount;
        per_pool[draw->pool].second += 1;
      }
    }
    for (const auto& [pool, v] : per_pool)
      if (v.second > 1) EXPECT_TRUE(v.first.fits_within(pool_capacity(pool, ctx))) << pool;
    for (const auto& def : d.deferred)
      EXPECT_NE(std::find(d.accepted.begin(), d.accepted.end(), def.blocking), d.accepted.end());
    rounds_with_deferral += !d.deferred.empty();

    auto shuffled = ps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto report2 = detect_conflicts(shuffled, snap, ctx);
    ASSERT_EQ(report2.conflicts.size(), report.conflicts.size());
    for (std::size_t i = 0; i < report.conflicts.size(); ++i) {
      EXPECT_EQ(report2.conflicts[i].a, report.conflicts[i].a);
      EXPECT_EQ(report2.conflicts[i].b, report.conflicts[i].b);
      EXPECT_EQ(report2.conflicts[i].kind, report.conflicts[i].kind);
    }
    EXPECT_EQ(resolve(shuffled, report2, snap, ctx).accepted, d.accepted);
  }
  EXPECT_GT(rounds_with_deferral, 0);
}

TEST(Negotiate, WalksLadderCumulatively) {
  auto app = application("x", {component("c", rv(1))}, "z", 10);
  app.requirements.carbon_cap = 5;
  RelaxationLadder ladder(3);
  ladder[0].carbon_cap = 8;
  ladder[1].max_latency_factor = 2;
  ladder[2].drop_carbon_cap = true;
  std::vector<ServiceRequirements> seen;
  auto out = negotiate_quality_targets(app, {{"carbon", "cap"}}, ladder, [&](const ServiceRequirements& r) {
    seen.push_back(r);
    PlacementResult res;
    if (r.max_latency_ms >= 20) res.plan = PlacementPlan{{{"c", "near"}}, {}};
    else res.blocking = {{"latency", "too far"}};
    return res;
  });
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.rung, 2u);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0].carbon_cap, 8.0);
  EXPECT_DOUBLE_EQ(seen[1].max_latency_ms, 20);
  EXPECT_EQ(seen[1].carbon_cap, 8.0);  // earlier rung still applied
  ASSERT_EQ(out.attempts.size(), 2u);
  EXPECT_FALSE(out.attempts[0].feasible);
  EXPECT_EQ(out.attempts[0].blocking.size(), 1u);
  EXPECT_EQ(out.initial_blocking.size(), 1u);
  EXPECT_EQ(out.plan->assignment.at("c"), "near");
}

TEST(Negotiate, ExhaustedOrAbsentLadder) {
  auto app = application("x", {component("c", rv(1))}, "z", 10);
  auto never = [](const ServiceRequirements&) { return PlacementResult{}; };
  auto out = negotiate_quality_targets(app, {}, RelaxationLadder(2), never);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(out.attempts.size(), 2u);
  EXPECT_FALSE(negotiate_quality_targets(app, {}, RelaxationLadder{}, never).accepted);
  EXPECT_AIORA_ERROR(negotiate_quality_targets(app, {}, std::nullopt, never), ErrorCode::NoLadderDeclared);
}

TEST(Negotiate, PatchApply) {
  ServiceRequirements r;
  r.max_latency_ms = 10;
  r.carbon_cap = 3;
  r.data_locality = std::vector<std::string>{"eu"};
  RequirementsPatch p;
  p.max_latency_ms = 12;
  p.max_latency_factor = 1.5;
  p.min_throughput = 50;
  p.drop_data_locality = true;
  auto out = p.apply(r);
  EXPECT_DOUBLE_EQ(out.max_latency_ms, 18);
  EXPECT_EQ(out.min_throughput, 50);
  EXPECT_FALSE(out.data_locality);
  EXPECT_EQ(out.carbon_cap, 3.0);
}
