#include "aiora/coordinator.hpp"

#include <algorithm>
#include <tuple>

#include "aiora/error.hpp"

namespace aiora {

bool ConflictReport::conflicting(const std::string& a, const std::string& b) const {
  return std::any_of(conflicts.begin(), conflicts.end(), [&](const Conflict& c) {
    return (c.a == a && c.b == b) || (c.a == b && c.b == a);
  });
}

std::optional<ResourceDraw> resource_draw(const ActuationProposal& p, const TwinSnapshot& snapshot) {
  if (p.action.kind == ActionKind::ScaleUp) {
    if (auto q = parse_quota_entity(p.target)) return ResourceDraw{"segment/" + q->segment, p.action.amount};
    return std::nullopt;
  }
  if (p.action.kind == ActionKind::Migrate) {
    auto app = parse_app_entity(p.target);
    if (!app) return std::nullopt;
    auto d = snapshot.deployments.find(*app);
    if (d == snapshot.deployments.end()) return std::nullopt;
    auto c = d->second.components.find(p.action.component);
    if (c == d->second.components.end() || c->second.segment == p.action.segment) return std::nullopt;
    return ResourceDraw{quota_entity(d->second.continuum, p.action.segment), c->second.demand};
  }
  return std::nullopt;
}

ResourceVector pool_capacity(const std::string& pool, const CoordinationContext& ctx) {
  if (pool.rfind("segment/", 0) == 0) {
    auto it = ctx.broker_residual.find(pool.substr(8));
    return it == ctx.broker_residual.end() ? ResourceVector{} : it->second;
  }
  if (auto q = parse_quota_entity(pool)) {
    auto it = ctx.quota_remaining.find({q->continuum, q->segment});
    return it == ctx.quota_remaining.end() ? ResourceVector{} : it->second;
  }
  return {};
}

namespace {

std::set<std::string> loop_targets(const ActuationProposal& p, const CoordinationContext& ctx) {
  auto it = ctx.loops.find(p.loop_id);
  if (it == ctx.loops.end() || it->second.targets.empty()) return {p.target};
  auto t = it->second.targets;
  t.insert(p.target);
  return t;
}

bool is_ancestor(const std::string& maybe_ancestor, const std::string& loop,
                 const CoordinationContext& ctx) {
  auto it = ctx.loops.find(loop);
  if (it == ctx.loops.end()) return false;
  const auto& a = it->second.ancestors;
  return std::find(a.begin(), a.end(), maybe_ancestor) != a.end();
}

std::size_t depth(const ActuationProposal& p, const CoordinationContext& ctx) {
  auto it = ctx.loops.find(p.loop_id);
  return it == ctx.loops.end() ? 0 : it->second.ancestors.size();
}

bool opposite(ActionKind a, ActionKind b) {
  return (a == ActionKind::ScaleUp && b == ActionKind::ScaleDown) ||
         (a == ActionKind::ScaleDown && b == ActionKind::ScaleUp);
}

}  // namespace

ConflictReport detect_conflicts(const std::vector<ActuationProposal>& proposals,
                                const TwinSnapshot& snapshot, const CoordinationContext& ctx) {
  ConflictReport report;
  std::vector<std::optional<ResourceDraw>> draws;
  draws.reserve(proposals.size());
  for (const auto& p : proposals) draws.push_back(resource_draw(p, snapshot));

  for (std::size_t i = 0; i < proposals.size(); ++i) {
    for (std::size_t j = i + 1; j < proposals.size(); ++j) {
      const auto* p = &proposals[i];
      const auto* q = &proposals[j];
      const auto* dp = &draws[i];
      const auto* dq = &draws[j];
      if (q->id < p->id) {
        std::swap(p, q);
        std::swap(dp, dq);
      }
      auto add = [&](ConflictKind k, std::string detail) {
        report.conflicts.push_back({p->id, q->id, k, std::move(detail)});
      };
      if (p->target == q->target) {
        add(ConflictKind::SameTarget, p->target);
        if (opposite(p->action.kind, q->action.kind)) add(ConflictKind::ContradictoryDirection, p->target);
      }
      if (*dp && *dq && (*dp)->pool == (*dq)->pool) {
        const auto cap = pool_capacity((*dp)->pool, ctx);
        if (!((*dp)->amount + (*dq)->amount).fits_within(cap))
          add(ConflictKind::SharedResourceContention, (*dp)->pool + " has " + cap.to_string());
      }
      if (p->loop_id != q->loop_id &&
          (is_ancestor(p->loop_id, q->loop_id, ctx) || is_ancestor(q->loop_id, p->loop_id, ctx))) {
        const auto tp = loop_targets(*p, ctx);
        const auto tq = loop_targets(*q, ctx);
        const bool overlap = std::any_of(tp.begin(), tp.end(), [&](const auto& t) { return tq.count(t) > 0; });
        if (overlap) add(ConflictKind::ParentChildOverlap, p->loop_id + " / " + q->loop_id);
      }
    }
  }
  std::sort(report.conflicts.begin(), report.conflicts.end(), [](const Conflict& x, const Conflict& y) {
    return std::tie(x.a, x.b, x.kind) < std::tie(y.a, y.b, y.kind);
  });
  return report;
}

CoordinationDecision resolve(const std::vector<ActuationProposal>& proposals,
                             const ConflictReport& report, const TwinSnapshot& snapshot,
                             const CoordinationContext& ctx) {
  std::vector<const ActuationProposal*> order;
  for (const auto& p : proposals) order.push_back(&p);
  std::sort(order.begin(), order.end(), [&](const ActuationProposal* x, const ActuationProposal* y) {
    return std::make_tuple(-x->priority, depth(*x, ctx), x->loop_id, x->id) <
           std::make_tuple(-y->priority, depth(*y, ctx), y->loop_id, y->id);
  });

  CoordinationDecision d;
  std::map<std::string, std::pair<ResourceVector, std::string>> drawn;  // pool -> (total, first id)
  for (const auto* p : order) {
    auto blocker = std::find_if(d.accepted.begin(), d.accepted.end(),
                                [&](const std::string& a) { return report.conflicting(a, p->id); });
    if (blocker != d.accepted.end()) {
      std::string kinds;
      for (const auto& c : report.conflicts) {
        if ((c.a == *blocker && c.b == p->id) || (c.b == *blocker && c.a == p->id))
          kinds += (kinds.empty() ? "" : ",") + std::string(to_string(c.kind));
      }
      d.deferred.push_back({p->id, *blocker, kinds});
      continue;
    }
    auto draw = resource_draw(*p, snapshot);
    if (draw) {
      auto it = drawn.find(draw->pool);
      if (it != drawn.end() &&
          !(it->second.first + draw->amount).fits_within(pool_capacity(draw->pool, ctx))) {
        d.deferred.push_back({p->id, it->second.second, "CumulativeContention"});
        continue;
      }
      if (it == drawn.end())
        drawn.emplace(draw->pool, std::make_pair(draw->amount, p->id));
      else
        it->second.first += draw->amount;
    }
    d.accepted.push_back(p->id);
    if (p->action.kind == ActionKind::NegotiateQuality) d.negotiations.push_back(*p);
  }
  return d;
}

ServiceRequirements RequirementsPatch::apply(ServiceRequirements r) const {
  if (max_latency_ms) r.max_latency_ms = *max_latency_ms;
  if (max_latency_factor) r.max_latency_ms *= *max_latency_factor;
  if (carbon_cap) r.carbon_cap = *carbon_cap;
  if (drop_carbon_cap) r.carbon_cap.reset();
  if (min_throughput) r.min_throughput = *min_throughput;
  if (drop_data_locality) r.data_locality.reset();
  return r;
}

NegotiationOutcome negotiate_quality_targets(const ApplicationDescriptor& app,
                                             const std::vector<BlockingConstraint>& blocking,
                                             const std::optional<RelaxationLadder>& ladder,
                                             const FeasibilityFn& feasible) {
  if (!ladder) throw Error(ErrorCode::NoLadderDeclared, "application " + app.id + " declares no ladder");
  NegotiationOutcome out;
  out.initial_blocking = blocking;
  auto req = app.requirements;
  for (std::size_t i = 0; i < ladder->size(); ++i) {
    req = (*ladder)[i].apply(req);
    auto result = feasible(req);
    out.attempts.push_back({i + 1, req, result.feasible(), result.blocking});
    if (result.feasible()) {
      out.accepted = true;
      out.requirements = req;
      out.plan = result.plan;
      out.rung = i + 1;
      break;
    }
  }
  return out;
}

std::string_view to_string(ConflictKind k) {
  switch (k) {
    case ConflictKind::SameTarget: return "SameTarget";
    case ConflictKind::SharedResourceContention: return "SharedResourceContention";
    case ConflictKind::ParentChildOverlap: return "ParentChildOverlap";
    case ConflictKind::ContradictoryDirection: return "ContradictoryDirection";
  }
  return "?";
}

}  // namespace aiora
