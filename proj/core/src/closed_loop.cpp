#include "aiora/closed_loop.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "aiora/error.hpp"
#include "aiora/json_io.hpp"

namespace aiora {

namespace {

using nlohmann::json;

bool component_level(const std::string& kind) {
  return kind == "capacity" || kind == "locality" || kind == "colocation" ||
         kind == "anti_affinity";
}

const ObjectiveWeights& weights_for(const EvaluationContext& ctx, const std::string& app) {
  static const ObjectiveWeights latency_only = [] {
    ObjectiveWeights w;
    w.latency = 1.0;
    return w;
  }();
  auto it = ctx.weights.find(app);
  return it == ctx.weights.end() ? latency_only : it->second;
}

// Whether `component` of `app` may run on `candidate` given the app's view.
bool component_fits(const EvaluationContext& ctx, const std::string& app,
                    const std::string& component, const std::string& candidate) {
  auto ait = ctx.apps.find(app);
  auto asg = ctx.assignments.find(app);
  auto vit = ctx.app_views.find(app);
  if (ait == ctx.apps.end() || asg == ctx.assignments.end() || vit == ctx.app_views.end())
    return false;
  if (!vit->second.count(candidate)) return false;
  auto proposed = asg->second;
  proposed[component] = candidate;
  auto score = score_placement(*ctx.topology, ait->second, proposed, weights_for(ctx, app),
                               &vit->second);
  return std::none_of(score.violations.begin(), score.violations.end(),
                      [](const auto& v) { return component_level(v.kind); });
}

struct LatencyAccess {
  std::optional<LatencyModel> owned;
  const LatencyModel* model;

  explicit LatencyAccess(const EvaluationContext& ctx) : model(ctx.latency) {
    if (!model) {
      owned.emplace(*ctx.topology);
      model = &*owned;
    }
  }
  std::optional<double> from_zone(const std::string& zone, const std::string& seg) const {
    return model->from_zone(zone, seg);
  }
};

bool bearing(const DeploymentView& view, const ComponentView& c) {
  const bool any_eas = std::any_of(view.components.begin(), view.components.end(),
                                   [](const auto& x) { return x.second.role == ComponentRole::EAS; });
  return !any_eas || c.role == ComponentRole::EAS;
}

double number_param(const json& params, const char* key, std::optional<double> fallback) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::BadParams, std::string("missing parameter ") + key);
  }
  if (!params.at(key).is_number())
    throw Error(ErrorCode::BadParams, std::string("parameter ") + key + " must be a number");
  return params.at(key).get<double>();
}

void require_keys(const json& params, std::initializer_list<std::string_view> allowed) {
  if (!params.is_object()) throw Error(ErrorCode::BadParams, "policy params must be an object");
  for (const auto& [k, v] : params.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw Error(ErrorCode::BadParams, "unknown policy parameter " + k);
  }
}

void require_app_target(const ClosedLoopSpec& spec) {
  if (spec.targets.size() != 1 || !parse_app_entity(spec.targets.front()))
    throw Error(ErrorCode::BadParams, "loop " + spec.id + " needs exactly one app/<id> target");
}

}  // namespace

std::optional<std::string> EntityDirectory::owner_of(const std::string& entity) const {
  if (auto q = parse_quota_entity(entity)) {
    if (continuums.count(q->continuum) && segments.count(q->segment)) return q->continuum;
    return std::nullopt;
  }
  if (auto a = parse_app_entity(entity)) {
    auto it = app_continuum.find(*a);
    if (it != app_continuum.end()) return it->second;
  }
  return std::nullopt;
}

ThresholdParams ThresholdParams::from_json(const json& j) {
  require_keys(j, {"hi", "lo", "step", "cooldown"});
  ThresholdParams p;
  p.hi = number_param(j, "hi", std::nullopt);
  p.lo = number_param(j, "lo", std::nullopt);
  p.cooldown = static_cast<std::int64_t>(number_param(j, "cooldown", 0.0));
  if (!j.contains("step")) throw Error(ErrorCode::BadParams, "missing parameter step");
  try {
    p.step = j.at("step").get<ResourceVector>();
  } catch (const Error& e) {
    throw Error(ErrorCode::BadParams, std::string("bad step: ") + e.what());
  }
  if (!(0.0 <= p.lo && p.lo < p.hi && p.hi <= 1.0))
    throw Error(ErrorCode::BadParams, "threshold params need 0 <= lo < hi <= 1");
  if (!p.step.positive()) throw Error(ErrorCode::BadParams, "threshold step must be positive");
  if (p.cooldown < 0) throw Error(ErrorCode::BadParams, "cooldown must be non-negative");
  return p;
}

PolicyOutcome threshold_scale_policy(const ThresholdParams& p, double u, const std::string& target,
                                     std::optional<double> target_quota_cpu,
                                     const LoopState& state, std::int64_t tick) {
  if (state.last_action_tick && tick - *state.last_action_tick < p.cooldown)
    return {std::nullopt, "cooldown until tick " + std::to_string(*state.last_action_tick + p.cooldown)};

  const double step_cpu = static_cast<double>(p.step.cpu);
  if (u > p.hi) {
    ActuationProposal prop;
    prop.target = target;
    prop.action = Action::scale_up(p.step);
    if (target_quota_cpu && *target_quota_cpu > 0.0)
      prop.expected_effect = {"utilization",
                              u * *target_quota_cpu / (*target_quota_cpu + step_cpu) - u};
    return {prop, "utilization " + std::to_string(u) + " above " + std::to_string(p.hi)};
  }
  if (u < p.lo) {
    if (target_quota_cpu && *target_quota_cpu < 2.0 * step_cpu)
      return {std::nullopt, "utilization low but quota is at its minimum"};
    ActuationProposal prop;
    prop.target = target;
    prop.action = Action::scale_down(p.step);
    if (target_quota_cpu && *target_quota_cpu > step_cpu)
      prop.expected_effect = {"utilization",
                              u * *target_quota_cpu / (*target_quota_cpu - step_cpu) - u};
    return {prop, "utilization " + std::to_string(u) + " below " + std::to_string(p.lo)};
  }
  return {std::nullopt, "utilization within band"};
}

PolicyOutcome latency_migration_policy(double bound_ms, const std::string& app,
                                       const TwinSnapshot& snapshot,
                                       const EvaluationContext& ctx) {
  const auto measured = snapshot.metric(app_entity(app), "latency_ms");
  if (!measured)
    throw Error(ErrorCode::MissingMetric, "no latency_ms telemetry for app " + app);
  if (*measured <= bound_ms) return {std::nullopt, "latency within bound"};

  auto dit = snapshot.deployments.find(app);
  if (dit == snapshot.deployments.end()) return {std::nullopt, "app is not deployed"};
  const auto& view = dit->second;
  const LatencyAccess latency(ctx);
  constexpr double kUnreachable = std::numeric_limits<double>::infinity();
  auto model_latency = [&](const std::string& seg) {
    auto l = latency.from_zone(view.user_zone, seg);
    return l ? *l : kUnreachable;
  };

  // Worst latency-bearing component; ties resolve to the smallest id.
  const std::string* worst = nullptr;
  double worst_latency = -1.0;
  for (const auto& [cid, c] : view.components) {
    if (!bearing(view, c)) continue;
    const double l = model_latency(c.segment);
    if (l > worst_latency) {
      worst_latency = l;
      worst = &cid;
    }
  }
  if (!worst) return {std::nullopt, "no latency-bearing component"};

  bool nearer_exists = false;
  std::optional<std::pair<double, std::string>> best;
  for (const auto& seg : ctx.topology->segments) {
    if (seg.id == view.components.at(*worst).segment) continue;
    const double l = model_latency(seg.id);
    if (!(l < worst_latency)) continue;
    auto sit = snapshot.segments.find(seg.id);
    if (sit != snapshot.segments.end() && sit->second.status != SegmentStatus::Up) continue;
    nearer_exists = true;
    if (!component_fits(ctx, app, *worst, seg.id)) continue;
    if (!best || l < best->first) best = {l, seg.id};
  }
  if (best) {
    ActuationProposal prop;
    prop.target = app_entity(app);
    prop.action = Action::migrate(*worst, best->second);
    prop.expected_effect = {"latency_ms", best->first - *measured};
    return {prop, "latency " + std::to_string(*measured) + " ms exceeds bound; moving " + *worst +
                      " to " + best->second};
  }
  if (!nearer_exists) return {std::nullopt, "no segment with lower latency"};

  std::optional<ServiceRequirements> relaxed;
  if (auto ait = ctx.apps.find(app); ait != ctx.apps.end()) {
    // Already renegotiated to tolerate this latency.
    if (*measured <= ait->second.requirements.max_latency_ms)
      return {std::nullopt, "latency within negotiated requirement"};
    relaxed = ait->second.requirements;
    relaxed->max_latency_ms = std::max(relaxed->max_latency_ms, *measured);
  }
  ActuationProposal prop;
  prop.target = app_entity(app);
  prop.action = Action::negotiate(app, relaxed);
  return {prop, "every nearer segment is infeasible under quota; negotiating quality targets"};
}

PolicyOutcome drain_evacuation_policy(const std::string& app, const TwinSnapshot& snapshot,
                                      const EvaluationContext& ctx) {
  auto dit = snapshot.deployments.find(app);
  if (dit == snapshot.deployments.end()) return {std::nullopt, "app is not deployed"};
  const auto& view = dit->second;
  const LatencyAccess latency(ctx);

  for (const auto& [cid, c] : view.components) {
    auto sit = snapshot.segments.find(c.segment);
    if (sit == snapshot.segments.end() || sit->second.status == SegmentStatus::Up) continue;
    std::optional<std::pair<double, std::string>> best;
    for (const auto& seg : ctx.topology->segments) {
      if (seg.id == c.segment) continue;
      auto st = snapshot.segments.find(seg.id);
      if (st != snapshot.segments.end() && st->second.status != SegmentStatus::Up) continue;
      if (!component_fits(ctx, app, cid, seg.id)) continue;
      auto l = latency.from_zone(view.user_zone, seg.id);
      const double key = l ? *l : std::numeric_limits<double>::infinity();
      if (!best || key < best->first) best = {key, seg.id};
    }
    if (!best) return {std::nullopt, "no evacuation target for " + cid};
    ActuationProposal prop;
    prop.target = app_entity(app);
    prop.action = Action::migrate(cid, best->second);
    prop.expected_effect = {"ready_instances", 0.0};
    return {prop, "segment " + c.segment + " is not up; evacuating " + cid};
  }
  return {std::nullopt, "no component on a draining or failed segment"};
}

LoopRegistry LoopRegistry::builtin() {
  LoopRegistry r;
  r.analyzers["latest"] = [](const std::vector<double>& v) { return v.front(); };
  r.analyzers["max"] = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  r.analyzers["min"] = [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); };
  r.analyzers["mean"] = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };

  r.policies["threshold_scale"] = PolicyDefinition{
      [](const ClosedLoopSpec& spec) {
        ThresholdParams::from_json(spec.policy.params);
        if (spec.monitors.empty())
          throw Error(ErrorCode::BadParams, "threshold_scale needs at least one monitor");
        if (spec.targets.size() != 1 || !parse_quota_entity(spec.targets.front()))
          throw Error(ErrorCode::BadParams, "threshold_scale needs exactly one quota/<c>/<s> target");
      },
      [](const PolicyInput& in) {
        const auto p = ThresholdParams::from_json(in.spec.policy.params);
        const auto& target = in.spec.targets.front();
        std::optional<double> quota_cpu;
        if (auto it = in.snapshot.quotas.find(target); it != in.snapshot.quotas.end())
          quota_cpu = it->second.quota_cpu;
        return threshold_scale_policy(p, in.analyzed.value_or(0.0), target, quota_cpu, in.state,
                                      in.tick);
      },
      R"({"hi": number in (lo,1], "lo": number in [0,hi), "step": ResourceVector, "cooldown": ticks >= 0})"};

  r.policies["latency_migration"] = PolicyDefinition{
      [](const ClosedLoopSpec& spec) {
        require_keys(spec.policy.params, {"bound_ms"});
        if (!(number_param(spec.policy.params, "bound_ms", std::nullopt) > 0.0))
          throw Error(ErrorCode::BadParams, "bound_ms must be positive");
        require_app_target(spec);
      },
      [](const PolicyInput& in) {
        return latency_migration_policy(in.spec.policy.params.at("bound_ms").get<double>(),
                                        *parse_app_entity(in.spec.targets.front()), in.snapshot,
                                        in.context);
      },
      R"({"bound_ms": number > 0})"};

  r.policies["drain_evacuation"] = PolicyDefinition{
      [](const ClosedLoopSpec& spec) {
        require_keys(spec.policy.params, {});
        require_app_target(spec);
      },
      [](const PolicyInput& in) {
        return drain_evacuation_policy(*parse_app_entity(in.spec.targets.front()), in.snapshot,
                                       in.context);
      },
      R"({})"};
  return r;
}

PolicyOutcome evaluate_loop(const ComposedLoop& loop, const LoopRegistry& registry,
                            const LoopState& state, const TwinSnapshot& snapshot,
                            const EvaluationContext& context, std::int64_t tick) {
  const auto& spec = loop.spec;
  std::vector<double> values;
  for (const auto& m : spec.monitors) {
    auto v = snapshot.metric(m.source, m.metric);
    if (!v)
      throw Error(ErrorCode::MissingMetric,
                  "loop " + spec.id + ": no " + m.metric + " for " + m.source);
    values.push_back(*v);
  }
  std::optional<double> analyzed;
  if (!values.empty()) analyzed = registry.analyzers.at(spec.analyzer)(values);

  PolicyInput in{spec, analyzed, snapshot, context, state, tick};
  auto outcome = registry.policies.at(spec.policy.id).decide(in);
  if (outcome.proposal) {
    auto& p = *outcome.proposal;
    if (std::find(spec.targets.begin(), spec.targets.end(), p.target) == spec.targets.end())
      return {std::nullopt, "dropped proposal outside the loop's targets: " + p.target};
    p.id = std::to_string(tick) + ":" + spec.id;
    p.loop_id = spec.id;
    p.priority = spec.priority;
    p.tick = tick;
  }
  return outcome;
}

LoopEngine::LoopEngine() : LoopEngine(LoopRegistry::builtin()) {}

LoopEngine::LoopEngine(LoopRegistry registry) : registry_(std::move(registry)) {}

const ComposedLoop& LoopEngine::compose(const ClosedLoopSpec& spec, const EntityDirectory& dir) {
  if (loops_.count(spec.id)) throw Error(ErrorCode::DuplicateId, "loop " + spec.id + " exists");
  if (!registry_.analyzers.count(spec.analyzer))
    throw Error(ErrorCode::UnknownAnalyzer, "unknown analyzer " + spec.analyzer);
  auto pit = registry_.policies.find(spec.policy.id);
  if (pit == registry_.policies.end())
    throw Error(ErrorCode::UnknownPolicy, "unknown policy " + spec.policy.id);
  if (spec.parent && *spec.parent == spec.id)
    throw Error(ErrorCode::CyclicNesting, "loop " + spec.id + " is its own parent");
  if (spec.targets.empty()) throw Error(ErrorCode::BadParams, "loop " + spec.id + " has no targets");
  if (spec.trigger.kind == Trigger::Kind::Periodic && spec.trigger.every < 1)
    throw Error(ErrorCode::BadParams, "loop " + spec.id + " period must be >= 1");
  pit->second.validate(spec);

  if (spec.scope && !dir.continuums.count(*spec.scope))
    throw Error(ErrorCode::UnknownContinuum, "loop " + spec.id + " scope " + *spec.scope);
  for (const auto& t : spec.targets) {
    auto owner = dir.owner_of(t);
    if (!owner) throw Error(ErrorCode::UnknownEntity, "loop " + spec.id + " target " + t);
    if (spec.scope && *owner != *spec.scope)
      throw Error(ErrorCode::ScopeViolation,
                  "loop " + spec.id + " scoped to " + *spec.scope + " targets " + t);
  }

  ComposedLoop loop{spec, 1, {}};
  if (spec.parent) {
    auto parent = loops_.find(*spec.parent);
    if (parent == loops_.end())
      throw Error(ErrorCode::UnknownLoop, "loop " + spec.id + " parent " + *spec.parent);
    loop.depth = parent->second.depth + 1;
    loop.ancestors.push_back(*spec.parent);
    loop.ancestors.insert(loop.ancestors.end(), parent->second.ancestors.begin(),
                          parent->second.ancestors.end());
  }
  states_[spec.id] = LoopState{};
  return loops_.emplace(spec.id, std::move(loop)).first->second;
}

std::vector<std::string> find_nesting_cycle(const std::vector<ClosedLoopSpec>& specs) {
  std::map<std::string, std::string> parent;
  for (const auto& s : specs)
    if (s.parent) parent[s.id] = *s.parent;
  for (const auto& s : specs) {
    std::vector<std::string> path{s.id};
    std::string cur = s.id;
    while (parent.count(cur)) {
      cur = parent.at(cur);
      auto hit = std::find(path.begin(), path.end(), cur);
      if (hit != path.end()) return {hit, path.end()};
      path.push_back(cur);
    }
  }
  return {};
}

void LoopEngine::compose_all(const std::vector<ClosedLoopSpec>& specs, const EntityDirectory& dir) {
  auto cycle = find_nesting_cycle(specs);
  if (!cycle.empty()) {
    std::string ids;
    for (const auto& c : cycle) ids += (ids.empty() ? "" : " -> ") + c;
    throw Error(ErrorCode::CyclicNesting, "nesting cycle: " + ids, cycle);
  }
  std::set<std::string> in_batch;
  for (const auto& s : specs) in_batch.insert(s.id);
  std::vector<const ClosedLoopSpec*> pending;
  for (const auto& s : specs) pending.push_back(&s);
  while (!pending.empty()) {
    std::vector<const ClosedLoopSpec*> next;
    for (const auto* s : pending) {
      if (s->parent && in_batch.count(*s->parent) && !loops_.count(*s->parent))
        next.push_back(s);
      else
        compose(*s, dir);
    }
    if (next.size() == pending.size())
      throw Error(ErrorCode::UnknownLoop, "unresolvable loop parents");
    pending.swap(next);
  }
}

bool LoopEngine::due(const ComposedLoop& loop, std::int64_t tick,
                     const std::set<std::string>& fired_events) const {
  const auto& t = loop.spec.trigger;
  if (t.kind == Trigger::Kind::Periodic) return tick % t.every == 0;
  return fired_events.count(t.event) > 0;
}

EvaluationRound LoopEngine::evaluate_due(const TwinSnapshot& snapshot,
                                         const EvaluationContext& context, std::int64_t tick,
                                         const std::set<std::string>& fired_events) {
  EvaluationRound round;
  for (const auto& [id, loop] : loops_) {
    if (!due(loop, tick, fired_events)) continue;
    try {
      auto outcome = evaluate_loop(loop, registry_, states_.at(id), snapshot, context, tick);
      round.rationales.emplace_back(id, outcome.rationale);
      if (outcome.proposal) {
        auto& st = states_.at(id);
        st.last_action_tick = tick;
        st.last_action = outcome.proposal->action.kind;
        round.proposals.push_back(std::move(*outcome.proposal));
      }
    } catch (const Error& e) {
      round.errors.push_back({id, e.what()});
    }
  }
  return round;
}

const ComposedLoop& LoopEngine::loop(const std::string& id) const {
  auto it = loops_.find(id);
  if (it == loops_.end()) throw Error(ErrorCode::UnknownLoop, "unknown loop " + id);
  return it->second;
}

const LoopState& LoopEngine::state(const std::string& id) const {
  auto it = states_.find(id);
  if (it == states_.end()) throw Error(ErrorCode::UnknownLoop, "unknown loop " + id);
  return it->second;
}

}  // namespace aiora
