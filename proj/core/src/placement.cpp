#include "aiora/placement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "aiora/error.hpp"

namespace aiora {

namespace {

struct Normalizers {
  double latency = 1.0;
  double energy = 1.0;
  double carbon = 1.0;
  double cost = 1.0;
};

double positive_or_one(double v) { return v > 0.0 && std::isfinite(v) ? v : 1.0; }

Normalizers normalizers_for(const Topology& t, const ApplicationDescriptor& app,
                            const ObjectiveWeights& w) {
  Normalizers n;
  double power_sum = 0.0, fleet_carbon = 0.0, max_unit_cost = 0.0;
  for (const auto& s : t.segments) {
    power_sum += s.power_max_w;
    fleet_carbon += carbon_rate(s, s.power_max_w);
    max_unit_cost = std::max(max_unit_cost, s.unit_cost);
  }
  double cores = 0.0;
  for (const auto& c : app.components) cores += static_cast<double>(c.demand.cpu) / 1000.0;

  n.latency = positive_or_one(w.latency_norm.value_or(app.requirements.max_latency_ms));
  n.energy = positive_or_one(w.energy_norm.value_or(power_sum));
  n.carbon = positive_or_one(w.carbon_norm.value_or(
      app.requirements.carbon_cap && *app.requirements.carbon_cap > 0.0
          ? *app.requirements.carbon_cap
          : fleet_carbon));
  n.cost = positive_or_one(w.cost_norm.value_or(max_unit_cost * cores));
  return n;
}

double scalarize(const ObjectiveWeights& w, const Normalizers& n, double latency, double energy,
                 double carbon, double money) {
  return w.latency * (latency / n.latency) + w.energy * (energy / n.energy) +
         w.carbon * (carbon / n.carbon) + w.cost * (money / n.cost);
}

double marginal_power(const SegmentDescriptor& s, const ResourceVector& demand) {
  if (s.capacity.cpu <= 0) return 0.0;
  const double share = static_cast<double>(demand.cpu) / static_cast<double>(s.capacity.cpu);
  return (s.power_max_w - s.power_idle_w) * share;
}

double money_rate(const SegmentDescriptor& s, const ResourceVector& demand) {
  return s.unit_cost * static_cast<double>(demand.cpu) / 1000.0;
}

// Components whose placement determines user-perceived latency: the EAS
// components, or every component when the app declares none.
std::vector<bool> latency_bearing(const ApplicationDescriptor& app) {
  const bool any_eas = std::any_of(app.components.begin(), app.components.end(),
                                   [](const auto& c) { return c.role == ComponentRole::EAS; });
  std::vector<bool> out;
  for (const auto& c : app.components) out.push_back(!any_eas || c.role == ComponentRole::EAS);
  return out;
}

bool zone_allowed(const ServiceRequirements& req, const ComponentSpec& c,
                  const SegmentDescriptor& s) {
  if (!req.data_locality || c.demand.storage <= 0) return true;
  const auto& zones = *req.data_locality;
  return std::find(zones.begin(), zones.end(), s.zone) != zones.end();
}

std::optional<double> zone_latency_dijkstra(const Topology& t, const std::string& zone,
                                            const std::string& segment) {
  const auto* z = t.find_zone(zone);
  if (!z) throw Error(ErrorCode::UnknownZone, "unknown zone " + zone);
  std::optional<double> best;
  for (const auto& a : z->access) {
    auto p = path_latency(t, a.segment, segment);
    if (!p) continue;
    if (!best || a.latency_ms + *p < *best) best = a.latency_ms + *p;
  }
  return best;
}

std::string fmt_ms(double v) {
  auto s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// ---- branch and bound ------------------------------------------------------

using Key = std::pair<double, double>;

struct Cell {
  std::optional<BlockingConstraint> violation;  // per-component constraint failures
  double latency = 0.0;
  double energy = 0.0;
  double carbon = 0.0;
  double money = 0.0;
};

class Search {
 public:
  Search(const Topology& t, const CapacityView& available, const ApplicationDescriptor& app,
         const ObjectiveWeights& w, const Assignment* current, double penalty)
      : app_(app), w_(w), norm_(normalizers_for(t, app, w)), penalty_(penalty) {
    for (const auto& [id, cap] : available) {
      topo_segments_.push_back(&t.segment(id));
      seg_ids_.push_back(id);
      capacity_.push_back(cap);
    }
    const std::size_t n = app.components.size();
    std::map<std::string, std::size_t> comp_index;
    for (std::size_t i = 0; i < n; ++i) comp_index[app.components[i].id] = i;

    coloc_.assign(n, {});
    anti_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& other : app.components[i].colocation) {
        auto it = comp_index.find(other);
        if (it == comp_index.end())
          throw Error(ErrorCode::UnknownComponent, "colocation references unknown " + other);
        coloc_[i].push_back(it->second);
        coloc_[it->second].push_back(i);
      }
      for (const auto& other : app.components[i].anti_affinity) {
        auto it = comp_index.find(other);
        if (it == comp_index.end())
          throw Error(ErrorCode::UnknownComponent, "anti_affinity references unknown " + other);
        anti_[i].push_back(it->second);
        anti_[it->second].push_back(i);
      }
    }

    const LatencyModel model(t);
    const auto bearing = latency_bearing(app);
    bearing_ = bearing;
    const auto& req = app.requirements;
    cells_.assign(n, std::vector<Cell>(seg_ids_.size()));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = app.components[i];
      for (std::size_t j = 0; j < seg_ids_.size(); ++j) {
        const auto& s = *topo_segments_[j];
        auto& cell = cells_[i][j];
        cell.energy = marginal_power(s, c.demand);
        cell.carbon = carbon_rate(s, cell.energy);
        cell.money = money_rate(s, c.demand);
        if (!c.demand.fits_within(capacity_[j])) {
          cell.violation = BlockingConstraint{"capacity", c.id + " exceeds available on " + s.id};
          continue;
        }
        if (bearing[i]) {
          auto lat = model.from_zone(req.user_zone, s.id);
          if (!lat) {
            cell.violation = BlockingConstraint{"latency", s.id + " unreachable from zone " +
                                                               req.user_zone};
            continue;
          }
          cell.latency = *lat;
          if (*lat > req.max_latency_ms) {
            cell.violation = BlockingConstraint{
                "latency", c.id + " on " + s.id + " at " + fmt_ms(*lat) + " ms > " +
                               fmt_ms(req.max_latency_ms) + " ms"};
            continue;
          }
          if (req.min_throughput > 0 &&
              model.throughput_from_zone(req.user_zone, s.id) < req.min_throughput) {
            cell.violation = BlockingConstraint{"throughput", c.id + " on " + s.id};
            continue;
          }
        }
        if (!zone_allowed(req, c, s)) {
          cell.violation = BlockingConstraint{"locality", c.id + " storage not allowed in zone " +
                                                              s.zone};
          continue;
        }
        if (req.carbon_cap && cell.carbon > *req.carbon_cap) {
          cell.violation = BlockingConstraint{"carbon", c.id + " on " + s.id + " emits " +
                                                            fmt_ms(cell.carbon) + " g/h > cap"};
          continue;
        }
      }
    }
    if (current) {
      current_.assign(n, -1);
      for (std::size_t i = 0; i < n; ++i) {
        auto it = current->find(app.components[i].id);
        if (it == current->end()) continue;
        auto pos = std::find(seg_ids_.begin(), seg_ids_.end(), it->second);
        if (pos != seg_ids_.end()) current_[i] = static_cast<int>(pos - seg_ids_.begin());
      }
    }
  }

  PlacementResult run() {
    PlacementResult result;
    const std::size_t n = app_.components.size();
    if (seg_ids_.empty()) {
      result.blocking.push_back({"capacity", "no candidate segments"});
      return result;
    }
    chosen_.assign(n, 0);
    used_.assign(seg_ids_.size(), ResourceVector{});
    dfs(0, 0.0, 0.0, 0.0, 0.0, 0);
    if (!best_) {
      for (const auto& [kind, detail] : blocking_) result.blocking.push_back({kind, detail});
      return result;
    }
    PlacementPlan plan;
    for (std::size_t i = 0; i < n; ++i)
      plan.assignment[app_.components[i].id] = seg_ids_[(*best_)[i]];
    plan.cost = best_cost_;
    result.plan = std::move(plan);
    return result;
  }

 private:
  Key key_of(double scalar, int moves) const {
    if (std::isinf(penalty_)) return {static_cast<double>(moves), scalar};
    return {scalar + penalty_ * moves, 0.0};
  }

  void note(const BlockingConstraint& b) { blocking_.emplace(b.kind, b.detail); }

  void dfs(std::size_t i, double latency, double energy, double carbon, double money, int moves) {
    const std::size_t n = app_.components.size();
    if (i == n) {
      const double scalar = scalarize(w_, norm_, latency, energy, carbon, money);
      const Key k = key_of(scalar, moves);
      if (!best_ || k < best_key_) {
        best_ = chosen_;
        best_key_ = k;
        best_cost_ = CostBreakdown{latency, energy, carbon, money, scalar};
      }
      return;
    }
    const auto& comp = app_.components[i];
    for (std::size_t j = 0; j < seg_ids_.size(); ++j) {
      const auto& cell = cells_[i][j];
      if (cell.violation) {
        note(*cell.violation);
        continue;
      }
      if (!(used_[j] + comp.demand).fits_within(capacity_[j])) {
        note({"capacity", "combined demand exceeds available on " + seg_ids_[j]});
        continue;
      }
      bool pair_ok = true;
      for (auto k : coloc_[i]) {
        if (k < i && chosen_[k] != j) {
          note({"colocation", comp.id + " must share a segment with " + app_.components[k].id});
          pair_ok = false;
          break;
        }
      }
      if (!pair_ok) continue;
      for (auto k : anti_[i]) {
        if (k < i && chosen_[k] == j) {
          note({"anti_affinity", comp.id + " must not share a segment with " +
                                     app_.components[k].id});
          pair_ok = false;
          break;
        }
      }
      if (!pair_ok) continue;
      const double next_carbon = carbon + cell.carbon;
      if (app_.requirements.carbon_cap && next_carbon > *app_.requirements.carbon_cap) {
        note({"carbon", "total carbon " + fmt_ms(next_carbon) + " g/h exceeds cap"});
        continue;
      }
      const double next_latency = bearing_[i] ? std::max(latency, cell.latency) : latency;
      const double next_energy = energy + cell.energy;
      const double next_money = money + cell.money;
      int next_moves = moves;
      if (!current_.empty() && current_[i] != static_cast<int>(j)) ++next_moves;
      // Every term is non-decreasing along a branch, so the partial key
      // bounds all completions. Equal keys lose to the earlier assignment.
      if (best_) {
        const Key lb = key_of(
            scalarize(w_, norm_, next_latency, next_energy, next_carbon, next_money), next_moves);
        if (!(lb < best_key_)) continue;
      }
      chosen_[i] = j;
      used_[j] += comp.demand;
      dfs(i + 1, next_latency, next_energy, next_carbon, next_money, next_moves);
      used_[j] -= comp.demand;
    }
  }

  const ApplicationDescriptor& app_;
  const ObjectiveWeights& w_;
  Normalizers norm_;
  double penalty_;
  std::vector<const SegmentDescriptor*> topo_segments_;
  std::vector<std::string> seg_ids_;
  std::vector<ResourceVector> capacity_;
  std::vector<std::vector<std::size_t>> coloc_, anti_;
  std::vector<bool> bearing_;
  std::vector<std::vector<Cell>> cells_;
  std::vector<int> current_;

  std::vector<std::size_t> chosen_;
  std::vector<ResourceVector> used_;
  std::optional<std::vector<std::size_t>> best_;
  Key best_key_{0.0, 0.0};
  CostBreakdown best_cost_;
  std::map<std::string, std::string> blocking_;
};

void require_valid(const ApplicationDescriptor& app, const ObjectiveWeights& w) {
  if (!w.valid()) throw Error(ErrorCode::BadParams, "objective weights need one positive weight");
  auto problems = validate_application(app);
  if (!problems.empty())
    throw Error(ErrorCode::ValidationError, "invalid application " + app.id, problems);
}

}  // namespace

const ComponentSpec* ApplicationDescriptor::find_component(const std::string& cid) const {
  for (const auto& c : components)
    if (c.id == cid) return &c;
  return nullptr;
}

std::vector<std::string> validate_application(const ApplicationDescriptor& app) {
  std::vector<std::string> out;
  if (app.components.empty()) out.push_back("application " + app.id + " has no components");
  std::set<std::string> ids;
  for (const auto& c : app.components)
    if (!ids.insert(c.id).second) out.push_back("duplicate component id " + c.id);
  for (const auto& c : app.components) {
    if (!c.demand.non_negative()) out.push_back("negative demand on " + c.id);
    for (const auto& x : c.colocation) {
      if (!ids.count(x)) out.push_back(c.id + " colocation references unknown " + x);
      if (std::find(c.anti_affinity.begin(), c.anti_affinity.end(), x) != c.anti_affinity.end())
        out.push_back(c.id + " lists " + x + " in both colocation and anti_affinity");
    }
    for (const auto& x : c.anti_affinity)
      if (!ids.count(x)) out.push_back(c.id + " anti_affinity references unknown " + x);
  }
  if (!(app.requirements.max_latency_ms > 0.0))
    out.push_back("application " + app.id + " max_latency must be positive");
  return out;
}

bool ObjectiveWeights::valid() const {
  const bool non_negative = latency >= 0 && energy >= 0 && carbon >= 0 && cost >= 0;
  return non_negative && (latency > 0 || energy > 0 || carbon > 0 || cost > 0);
}

ObjectiveWeights ObjectiveWeights::scaled(double k) const {
  auto out = *this;
  out.latency *= k;
  out.energy *= k;
  out.carbon *= k;
  out.cost *= k;
  return out;
}

bool PlacementResult::blocked_by(const std::string& kind) const {
  return std::any_of(blocking.begin(), blocking.end(),
                     [&](const auto& b) { return b.kind == kind; });
}

const PlacementPlan& PlacementResult::value() const {
  if (!plan) {
    std::vector<std::string> details;
    for (const auto& b : blocking) details.push_back(b.kind + ": " + b.detail);
    throw Error(ErrorCode::Infeasible, "no feasible placement", details);
  }
  return *plan;
}

ScoreResult score_placement(const Topology& t, const ApplicationDescriptor& app,
                            const Assignment& assignment, const ObjectiveWeights& w,
                            const CapacityView* available) {
  for (const auto& [cid, sid] : assignment) {
    if (!app.find_component(cid))
      throw Error(ErrorCode::UnknownComponent, "unknown component " + cid);
    t.segment(sid);
  }
  for (const auto& c : app.components)
    if (!assignment.count(c.id))
      throw Error(ErrorCode::UnknownComponent, "component " + c.id + " is not assigned");

  ScoreResult r;
  const auto& req = app.requirements;
  const auto bearing = latency_bearing(app);

  std::map<std::string, ResourceVector> load;
  for (const auto& c : app.components) load[assignment.at(c.id)] += c.demand;
  for (const auto& [sid, demand] : load) {
    ResourceVector cap;
    if (available) {
      auto it = available->find(sid);
      if (it == available->end()) {
        r.violations.push_back({"capacity", sid + " is not available"});
        continue;
      }
      cap = it->second;
    } else {
      cap = t.segment(sid).capacity;
    }
    if (!demand.fits_within(cap))
      r.violations.push_back({"capacity", "demand " + demand.to_string() + " exceeds " +
                                              cap.to_string() + " on " + sid});
  }

  CostBreakdown cost;
  std::optional<LatencyModel> model;
  for (std::size_t i = 0; i < app.components.size(); ++i) {
    const auto& c = app.components[i];
    const auto& s = t.segment(assignment.at(c.id));
    const double watts = marginal_power(s, c.demand);
    cost.energy_watts += watts;
    cost.carbon_g_per_h += carbon_rate(s, watts);
    cost.money_per_h += money_rate(s, c.demand);

    if (bearing[i]) {
      auto lat = zone_latency_dijkstra(t, req.user_zone, s.id);
      if (!lat) {
        r.violations.push_back({"latency", s.id + " unreachable from zone " + req.user_zone});
      } else {
        cost.latency_ms = std::max(cost.latency_ms, *lat);
        if (*lat > req.max_latency_ms)
          r.violations.push_back({"latency", c.id + " at " + fmt_ms(*lat) + " ms > " +
                                                 fmt_ms(req.max_latency_ms) + " ms"});
      }
      if (req.min_throughput > 0) {
        if (!model) model.emplace(t);
        if (model->throughput_from_zone(req.user_zone, s.id) < req.min_throughput)
          r.violations.push_back({"throughput", c.id + " on " + s.id});
      }
    }
    if (!zone_allowed(req, c, s))
      r.violations.push_back({"locality", c.id + " storage not allowed in zone " + s.zone});
    for (const auto& other : c.colocation) {
      if (!app.find_component(other))
        throw Error(ErrorCode::UnknownComponent, "colocation references unknown " + other);
      if (assignment.at(other) != s.id)
        r.violations.push_back({"colocation", c.id + " and " + other + " are split"});
    }
    for (const auto& other : c.anti_affinity) {
      if (!app.find_component(other))
        throw Error(ErrorCode::UnknownComponent, "anti_affinity references unknown " + other);
      if (assignment.at(other) == s.id)
        r.violations.push_back({"anti_affinity", c.id + " and " + other + " share " + s.id});
    }
  }
  if (req.carbon_cap && cost.carbon_g_per_h > *req.carbon_cap)
    r.violations.push_back({"carbon", "carbon " + fmt_ms(cost.carbon_g_per_h) +
                                          " g/h exceeds cap " + fmt_ms(*req.carbon_cap)});

  const auto norm = normalizers_for(t, app, w);
  cost.scalar = scalarize(w, norm, cost.latency_ms, cost.energy_watts, cost.carbon_g_per_h,
                          cost.money_per_h);
  if (r.violations.empty()) r.cost = cost;
  return r;
}

PlacementResult place(const Topology& t, const CapacityView& available,
                      const ApplicationDescriptor& app, const ObjectiveWeights& w) {
  require_valid(app, w);
  return Search(t, available, app, w, nullptr, 0.0).run();
}

PlacementResult replan_migration(const Assignment& current, const Topology& t,
                                 const CapacityView& available,
                                 const ApplicationDescriptor& app, const ObjectiveWeights& w,
                                 double move_penalty) {
  require_valid(app, w);
  if (!(move_penalty >= 0.0))
    throw Error(ErrorCode::BadParams, "move penalty must be non-negative");
  return Search(t, available, app, w, &current, move_penalty).run();
}

CapacityView full_capacity_view(const Topology& t) {
  CapacityView v;
  for (const auto& s : t.segments) v[s.id] = s.capacity;
  return v;
}

std::string_view to_string(ComponentRole r) {
  switch (r) {
    case ComponentRole::EAS: return "EAS";
    case ComponentRole::EES: return "EES";
    case ComponentRole::ECS: return "ECS";
    case ComponentRole::Generic: return "Generic";
  }
  return "?";
}

std::optional<ComponentRole> parse_component_role(std::string_view s) {
  for (auto r : {ComponentRole::EAS, ComponentRole::EES, ComponentRole::ECS, ComponentRole::Generic})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::string_view to_string(AvailabilityClass a) {
  return a == AvailabilityClass::High ? "High" : "BestEffort";
}

std::optional<AvailabilityClass> parse_availability_class(std::string_view s) {
  if (s == "High") return AvailabilityClass::High;
  if (s == "BestEffort") return AvailabilityClass::BestEffort;
  return std::nullopt;
}

}  // namespace aiora
