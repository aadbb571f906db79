#include "aiora/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>

#include "aiora/error.hpp"

namespace aiora {

std::optional<double> StakeholderDescriptor::agreement_with(const std::string& consumer) const {
  for (const auto& a : agreements) {
    if (a.peer == consumer) return a.fraction;
  }
  return std::nullopt;
}

const StakeholderDescriptor* Topology::find_stakeholder(const std::string& id) const {
  for (const auto& s : stakeholders)
    if (s.id == id) return &s;
  return nullptr;
}

const SegmentDescriptor* Topology::find_segment(const std::string& id) const {
  for (const auto& s : segments)
    if (s.id == id) return &s;
  return nullptr;
}

const ZoneDescriptor* Topology::find_zone(const std::string& id) const {
  for (const auto& z : zones)
    if (z.id == id) return &z;
  return nullptr;
}

const SegmentDescriptor& Topology::segment(const std::string& id) const {
  if (const auto* s = find_segment(id)) return *s;
  throw Error(ErrorCode::UnknownSegment, "unknown segment " + id);
}

ValidationReport validate_topology(const Topology& t) {
  ValidationReport r;
  auto& v = r.violations;

  std::set<std::string> stakeholder_ids;
  for (const auto& s : t.stakeholders) {
    if (!stakeholder_ids.insert(s.id).second) v.push_back("duplicate stakeholder id " + s.id);
  }
  for (const auto& s : t.stakeholders) {
    for (const auto& a : s.agreements) {
      if (!(a.fraction >= 0.0 && a.fraction <= 1.0))
        v.push_back("agreement fraction out of range for " + s.id + " -> " + a.peer);
      if (!stakeholder_ids.count(a.peer))
        v.push_back("unknown agreement peer " + a.peer + " (stakeholder " + s.id + ")");
    }
  }

  std::set<std::string> segment_ids;
  for (const auto& s : t.segments) {
    if (!segment_ids.insert(s.id).second) v.push_back("duplicate segment id " + s.id);
    if (!stakeholder_ids.count(s.owner))
      v.push_back("unknown owner " + s.owner + " (segment " + s.id + ")");
    if (!s.capacity.non_negative()) v.push_back("negative capacity on segment " + s.id);
    if (!(s.power_idle_w >= 0.0)) v.push_back("negative idle power on segment " + s.id);
    if (!(s.power_max_w >= s.power_idle_w))
      v.push_back("max power below idle power on segment " + s.id);
    if (!(s.carbon_intensity >= 0.0)) v.push_back("negative carbon intensity on segment " + s.id);
    if (!(s.unit_cost >= 0.0)) v.push_back("negative unit cost on segment " + s.id);
  }

  for (const auto& l : t.links) {
    const std::string name = "link " + l.a + "-" + l.b;
    if (!segment_ids.count(l.a)) v.push_back("dangling link endpoint " + l.a + " (" + name + ")");
    if (!segment_ids.count(l.b)) v.push_back("dangling link endpoint " + l.b + " (" + name + ")");
    if (l.a == l.b) v.push_back("link endpoints not distinct (" + name + ")");
    if (!(l.latency_ms > 0.0)) v.push_back("non-positive latency (" + name + ")");
    if (l.bandwidth < 0) v.push_back("negative bandwidth (" + name + ")");
  }

  std::set<std::string> zone_ids;
  for (const auto& z : t.zones) {
    if (!zone_ids.insert(z.id).second) v.push_back("duplicate zone id " + z.id);
    for (const auto& a : z.access) {
      if (!segment_ids.count(a.segment))
        v.push_back("zone " + z.id + " references unknown segment " + a.segment);
      if (!(a.latency_ms >= 0.0)) v.push_back("negative access latency in zone " + z.id);
    }
  }

  // Connectivity is a warning only: placement reports unreachability itself.
  if (r.ok() && t.segments.size() > 1) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& l : t.links) {
      adj[l.a].push_back(l.b);
      adj[l.b].push_back(l.a);
    }
    std::set<std::string> seen{t.segments.front().id};
    std::vector<std::string> stack{t.segments.front().id};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      for (const auto& n : adj[cur])
        if (seen.insert(n).second) stack.push_back(n);
    }
    if (seen.size() != t.segments.size())
      r.warnings.push_back("latency graph is not connected");
  }
  return r;
}

std::optional<double> path_latency(const Topology& t, const std::string& from,
                                   const std::string& to) {
  t.segment(from);
  t.segment(to);
  if (from == to) return 0.0;

  std::map<std::string, std::vector<std::pair<std::string, double>>> adj;
  for (const auto& l : t.links) {
    adj[l.a].emplace_back(l.b, l.latency_ms);
    adj[l.b].emplace_back(l.a, l.latency_ms);
  }
  using Item = std::pair<double, std::string>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::map<std::string, double> dist{{from, 0.0}};
  queue.emplace(0.0, from);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (u == to) return d;
    for (const auto& [n, w] : adj[u]) {
      auto it = dist.find(n);
      if (it == dist.end() || d + w < it->second) {
        dist[n] = d + w;
        queue.emplace(d + w, n);
      }
    }
  }
  return std::nullopt;
}

double power_draw(const SegmentDescriptor& s, double cpu_utilization) {
  if (!(cpu_utilization >= 0.0 && cpu_utilization <= 1.0))
    throw Error(ErrorCode::UtilizationOutOfRange,
                "utilization " + std::to_string(cpu_utilization) + " outside [0,1]");
  return s.power_idle_w + cpu_utilization * (s.power_max_w - s.power_idle_w);
}

double carbon_rate(const SegmentDescriptor& s, double watts) {
  // W -> kWh per hour is /1000.
  return watts / 1000.0 * s.carbon_intensity;
}

LatencyModel::LatencyModel(const Topology& t) {
  for (const auto& s : t.segments) {
    index_.emplace(s.id, ids_.size());
    ids_.push_back(s.id);
    own_bandwidth_.push_back(s.capacity.bandwidth);
  }
  const std::size_t n = ids_.size();
  latency_.assign(n * n, std::nullopt);
  widest_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    latency_[i * n + i] = 0.0;
    widest_[i * n + i] = std::numeric_limits<std::int64_t>::max();
  }
  for (const auto& l : t.links) {
    auto ia = index_.find(l.a);
    auto ib = index_.find(l.b);
    if (ia == index_.end() || ib == index_.end() || ia->second == ib->second) continue;
    const auto a = ia->second, b = ib->second;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      auto& cur = latency_[x * n + y];
      if (!cur || l.latency_ms < *cur) cur = l.latency_ms;
      widest_[x * n + y] = std::max(widest_[x * n + y], l.bandwidth);
    }
  }
  // Floyd-Warshall for latency, and its max-min variant for bandwidth.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ik = latency_[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        const auto& kj = latency_[k * n + j];
        if (ik && kj) {
          auto& ij = latency_[i * n + j];
          if (!ij || *ik + *kj < *ij) ij = *ik + *kj;
        }
        widest_[i * n + j] = std::max(widest_[i * n + j],
                                      std::min(widest_[i * n + k], widest_[k * n + j]));
      }
    }
  }
  for (const auto& z : t.zones) zones_[z.id] = z.access;
}

std::size_t LatencyModel::index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownSegment, "unknown segment " + id);
  return it->second;
}

std::optional<double> LatencyModel::between(const std::string& from, const std::string& to) const {
  return latency_[index(from) * ids_.size() + index(to)];
}

std::optional<double> LatencyModel::from_zone(const std::string& zone,
                                              const std::string& segment) const {
  auto it = zones_.find(zone);
  if (it == zones_.end()) throw Error(ErrorCode::UnknownZone, "unknown zone " + zone);
  const auto target = index(segment);
  std::optional<double> best;
  for (const auto& a : it->second) {
    const auto& p = latency_[index(a.segment) * ids_.size() + target];
    if (!p) continue;
    const double total = a.latency_ms + *p;
    if (!best || total < *best) best = total;
  }
  return best;
}

std::int64_t LatencyModel::throughput_from_zone(const std::string& zone,
                                                const std::string& segment) const {
  auto it = zones_.find(zone);
  if (it == zones_.end()) throw Error(ErrorCode::UnknownZone, "unknown zone " + zone);
  const auto target = index(segment);
  std::int64_t best = 0;
  for (const auto& a : it->second)
    best = std::max(best, widest_[index(a.segment) * ids_.size() + target]);
  return std::min(best, own_bandwidth_[target]);
}

std::string_view to_string(StakeholderRole r) {
  switch (r) {
    case StakeholderRole::MNO: return "MNO";
    case StakeholderRole::EdgeProvider: return "EdgeProvider";
    case StakeholderRole::AppProvider: return "AppProvider";
    case StakeholderRole::ContinuumBusinessProvider: return "ContinuumBusinessProvider";
  }
  return "?";
}

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::RadioAccess: return "RadioAccess";
    case SegmentKind::Edge: return "Edge";
    case SegmentKind::Cloud: return "Cloud";
  }
  return "?";
}

std::optional<StakeholderRole> parse_stakeholder_role(std::string_view s) {
  for (auto r : {StakeholderRole::MNO, StakeholderRole::EdgeProvider, StakeholderRole::AppProvider,
                 StakeholderRole::ContinuumBusinessProvider})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<SegmentKind> parse_segment_kind(std::string_view s) {
  for (auto k : {SegmentKind::RadioAccess, SegmentKind::Edge, SegmentKind::Cloud})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

}  // namespace aiora
