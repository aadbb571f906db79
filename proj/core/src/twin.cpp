#include "aiora/twin.hpp"

#include <algorithm>

#include "aiora/error.hpp"

namespace aiora {

namespace {

constexpr std::string_view kSegment = "segment/";
constexpr std::string_view kApp = "app/";
constexpr std::string_view kQuota = "quota/";

bool starts_with(const std::string& s, std::string_view p) { return s.rfind(p, 0) == 0; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double cpu_share(const SegmentDescriptor& s, const ResourceVector& demand) {
  if (s.capacity.cpu <= 0) return 0.0;
  return static_cast<double>(demand.cpu) / static_cast<double>(s.capacity.cpu);
}

}  // namespace

std::optional<double> TwinSnapshot::metric(const std::string& source,
                                           const std::string& name) const {
  auto it = raw.find(source);
  if (it == raw.end()) return std::nullopt;
  auto m = it->second.find(name);
  if (m == it->second.end()) return std::nullopt;
  return m->second.value;
}

DigitalTwin::DigitalTwin(Topology topology)
    : topology_(std::move(topology)), latency_(topology_) {}

void DigitalTwin::ingest(const std::vector<TelemetryRecord>& records) {
  // Validate the whole batch before touching state.
  auto last = last_tick_;
  for (const auto& r : records) {
    auto it = last.find(r.source);
    if (it != last.end() && r.tick < it->second)
      throw Error(ErrorCode::OutOfOrderTelemetry,
                  "telemetry for " + r.source + " regresses from tick " +
                      std::to_string(it->second) + " to " + std::to_string(r.tick));
    last[r.source] = r.tick;
  }
  for (const auto& r : records) {
    auto& series = series_[{r.source, r.metric}];
    if (!series.empty() && series.back().tick == r.tick) {
      series.back() = {r.tick, r.value, r.provenance};  // last write wins
    } else {
      series.push_back({r.tick, r.value, r.provenance});
    }
  }
  last_tick_ = std::move(last);
}

void DigitalTwin::import_external(std::vector<TelemetryRecord> records) {
  for (auto& r : records) r.provenance = Provenance::ExternalTwin;
  ingest(records);
}

void DigitalTwin::set_deployment(const std::string& app, DeploymentView view) {
  deployments_[app] = std::move(view);
}

void DigitalTwin::remove_deployment(const std::string& app) { deployments_.erase(app); }

TwinSnapshot DigitalTwin::snapshot(std::int64_t tick) const {
  TwinSnapshot s;
  s.tick = tick;
  for (const auto& [key, series] : series_) {
    auto it = std::upper_bound(series.begin(), series.end(), tick,
                               [](std::int64_t t, const Sample& x) { return t < x.tick; });
    if (it == series.begin()) continue;
    --it;
    s.raw[key.first][key.second] = MetricSample{it->value, it->provenance};
  }

  auto external = [](const std::map<std::string, MetricSample>& metrics) {
    return std::any_of(metrics.begin(), metrics.end(), [](const auto& m) {
      return m.second.provenance == Provenance::ExternalTwin;
    });
  };
  auto value_or = [](const std::map<std::string, MetricSample>& metrics, const std::string& name,
                     double fallback) {
    auto it = metrics.find(name);
    return it == metrics.end() ? fallback : it->second.value;
  };

  for (const auto& seg : topology_.segments) {
    SegmentView v;
    if (auto it = s.raw.find(std::string(kSegment) + seg.id); it != s.raw.end()) {
      v.utilization = clamp01(value_or(it->second, "cpu_utilization", 0.0));
      v.reserved_fraction = clamp01(value_or(it->second, "reserved_fraction", 0.0));
      const auto status = static_cast<int>(value_or(it->second, "status", 0.0));
      v.status = status == 2 ? SegmentStatus::Failed
                             : (status == 1 ? SegmentStatus::Draining : SegmentStatus::Up);
      v.provenance = external(it->second) ? Provenance::ExternalTwin : Provenance::Local;
    }
    s.segments[seg.id] = v;
    refresh_derived(s, seg.id);
  }
  for (const auto& [source, metrics] : s.raw) {
    if (starts_with(source, kApp)) {
      AppKpis k;
      k.latency_ms = value_or(metrics, "latency_ms", 0.0);
      k.throughput_mbps = value_or(metrics, "throughput_mbps", 0.0);
      k.ready_instances = value_or(metrics, "ready_instances", 0.0);
      k.provenance = external(metrics) ? Provenance::ExternalTwin : Provenance::Local;
      s.apps[source.substr(kApp.size())] = k;
    } else if (starts_with(source, kQuota)) {
      QuotaKpis q;
      q.utilization = clamp01(value_or(metrics, "utilization", 0.0));
      q.quota_cpu = value_or(metrics, "quota_cpu", 0.0);
      q.provenance = external(metrics) ? Provenance::ExternalTwin : Provenance::Local;
      s.quotas[source] = q;
    }
  }
  s.deployments = deployments_;
  for (const auto& [app, view] : deployments_) s.apps.try_emplace(app);
  return s;
}

void DigitalTwin::refresh_derived(TwinSnapshot& s, const std::string& segment) const {
  const auto& desc = topology_.segment(segment);
  auto& v = s.segments.at(segment);
  v.power_w = v.status == SegmentStatus::Failed ? 0.0 : power_draw(desc, v.utilization);
  v.carbon_g_per_h = carbon_rate(desc, v.power_w);
}

void DigitalTwin::refresh_app(TwinSnapshot& s, const std::string& app) const {
  const auto& view = s.deployments.at(app);
  const bool any_eas = std::any_of(view.components.begin(), view.components.end(),
                                   [](const auto& c) { return c.second.role == ComponentRole::EAS; });
  double latency = 0.0;
  std::optional<double> throughput;
  for (const auto& [cid, c] : view.components) {
    if (any_eas && c.role != ComponentRole::EAS) continue;
    if (auto l = latency_.from_zone(view.user_zone, c.segment)) latency = std::max(latency, *l);
    const auto bw = static_cast<double>(latency_.throughput_from_zone(view.user_zone, c.segment));
    throughput = throughput ? std::min(*throughput, bw) : bw;
  }
  auto& k = s.apps[app];
  k.latency_ms = latency;
  k.throughput_mbps = throughput.value_or(0.0);
}

TwinSnapshot DigitalTwin::what_if(const TwinSnapshot& snap,
                                  const ActuationProposal& proposal) const {
  TwinSnapshot out = snap;
  const auto& a = proposal.action;

  auto add_utilization = [&](const std::string& segment, double delta) {
    auto& v = out.segments.at(segment);
    const double next = v.utilization + delta;
    if (next > 1.0) out.saturated.insert(segment);
    v.utilization = clamp01(next);
    refresh_derived(out, segment);
  };

  switch (a.kind) {
    case ActionKind::Reconfigure:
    case ActionKind::NegotiateQuality:
      return out;
    case ActionKind::ScaleUp:
    case ActionKind::ScaleDown: {
      auto q = parse_quota_entity(proposal.target);
      if (!q || !topology_.find_segment(q->segment) || !out.segments.count(q->segment))
        throw Error(ErrorCode::UnknownEntity, "unknown scale target " + proposal.target);
      const auto& desc = topology_.segment(q->segment);
      const double sign = a.kind == ActionKind::ScaleUp ? 1.0 : -1.0;
      auto& v = out.segments.at(q->segment);
      const double next = v.reserved_fraction + sign * cpu_share(desc, a.amount);
      if (next > 1.0) out.saturated.insert(q->segment);
      v.reserved_fraction = clamp01(next);
      if (auto it = out.quotas.find(proposal.target); it != out.quotas.end()) {
        auto& k = it->second;
        const double used = k.utilization * k.quota_cpu;
        k.quota_cpu = std::max(0.0, k.quota_cpu + sign * static_cast<double>(a.amount.cpu));
        k.utilization = k.quota_cpu > 0.0 ? clamp01(used / k.quota_cpu) : 1.0;
      }
      return out;
    }
    case ActionKind::Migrate: {
      auto app = parse_app_entity(proposal.target);
      if (!app || !out.deployments.count(*app))
        throw Error(ErrorCode::UnknownEntity, "unknown migration target " + proposal.target);
      auto& view = out.deployments.at(*app);
      auto cit = view.components.find(a.component);
      if (cit == view.components.end())
        throw Error(ErrorCode::UnknownEntity, "unknown component " + a.component);
      if (!topology_.find_segment(a.segment))
        throw Error(ErrorCode::UnknownEntity, "unknown segment " + a.segment);
      auto& comp = cit->second;
      const auto from = comp.segment;
      if (from != a.segment) {
        add_utilization(from, -cpu_share(topology_.segment(from), comp.demand));
        add_utilization(a.segment, cpu_share(topology_.segment(a.segment), comp.demand));
        comp.segment = a.segment;
      }
      refresh_app(out, *app);
      return out;
    }
  }
  return out;
}

std::string_view to_string(Provenance p) {
  return p == Provenance::Local ? "Local" : "ExternalTwin";
}

}  // namespace aiora
