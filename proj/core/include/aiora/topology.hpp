#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aiora/resources.hpp"

namespace aiora {

enum class StakeholderRole { MNO, EdgeProvider, AppProvider, ContinuumBusinessProvider };
enum class SegmentKind { RadioAccess, Edge, Cloud };

struct Agreement {
  std::string peer;        // consumer stakeholder id
  double fraction = 0.0;   // share of the owner's fleet the peer may hold, 0..1
};

struct StakeholderDescriptor {
  std::string id;
  StakeholderRole role = StakeholderRole::MNO;
  std::vector<Agreement> agreements;

  // Allowed fraction for `consumer`, nullopt when no agreement is declared.
  std::optional<double> agreement_with(const std::string& consumer) const;
};

struct SegmentDescriptor {
  std::string id;
  std::string owner;
  SegmentKind kind = SegmentKind::Edge;
  ResourceVector capacity;
  double power_idle_w = 0.0;
  double power_max_w = 0.0;
  double carbon_intensity = 0.0;  // gCO2 per kWh
  std::string zone;
  double unit_cost = 0.0;         // per cpu core (1000 millicores) per hour
};

struct LinkDescriptor {
  std::string a;
  std::string b;
  double latency_ms = 0.0;   // one-way
  std::int64_t bandwidth = 0;  // Mbps
};

struct ZoneAccess {
  std::string segment;
  double latency_ms = 0.0;
};

struct ZoneDescriptor {
  std::string id;
  std::vector<ZoneAccess> access;
};

struct Topology {
  std::vector<StakeholderDescriptor> stakeholders;
  std::vector<SegmentDescriptor> segments;
  std::vector<LinkDescriptor> links;
  std::vector<ZoneDescriptor> zones;

  const StakeholderDescriptor* find_stakeholder(const std::string& id) const;
  const SegmentDescriptor* find_segment(const std::string& id) const;
  const ZoneDescriptor* find_zone(const std::string& id) const;
  // Throws UnknownSegment.
  const SegmentDescriptor& segment(const std::string& id) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_topology(const Topology& t);

// Shortest one-way latency between two segments over the link graph.
// nullopt when no path exists. Throws UnknownSegment.
std::optional<double> path_latency(const Topology& t, const std::string& from,
                                   const std::string& to);

// Affine power model. Throws UtilizationOutOfRange outside [0, 1].
double power_draw(const SegmentDescriptor& s, double cpu_utilization);

// gCO2 per hour emitted by drawing `watts` on segment `s`.
double carbon_rate(const SegmentDescriptor& s, double watts);

// All-pairs view of a topology, computed once. Answers segment-to-segment
// latency, user-zone-to-segment latency, and bottleneck bandwidth.
class LatencyModel {
 public:
  explicit LatencyModel(const Topology& t);

  std::optional<double> between(const std::string& from, const std::string& to) const;
  // min over the zone's access points of (access latency + path latency).
  // Throws UnknownZone / UnknownSegment.
  std::optional<double> from_zone(const std::string& zone, const std::string& segment) const;
  // Widest-path bandwidth from the zone to `segment`, capped by the segment's
  // own bandwidth capacity. 0 when unreachable.
  std::int64_t throughput_from_zone(const std::string& zone,
                                    const std::string& segment) const;

  const std::vector<std::string>& segment_ids() const { return ids_; }

 private:
  std::size_t index(const std::string& id) const;

  std::vector<std::string> ids_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::optional<double>> latency_;   // row-major n*n
  std::vector<std::int64_t> widest_;             // row-major n*n, 0 = none
  std::vector<std::int64_t> own_bandwidth_;
  std::map<std::string, std::vector<ZoneAccess>> zones_;
};

std::string_view to_string(StakeholderRole r);
std::string_view to_string(SegmentKind k);
std::optional<StakeholderRole> parse_stakeholder_role(std::string_view s);
std::optional<SegmentKind> parse_segment_kind(std::string_view s);

}  // namespace aiora
