#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aiora/resources.hpp"
#include "aiora/topology.hpp"

namespace aiora {

enum class ReservationState { Held, Released };

struct Reservation {
  std::string id;
  std::string continuum;
  std::string segment;
  ResourceVector amount;
  ReservationState state = ReservationState::Held;
};

// Selects candidate segments for a demand line. Empty fields match anything.
struct SegmentFilter {
  std::optional<std::string> segment;
  std::optional<SegmentKind> kind;
  std::optional<std::string> owner;
  std::optional<std::string> zone;

  bool matches(const SegmentDescriptor& s) const;
};

struct DemandLine {
  SegmentFilter filter;
  ResourceVector amount;
};

struct BlockingConstraint {
  std::string kind;    // "capacity", "filter", "assignment", "latency", ...
  std::string detail;

  friend bool operator==(const BlockingConstraint&, const BlockingConstraint&) = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::map<std::string, ResourceVector> residuals;
  std::vector<BlockingConstraint> blocking;
};

struct SegmentUsage {
  ResourceVector capacity;
  ResourceVector held;
  ResourceVector residual;
};

// The federated inventory. Every mutation goes through this object, so a
// single instance is the serialization point for all reservations.
//
// Agreements: when a continuum is bound to a business provider P and reserves
// on a segment owned by O != P, the (O, P) Held total is capped at
// floor(fraction * O's registered fleet capacity), per component. A missing
// agreement means fraction 0. Unbound continuums are not agreement-checked.
class ResourceBroker {
 public:
  ResourceBroker() = default;
  explicit ResourceBroker(std::vector<StakeholderDescriptor> stakeholders);

  void bind_continuum(const std::string& continuum, const std::string& provider);

  void register_segment(const SegmentDescriptor& s);
  void deregister_segment(const std::string& id);

  FeasibilityReport query_feasibility(const std::vector<DemandLine>& request) const;

  Reservation reserve(const std::string& continuum, const std::string& segment,
                      const ResourceVector& amount);
  void release(const std::string& reservation_id);

  std::map<std::string, SegmentUsage> utilization_report() const;

  bool has_segment(const std::string& id) const { return segments_.count(id) > 0; }
  const SegmentDescriptor& segment(const std::string& id) const;
  ResourceVector residual(const std::string& segment) const;
  const Reservation& reservation(const std::string& id) const;
  const std::map<std::string, Reservation>& reservations() const { return reservations_; }
  std::vector<Reservation> held_by(const std::string& continuum) const;

  // Remaining agreement allowance of `consumer` on `owner`'s fleet;
  // nullopt when unconstrained (owner == consumer).
  std::optional<ResourceVector> agreement_headroom(const std::string& owner,
                                                   const std::string& consumer) const;
  ResourceVector agreement_held(const std::string& owner, const std::string& consumer) const;

  // Checkpoint as `broker-state.json`.
  nlohmann::json to_json() const;
  static ResourceBroker from_json(const nlohmann::json& j);

 private:
  struct SegmentEntry {
    SegmentDescriptor descriptor;
    ResourceVector held;
    ResourceVector residual;
  };

  std::optional<std::string> consumer_of(const std::string& continuum) const;
  ResourceVector fleet_capacity(const std::string& owner) const;
  std::optional<ResourceVector> agreement_bound(const std::string& owner,
                                                const std::string& consumer,
                                                const ResourceVector& fleet) const;
  SegmentEntry& entry(const std::string& id);
  const SegmentEntry& entry(const std::string& id) const;

  std::map<std::string, StakeholderDescriptor> stakeholders_;
  std::map<std::string, std::string> continuum_provider_;
  std::map<std::string, SegmentEntry> segments_;
  std::map<std::string, Reservation> reservations_;
  std::map<std::pair<std::string, std::string>, ResourceVector> agreement_held_;
  std::uint64_t next_id_ = 1;
};

}  // namespace aiora
