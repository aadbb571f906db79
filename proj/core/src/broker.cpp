#include "aiora/broker.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include <nlohmann/json.hpp>

#include "aiora/error.hpp"
#include "aiora/json_io.hpp"

namespace aiora {

namespace {

std::int64_t share_of(double fraction, std::int64_t capacity) {
  // Tolerance keeps 0.3 * 1000 at 300 rather than 299.
  return static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(capacity) + 1e-9));
}

std::string format_reservation_id(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "res-%06llu", static_cast<unsigned long long>(n));
  return buf;
}

}  // namespace

bool SegmentFilter::matches(const SegmentDescriptor& s) const {
  return (!segment || *segment == s.id) && (!kind || *kind == s.kind) &&
         (!owner || *owner == s.owner) && (!zone || *zone == s.zone);
}

ResourceBroker::ResourceBroker(std::vector<StakeholderDescriptor> stakeholders) {
  for (auto& s : stakeholders) {
    auto id = s.id;
    stakeholders_.emplace(std::move(id), std::move(s));
  }
}

void ResourceBroker::bind_continuum(const std::string& continuum, const std::string& provider) {
  continuum_provider_[continuum] = provider;
}

void ResourceBroker::register_segment(const SegmentDescriptor& s) {
  if (segments_.count(s.id))
    throw Error(ErrorCode::DuplicateSegment, "segment " + s.id + " already registered");
  if (!s.capacity.non_negative())
    throw Error(ErrorCode::ValidationError, "segment " + s.id + " has negative capacity");
  segments_.emplace(s.id, SegmentEntry{s, ResourceVector{}, s.capacity});
}

void ResourceBroker::deregister_segment(const std::string& id) {
  const auto& e = entry(id);
  if (!e.held.is_zero())
    throw Error(ErrorCode::SegmentBusy, "segment " + id + " has held reservations");
  for (const auto& r : reservations_) {
    if (r.second.segment == id && r.second.state == ReservationState::Held)
      throw Error(ErrorCode::SegmentBusy, "segment " + id + " has held reservations");
  }
  // Shrinking the owner's fleet must not push an existing agreement total
  // over its bound.
  const auto& owner = e.descriptor.owner;
  const auto fleet_after = fleet_capacity(owner) - e.descriptor.capacity;
  for (const auto& [key, held] : agreement_held_) {
    if (key.first != owner || held.is_zero()) continue;
    auto bound = agreement_bound(owner, key.second, fleet_after);
    if (bound && !held.fits_within(*bound))
      throw Error(ErrorCode::SegmentBusy,
                  "deregistering " + id + " would break the agreement bound of " + key.second);
  }
  segments_.erase(id);
}

FeasibilityReport ResourceBroker::query_feasibility(const std::vector<DemandLine>& request) const {
  FeasibilityReport report;
  for (const auto& [id, e] : segments_) report.residuals.emplace(id, e.residual);

  std::vector<std::string> ids;
  for (const auto& [id, e] : segments_) ids.push_back(id);

  // candidates[i] = segments that pass the filter and have enough residual.
  std::vector<std::vector<std::size_t>> candidates(request.size());
  bool every_line_has_candidate = true;
  for (std::size_t i = 0; i < request.size(); ++i) {
    bool any_match = false;
    for (std::size_t s = 0; s < ids.size(); ++s) {
      const auto& e = segments_.at(ids[s]);
      if (!request[i].filter.matches(e.descriptor)) continue;
      any_match = true;
      if (request[i].amount.fits_within(e.residual)) candidates[i].push_back(s);
    }
    if (!any_match) {
      report.blocking.push_back({"filter", "demand " + std::to_string(i) + " matches no segment"});
      every_line_has_candidate = false;
    } else if (candidates[i].empty()) {
      report.blocking.push_back({"capacity", "demand " + std::to_string(i) + " " +
                                                 request[i].amount.to_string() +
                                                 " exceeds every matching residual"});
      every_line_has_candidate = false;
    }
  }

  if (every_line_has_candidate) {
    // Kuhn's augmenting-path bipartite matching: demand lines -> segments.
    std::vector<int> owner_of(ids.size(), -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment =
        [&](std::size_t line, std::vector<bool>& visited) {
          for (auto s : candidates[line]) {
            if (visited[s]) continue;
            visited[s] = true;
            if (owner_of[s] < 0 || augment(static_cast<std::size_t>(owner_of[s]), visited)) {
              owner_of[s] = static_cast<int>(line);
              return true;
            }
          }
          return false;
        };
    std::size_t matched = 0;
    for (std::size_t i = 0; i < request.size(); ++i) {
      std::vector<bool> visited(ids.size(), false);
      if (augment(i, visited)) ++matched;
    }
    if (matched < request.size())
      report.blocking.push_back({"assignment", "no disjoint assignment of " +
                                                   std::to_string(request.size()) +
                                                   " demands to distinct segments"});
  }
  report.feasible = report.blocking.empty();
  return report;
}

Reservation ResourceBroker::reserve(const std::string& continuum, const std::string& segment,
                                    const ResourceVector& amount) {
  if (!amount.non_negative())
    throw Error(ErrorCode::ValidationError, "negative reservation amount " + amount.to_string());
  auto& e = entry(segment);
  if (!amount.fits_within(e.residual))
    throw Error(ErrorCode::InsufficientCapacity,
                "segment " + segment + " residual " + e.residual.to_string() + " < " +
                    amount.to_string());

  const auto consumer = consumer_of(continuum);
  const auto& owner = e.descriptor.owner;
  if (consumer) {
    auto bound = agreement_bound(owner, *consumer, fleet_capacity(owner));
    if (bound) {
      const auto total = agreement_held(owner, *consumer) + amount;
      if (!total.fits_within(*bound))
        throw Error(ErrorCode::AgreementExceeded,
                    "agreement " + owner + " -> " + *consumer + " allows " + bound->to_string() +
                        ", requested total " + total.to_string());
    }
  }

  Reservation r{format_reservation_id(next_id_++), continuum, segment, amount,
                ReservationState::Held};
  e.residual -= amount;
  e.held += amount;
  if (consumer) agreement_held_[{owner, *consumer}] += amount;
  reservations_.emplace(r.id, r);
  return r;
}

void ResourceBroker::release(const std::string& reservation_id) {
  auto it = reservations_.find(reservation_id);
  if (it == reservations_.end())
    throw Error(ErrorCode::UnknownReservation, "unknown reservation " + reservation_id);
  auto& r = it->second;
  if (r.state == ReservationState::Released)
    throw Error(ErrorCode::AlreadyReleased, "reservation " + reservation_id + " already released");
  auto& e = entry(r.segment);
  e.residual += r.amount;
  e.held -= r.amount;
  if (auto consumer = consumer_of(r.continuum)) {
    agreement_held_[{e.descriptor.owner, *consumer}] -= r.amount;
  }
  r.state = ReservationState::Released;
}

std::map<std::string, SegmentUsage> ResourceBroker::utilization_report() const {
  std::map<std::string, SegmentUsage> out;
  for (const auto& [id, e] : segments_)
    out.emplace(id, SegmentUsage{e.descriptor.capacity, e.held, e.residual});
  return out;
}

const SegmentDescriptor& ResourceBroker::segment(const std::string& id) const {
  return entry(id).descriptor;
}

ResourceVector ResourceBroker::residual(const std::string& segment) const {
  return entry(segment).residual;
}

const Reservation& ResourceBroker::reservation(const std::string& id) const {
  auto it = reservations_.find(id);
  if (it == reservations_.end())
    throw Error(ErrorCode::UnknownReservation, "unknown reservation " + id);
  return it->second;
}

std::vector<Reservation> ResourceBroker::held_by(const std::string& continuum) const {
  std::vector<Reservation> out;
  for (const auto& [id, r] : reservations_)
    if (r.continuum == continuum && r.state == ReservationState::Held) out.push_back(r);
  return out;
}

std::optional<ResourceVector> ResourceBroker::agreement_headroom(const std::string& owner,
                                                                 const std::string& consumer) const {
  auto bound = agreement_bound(owner, consumer, fleet_capacity(owner));
  if (!bound) return std::nullopt;
  return max(*bound - agreement_held(owner, consumer), ResourceVector{});
}

ResourceVector ResourceBroker::agreement_held(const std::string& owner,
                                              const std::string& consumer) const {
  auto it = agreement_held_.find({owner, consumer});
  return it == agreement_held_.end() ? ResourceVector{} : it->second;
}

std::optional<std::string> ResourceBroker::consumer_of(const std::string& continuum) const {
  auto it = continuum_provider_.find(continuum);
  if (it == continuum_provider_.end()) return std::nullopt;
  return it->second;
}

ResourceVector ResourceBroker::fleet_capacity(const std::string& owner) const {
  ResourceVector total;
  for (const auto& [id, e] : segments_)
    if (e.descriptor.owner == owner) total += e.descriptor.capacity;
  return total;
}

std::optional<ResourceVector> ResourceBroker::agreement_bound(const std::string& owner,
                                                              const std::string& consumer,
                                                              const ResourceVector& fleet) const {
  if (owner == consumer) return std::nullopt;
  double fraction = 0.0;
  if (auto it = stakeholders_.find(owner); it != stakeholders_.end())
    fraction = it->second.agreement_with(consumer).value_or(0.0);
  return ResourceVector{share_of(fraction, fleet.cpu), share_of(fraction, fleet.memory),
                        share_of(fraction, fleet.storage), share_of(fraction, fleet.bandwidth)};
}

ResourceBroker::SegmentEntry& ResourceBroker::entry(const std::string& id) {
  auto it = segments_.find(id);
  if (it == segments_.end()) throw Error(ErrorCode::UnknownSegment, "unknown segment " + id);
  return it->second;
}

const ResourceBroker::SegmentEntry& ResourceBroker::entry(const std::string& id) const {
  auto it = segments_.find(id);
  if (it == segments_.end()) throw Error(ErrorCode::UnknownSegment, "unknown segment " + id);
  return it->second;
}

nlohmann::json ResourceBroker::to_json() const {
  nlohmann::json j;
  j["next_id"] = next_id_;
  j["stakeholders"] = nlohmann::json::array();
  for (const auto& [id, s] : stakeholders_) j["stakeholders"].push_back(s);
  j["continuums"] = continuum_provider_;
  j["segments"] = nlohmann::json::array();
  for (const auto& [id, e] : segments_) j["segments"].push_back(e.descriptor);
  j["reservations"] = nlohmann::json::array();
  for (const auto& [id, r] : reservations_) j["reservations"].push_back(r);
  return j;
}

ResourceBroker ResourceBroker::from_json(const nlohmann::json& j) {
  json_io::check_keys(j, {"next_id", "stakeholders", "continuums", "segments", "reservations"},
                      "broker state");
  ResourceBroker b(j.at("stakeholders").get<std::vector<StakeholderDescriptor>>());
  for (const auto& [c, p] : j.at("continuums").items()) b.bind_continuum(c, p.get<std::string>());
  for (const auto& s : j.at("segments")) b.register_segment(s.get<SegmentDescriptor>());
  // Replay held reservations through the ledger so residuals are derived,
  // never trusted from the file.
  for (const auto& rj : j.at("reservations")) {
    auto r = rj.get<Reservation>();
    if (r.state == ReservationState::Held) {
      auto& e = b.entry(r.segment);
      if (!r.amount.fits_within(e.residual))
        throw Error(ErrorCode::ValidationError, "checkpoint overcommits segment " + r.segment);
      e.residual -= r.amount;
      e.held += r.amount;
      if (auto consumer = b.consumer_of(r.continuum))
        b.agreement_held_[{e.descriptor.owner, *consumer}] += r.amount;
    }
    b.reservations_.emplace(r.id, r);
  }
  b.next_id_ = j.at("next_id").get<std::uint64_t>();
  return b;
}

}  // namespace aiora
