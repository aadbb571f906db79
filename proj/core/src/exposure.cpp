#include "aiora/exposure.hpp"

#include <algorithm>

#include "aiora/error.hpp"

namespace aiora {

ExposureRegistry::ExposureRegistry(const Topology& topology, const LifecycleManager& lifecycle)
    : topology_(topology), latency_(topology_), lifecycle_(lifecycle) {
  for (const auto& s : topology_.stakeholders) known_.push_back(s.id);
}

const BusinessScenario& ExposureRegistry::scenario_of(const std::string& continuum) const {
  return lifecycle_.continuum(continuum).scenario;
}

void ExposureRegistry::require(const std::string& actor, Operation op, EntityClass entity,
                               const BusinessScenario& scenario) const {
  auto d = authorize(actor, op, entity, scenario, known_);
  if (!d.allowed) throw Error(ErrorCode::Unauthorized, d.reason);
}

const EESRecord& ExposureRegistry::register_ees(const std::string& actor,
                                                const std::string& continuum, EESRecord record) {
  const auto& c = lifecycle_.continuum(continuum);
  require(actor, Operation::Register, EntityClass::Continuum, c.scenario);
  if (c.state != ContinuumState::Active)
    throw Error(ErrorCode::ContinuumNotActive,
                "continuum " + continuum + " is " + std::string(to_string(c.state)));
  topology_.segment(record.segment);
  if (record.id.empty()) throw Error(ErrorCode::ValidationError, "EES id is empty");
  if (ees_.count(record.id)) throw Error(ErrorCode::DuplicateId, "EES " + record.id + " exists");
  record.continuum = continuum;
  record.registered_by = actor;
  auto id = record.id;
  return ees_.emplace(id, std::move(record)).first->second;
}

const EASRecord& ExposureRegistry::register_eas(const std::string& actor, const std::string& ees,
                                                EASRecord record) {
  auto it = ees_.find(ees);
  if (it == ees_.end()) throw Error(ErrorCode::UnknownEES, "unknown EES " + ees);
  require(actor, Operation::Register, EntityClass::ApplicationServer,
          scenario_of(it->second.continuum));
  topology_.segment(record.segment);
  if (record.id.empty()) throw Error(ErrorCode::ValidationError, "EAS id is empty");
  if (eas_.count(record.id)) throw Error(ErrorCode::DuplicateId, "EAS " + record.id + " exists");
  record.ees = ees;
  record.registered_by = actor;
  auto id = record.id;
  return eas_.emplace(id, std::move(record)).first->second;
}

void ExposureRegistry::deregister_ees(const std::string& actor, const std::string& id) {
  auto it = ees_.find(id);
  if (it == ees_.end()) throw Error(ErrorCode::UnknownEES, "unknown EES " + id);
  require(actor, Operation::Register, EntityClass::Continuum, scenario_of(it->second.continuum));
  std::erase_if(eas_, [&](const auto& kv) { return kv.second.ees == id; });
  ees_.erase(it);
}

void ExposureRegistry::deregister_eas(const std::string& actor, const std::string& id) {
  auto it = eas_.find(id);
  if (it == eas_.end()) throw Error(ErrorCode::UnknownEntity, "unknown EAS " + id);
  require(actor, Operation::Register, EntityClass::ApplicationServer,
          scenario_of(ees_.at(it->second.ees).continuum));
  eas_.erase(it);
}

std::vector<std::string> ExposureRegistry::prune_inactive() {
  std::vector<std::string> dropped;
  for (auto it = ees_.begin(); it != ees_.end();) {
    const auto& cs = lifecycle_.continuums();
    auto c = cs.find(it->second.continuum);
    const bool live = c != cs.end() && (c->second.state == ContinuumState::Active ||
                                        c->second.state == ContinuumState::Maintenance ||
                                        c->second.state == ContinuumState::Modifying);
    if (live) {
      ++it;
      continue;
    }
    const auto id = it->first;
    std::erase_if(eas_, [&](const auto& kv) { return kv.second.ees == id; });
    dropped.push_back(id);
    it = ees_.erase(it);
  }
  return dropped;
}

ECSConfiguration ExposureRegistry::provision_client(const std::string& zone) const {
  if (!topology_.find_zone(zone)) throw Error(ErrorCode::UnknownZone, "unknown zone " + zone);
  ECSConfiguration cfg{zone, {}};
  for (const auto& [id, rec] : ees_) {
    if (auto l = latency_.from_zone(zone, rec.segment)) cfg.candidates.push_back({id, rec.segment, *l});
  }
  std::sort(cfg.candidates.begin(), cfg.candidates.end(), [](const auto& a, const auto& b) {
    return a.latency_ms != b.latency_ms ? a.latency_ms < b.latency_ms : a.ees < b.ees;
  });
  return cfg;
}

std::vector<DiscoveredEAS> ExposureRegistry::discover_eas(const std::string& ees,
                                                          const EASFilter& filter) const {
  auto it = ees_.find(ees);
  if (it == ees_.end()) throw Error(ErrorCode::UnknownEES, "unknown EES " + ees);
  std::vector<DiscoveredEAS> out;
  for (const auto& [id, rec] : eas_) {
    if (rec.ees != ees) continue;
    if (!std::includes(rec.capabilities.begin(), rec.capabilities.end(),
                       filter.capabilities.begin(), filter.capabilities.end()))
      continue;
    auto l = latency_.between(it->second.segment, rec.segment);
    if (filter.max_latency_ms && (!l || *l > *filter.max_latency_ms)) continue;
    out.push_back({rec, l.value_or(-1.0)});
  }
  return out;
}

}  // namespace aiora
