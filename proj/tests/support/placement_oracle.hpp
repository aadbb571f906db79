#pragma once

#include <optional>
#include <string>

#include "aiora/placement.hpp"
#include "aiora/topology.hpp"

namespace aiora::test {

// Reference model written without the library's search or graph code:
// latency and bandwidth come from enumerating every simple path.
class PathOracle {
 public:
  explicit PathOracle(const Topology& t);
  std::optional<double> latency(const std::string& from, const std::string& to) const;
  std::optional<double> zone_latency(const std::string& zone, const std::string& segment) const;
  std::int64_t zone_throughput(const std::string& zone, const std::string& segment) const;

 private:
  const Topology& t_;
};

struct OracleCost {
  double latency = 0, energy = 0, carbon = 0, money = 0, scalar = 0;
};

// Cost of a total assignment, or nullopt when it breaks a constraint.
std::optional<OracleCost> oracle_score(const Topology& t, const PathOracle& paths,
                                       const CapacityView& available,
                                       const ApplicationDescriptor& app, const ObjectiveWeights& w,
                                       const Assignment& assignment);

struct OracleResult {
  std::optional<Assignment> assignment;
  OracleCost cost;
  double key = 0;  // scalar + penalty * moves
  int moves = 0;
};

// Enumerates every assignment over the view's segments. With `current`,
// minimizes scalar + penalty * moves; an infinite penalty orders by moves
// first, then scalar.
OracleResult exhaustive_place(const Topology& t, const CapacityView& available,
                              const ApplicationDescriptor& app, const ObjectiveWeights& w,
                              const Assignment* current = nullptr, double penalty = 0.0);

}  // namespace aiora::test
