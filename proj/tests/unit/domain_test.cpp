#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "aiora/topology.hpp"
#include "support/builders.hpp"
#include "support/expect_error.hpp"
#include "support/placement_oracle.hpp"

using namespace aiora;
using namespace aiora::test;

namespace {

bool has(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

Topology chain(std::initializer_list<std::tuple<const char*, const char*, double>> links) {
  Topology t;
  t.stakeholders.push_back({"op", StakeholderRole::MNO, {}});
  std::set<std::string> ids;
  for (const auto& [a, b, l] : links) {
    ids.insert(a);
    ids.insert(b);
    t.links.push_back({a, b, l, 100});
  }
  for (const auto& id : ids) t.segments.push_back(segment(id, "op", rv(1000)));
  return t;
}

}  // namespace

TEST(ValidateTopology, EmptyIsOk) {
  auto r = validate_topology(Topology{});
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ValidateTopology, UnknownOwner) {
  Topology t;
  t.segments.push_back(segment("s", "x", rv(1000)));
  auto r = validate_topology(t);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has(r.violations, "unknown owner x"));
}

TEST(ValidateTopology, NonPositiveLatency) {
  auto t = chain({{"a", "b", 1}});
  t.links[0].latency_ms = 0;
  EXPECT_TRUE(has(validate_topology(t).violations, "non-positive latency"));
}

TEST(ValidateTopology, DuplicateIdsAndNegativeCapacity) {
  auto t = chain({{"a", "b", 1}});
  t.segments.push_back(segment("a", "op", rv(-1)));
  auto v = validate_topology(t).violations;
  EXPECT_TRUE(has(v, "duplicate segment id a"));
  EXPECT_TRUE(has(v, "negative capacity"));
}

TEST(ValidateTopology, DanglingLinkAndPowerOrder) {
  auto t = chain({{"a", "b", 1}});
  t.links.push_back({"a", "ghost", 2, 10});
  t.segments[0].power_idle_w = 400;
  t.segments[0].power_max_w = 100;
  auto v = validate_topology(t).violations;
  EXPECT_TRUE(has(v, "dangling link endpoint ghost"));
  EXPECT_TRUE(has(v, "max power below idle power"));
}

TEST(ValidateTopology, AgreementFractionRange) {
  Topology t;
  t.stakeholders.push_back({"a", StakeholderRole::MNO, {{"b", 1.5}}});
  t.stakeholders.push_back({"b", StakeholderRole::EdgeProvider, {}});
  EXPECT_TRUE(has(validate_topology(t).violations, "agreement fraction out of range"));
}

TEST(ValidateTopology, DisconnectedGraphIsAWarning) {
  auto t = chain({{"a", "b", 1}});
  t.segments.push_back(segment("island", "op", rv(1000)));
  auto r = validate_topology(t);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.warnings.empty());
}

TEST(PathLatency, Identity) {
  auto t = chain({{"a", "b", 2}});
  EXPECT_EQ(path_latency(t, "a", "a"), 0.0);
}

TEST(PathLatency, ChainSums) {
  auto t = chain({{"a", "b", 2}, {"b", "c", 3}});
  EXPECT_EQ(path_latency(t, "a", "c"), 5.0);
}

TEST(PathLatency, TriangleTakesDetour) {
  auto t = chain({{"a", "b", 10}, {"a", "c", 2}, {"c", "b", 2}});
  EXPECT_EQ(path_latency(t, "a", "b"), 4.0);
}

TEST(PathLatency, UnknownSegmentAndUnreachable) {
  auto t = chain({{"a", "b", 2}});
  t.segments.push_back(segment("z", "op", rv(1)));
  EXPECT_AIORA_ERROR(path_latency(t, "a", "nope"), ErrorCode::UnknownSegment);
  EXPECT_FALSE(path_latency(t, "a", "z").has_value());
}

TEST(PathLatency, MatchesSimplePathEnumerationOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 60; ++round) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    Topology t;
    t.stakeholders.push_back({"op", StakeholderRole::MNO, {}});
    for (int i = 0; i < n; ++i) t.segments.push_back(segment("s" + std::to_string(i), "op", rv(1000)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::bernoulli_distribution(0.35)(rng))
          t.links.push_back({"s" + std::to_string(i), "s" + std::to_string(j),
                             std::uniform_real_distribution<double>(0.5, 30)(rng), 100});
    const PathOracle oracle(t);
    for (const auto& a : t.segments)
      for (const auto& b : t.segments) {
        const auto got = path_latency(t, a.id, b.id);
        const auto want = oracle.latency(a.id, b.id);
        ASSERT_EQ(got.has_value(), want.has_value());
        if (got) {
          EXPECT_NEAR(*got, *want, 1e-9);
          EXPECT_NEAR(*got, *path_latency(t, b.id, a.id), 1e-9);
          for (const auto& c : t.segments) {
            auto ab = path_latency(t, a.id, c.id), cb = path_latency(t, c.id, b.id);
            if (ab && cb) EXPECT_LE(*got, *ab + *cb + 1e-9);
          }
        }
      }
  }
}

TEST(LatencyModel, ZoneLatencyAndThroughput) {
  auto t = chain({{"a", "b", 5}, {"b", "c", 5}});
  t.links[1].bandwidth = 40;
  t.segments[2].capacity.bandwidth = 1000;  // c
  t.segments[1].capacity.bandwidth = 30;    // b
  t.zones.push_back({"z", {{"a", 2}}});
  LatencyModel m(t);
  EXPECT_EQ(m.from_zone("z", "a"), 2.0);
  EXPECT_EQ(m.from_zone("z", "c"), 12.0);
  EXPECT_EQ(m.throughput_from_zone("z", "c"), 40);
  EXPECT_EQ(m.throughput_from_zone("z", "b"), 30);
  EXPECT_AIORA_ERROR(m.from_zone("nowhere", "a"), ErrorCode::UnknownZone);
}

TEST(PowerDraw, Examples) {
  auto s = segment("s", "op", rv(1000), 100, 300);
  EXPECT_DOUBLE_EQ(power_draw(s, 0.0), 100.0);
  EXPECT_DOUBLE_EQ(power_draw(s, 1.0), 300.0);
  EXPECT_DOUBLE_EQ(power_draw(s, 0.25), 150.0);
  EXPECT_AIORA_ERROR(power_draw(s, 1.01), ErrorCode::UtilizationOutOfRange);
  EXPECT_AIORA_ERROR(power_draw(s, -0.01), ErrorCode::UtilizationOutOfRange);
}

TEST(PowerDraw, AffineAtElevenPoints) {
  auto s = segment("s", "op", rv(1000), 80, 330);
  const double slope = power_draw(s, 1.0) - power_draw(s, 0.0);
  double prev = -1;
  for (int i = 0; i <= 10; ++i) {
    const double u = i / 10.0;
    const double p = power_draw(s, u);
    EXPECT_NEAR(p - 80.0, slope * u, 1e-9);
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(CarbonRate, WattsTimesIntensity) {
  auto s = segment("s", "op", rv(1000), 100, 300, 400);
  EXPECT_DOUBLE_EQ(carbon_rate(s, 150.0), 60.0);
}

TEST(ResourceVector, AddThenSubtractRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> d(0, 1'000'000);
  for (int i = 0; i < 1000; ++i) {
    ResourceVector a{d(rng), d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng), d(rng)};
    EXPECT_EQ((a + b) - b, a);
    EXPECT_TRUE(a.fits_within(a + b));
  }
}

TEST(ResourceVector, PartialOrder) {
  EXPECT_TRUE(rv(1, 2).fits_within(rv(1, 2)));
  EXPECT_FALSE(rv(2, 1).fits_within(rv(1, 2)));
  EXPECT_FALSE(rv(1, 2).fits_within(rv(2, 1)));
  EXPECT_TRUE(rv(0).is_zero());
  EXPECT_FALSE(rv(0).positive());
  EXPECT_TRUE(rv(0, 1).positive());
}
