// Copyright 2026 The fdplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fdplace/oracle.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fdplace/error.hpp"
#include "fdplace/generate.hpp"
#include "support/fixtures.hpp"
#include "support/reference.hpp"

namespace fdplace {
namespace {

using testing::fixture_json;
using testing::fixture_model;

Placement fixture_placement(const FailureModel& m, const std::string& name) {
  return placement_from_ids(m, fixture_json(name)["leaves"].get<std::vector<std::string>>());
}

NodeIndex root_of(const FailureModel& m, NodeIndex v) {
  while (m.node(v).parent) v = *m.node(v).parent;
  return v;
}

TEST(OracleSingleTest, TwoRowDatacenter) {
  FailureModel m = fixture_model("datacenter_model.json");
  OracleSingleResult r = oracle_single(m, 3);
  EXPECT_EQ(r.aggregate, (FailureAggregate{0, 1, 7, 7}));
  EXPECT_EQ(r.evaluated, 84u);
  auto expected = ref::best_single(m, 3);
  std::set<std::vector<NodeIndex>> got;
  for (const auto& p : r.optimal) got.insert(p.leaves);
  EXPECT_EQ(got, expected.optimal);
}

TEST(OracleSingleTest, MatchesBruteForceAndIsBalanced) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    FailureModel m = ref::random_model(seed, 9, 4);
    for (std::int64_t rho = 1; rho <= static_cast<std::int64_t>(m.leaves().size()); ++rho) {
      OracleSingleResult r = oracle_single(m, rho);
      auto expected = ref::best_single(m, rho);
      EXPECT_EQ(r.aggregate.entries(), expected.best);
      EXPECT_EQ(r.optimal.size(), expected.optimal.size());
      for (const auto& p : r.optimal) {
        EXPECT_TRUE(expected.optimal.count(p.leaves));
        EXPECT_TRUE(check_balanced(m, p).empty()) << "seed " << seed << " rho " << rho;
      }
    }
  }
}

TEST(OracleSingleTest, ThreadCountDoesNotChangeResult) {
  FailureModel m = ref::random_model(77, 14, 4, 1, 12);
  OracleSingleResult a = oracle_single(m, 5, kDefaultOracleGuard, 1);
  OracleSingleResult b = oracle_single(m, 5, kDefaultOracleGuard, 3);
  EXPECT_EQ(a.aggregate, b.aggregate);
  EXPECT_EQ(a.evaluated, b.evaluated);
  ASSERT_EQ(a.optimal.size(), b.optimal.size());
  for (std::size_t i = 0; i < a.optimal.size(); ++i) EXPECT_EQ(a.optimal[i].leaves, b.optimal[i].leaves);
}

TEST(OracleSingleTest, GuardRefusesLargeSearch) {
  GeneratorOptions o;
  o.leaves = 24;
  FailureModel m = generate_model(o);
  try {
    oracle_single(m, 12, 1000);
    FAIL() << "guard did not trip";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGuardTripped);
  }
  EXPECT_THROW(oracle_single(m, 0), Error);
}

TEST(BinomialTest, SaturatesAtCap) {
  EXPECT_EQ(binomial_capped(9, 3, 1000), 84u);
  EXPECT_EQ(binomial_capped(40, 20, 1000), 1000u);
  EXPECT_EQ(binomial_capped(3, 5, 1000), 0u);
}

TEST(OracleMultiTest, MatchesBruteForce) {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    FailureModel m = ref::random_model(seed, 6, 3, 2);
    std::vector<std::int64_t> sizes(1 + rng() % 3);
    for (auto& s : sizes) s = 1 + static_cast<std::int64_t>(rng() % std::min<std::size_t>(3, m.leaves().size()));
    auto expected = ref::best_multi(m, sizes);
    if (!expected) {
      EXPECT_THROW(oracle_multi(m, sizes), Error);
      continue;
    }
    OracleMultiResult r = oracle_multi(m, sizes);
    EXPECT_EQ(r.aggregate.entries(), *expected) << "seed " << seed;
    EXPECT_EQ(multi_aggregate(m, r.witness), r.aggregate);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      EXPECT_EQ(static_cast<std::int64_t>(r.witness.blocks[i].leaves.size()), sizes[i]);
    }
    OracleMultiResult threaded = oracle_multi(m, sizes, kDefaultOracleGuard, 3);
    EXPECT_EQ(threaded.aggregate, r.aggregate);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      EXPECT_EQ(threaded.witness.blocks[i].leaves, r.witness.blocks[i].leaves);
    }
  }
}

TEST(OracleMultiTest, EqualBlocksAreEnumeratedOnce) {
  FailureModel m = parse_model(R"({"nodes": [{"id": "r"},
      {"id": "a", "parent": "r", "capacity": 2}, {"id": "b", "parent": "r", "capacity": 2},
      {"id": "c", "parent": "r", "capacity": 2}, {"id": "d", "parent": "r", "capacity": 2}]})");
  std::vector<std::int64_t> sizes{2, 2};
  OracleMultiResult r = oracle_multi(m, sizes);
  // Multisets of two 2-subsets of four leaves, all capacity-feasible.
  EXPECT_EQ(r.evaluated, 21u);
  EXPECT_THROW(oracle_multi(m, sizes, 20), Error);
}

TEST(CheckBalancedTest, DatacenterScenarios) {
  FailureModel m = fixture_model("datacenter_model.json");
  auto bad = check_balanced(m, fixture_placement(m, "datacenter_scenario1.json"));
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(m.node(bad[0].node).id, "row2");
  EXPECT_EQ(m.node(bad[0].unfilled_child).id, "rack3");
  EXPECT_EQ(m.node(bad[0].other_child).id, "rack4");
  EXPECT_EQ(bad[0].unfilled_count, 0);
  EXPECT_EQ(bad[0].other_count, 3);
  EXPECT_TRUE(check_balanced(m, fixture_placement(m, "datacenter_scenario2.json")).empty());
  EXPECT_TRUE(check_balanced(m, Placement{}).empty());
}

TEST(PathAggregateTest, CountsPathNodesByFailureNumber) {
  FailureModel m = fixture_model("datacenter_model.json");
  Placement p = fixture_placement(m, "datacenter_scenario2.json");
  // row2 has 2 replicas below it, rack4 and srv7 one each.
  EXPECT_EQ(path_aggregate(m, m.at("row2"), m.at("srv7"), p, 3), (LexVector{0, 1, 2, 0}));
  EXPECT_EQ(path_aggregate(m, m.at("srv7"), m.at("srv7"), p, 3), (LexVector{0, 0, 1, 0}));
  EXPECT_THROW(path_aggregate(m, m.at("row1"), m.at("srv7"), p, 3), Error);
  std::vector<NodeIndex> all(m.size());
  std::iota(all.begin(), all.end(), NodeIndex{0});
  EXPECT_EQ(subset_aggregate(m, all, p, 3), failure_aggregate(m, p, 3));
}

TEST(ShiftTest, MovesEntriesLeft) {
  EXPECT_EQ(shift(LexVector{0, 2, 5}), (LexVector{2, 5, 0}));
  EXPECT_EQ(shift(LexVector{7}), (LexVector{0}));
}

// Adding u changes exactly the nodes on its root path, whose vector shifts.
TEST(UpdateIdentityTest, RandomPartialPlacements) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    FailureModel m = ref::random_model(1000 + static_cast<std::uint64_t>(trial), 16, 4, 1, 3);
    std::vector<NodeIndex> leaves(m.leaves().begin(), m.leaves().end());
    std::shuffle(leaves.begin(), leaves.end(), rng);
    const std::size_t k = rng() % leaves.size();
    const NodeIndex u = leaves[k];
    const NodeIndex v = leaves[(k + 1 + rng() % (leaves.size() - 1)) % leaves.size()];
    leaves.resize(k);
    leaves.erase(std::remove(leaves.begin(), leaves.end(), v), leaves.end());
    Placement p = make_placement(m, leaves);
    const auto rho = static_cast<std::int64_t>(p.leaves.size()) + 1 + static_cast<std::int64_t>(rng() % 2);

    auto with = [&](NodeIndex x) {
      std::vector<NodeIndex> q = p.leaves;
      q.push_back(x);
      return make_placement(m, q);
    };
    Placement pu = with(u);
    const NodeIndex ru = root_of(m, u);
    LexVector before = path_aggregate(m, ru, u, p, rho);
    LexVector after = path_aggregate(m, ru, u, pu, rho);
    EXPECT_EQ(after, shift(before));
    EXPECT_EQ(failure_aggregate(m, pu, rho), failure_aggregate(m, p, rho) - before + after);

    if (u == v) continue;
    LexVector sv = path_aggregate(m, root_of(m, v), v, p, rho);
    const bool paths = before <= sv;
    const bool totals = failure_aggregate(m, pu, rho) <= failure_aggregate(m, with(v), rho);
    EXPECT_EQ(paths, totals);
  }
}

}  // namespace
}  // namespace fdplace
