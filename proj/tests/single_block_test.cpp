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

#include "fdplace/single_block.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fdplace/error.hpp"
#include "fdplace/generate.hpp"
#include "fdplace/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/reference.hpp"

namespace fdplace {
namespace {

using testing::fixture_json;
using testing::fixture_model;

// Sorted-prefix splits satisfying max(F) <= R/|U| < min(U); there should be one.
std::vector<std::vector<std::int64_t>> sandwich_splits(std::vector<std::int64_t> caps,
                                                       std::int64_t r) {
  std::sort(caps.begin(), caps.end());
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t k = 0; k < caps.size(); ++k) {
    std::int64_t filled = std::accumulate(caps.begin(), caps.begin() + static_cast<std::ptrdiff_t>(k), std::int64_t{0});
    std::int64_t rest = r - filled;
    auto u = static_cast<std::int64_t>(caps.size() - k);
    if (rest < 0) continue;
    bool low = k == 0 || caps[k - 1] * u <= rest;
    bool high = rest < caps[k] * u;
    if (low && high) out.emplace_back(caps.begin(), caps.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

TEST(LabelChildrenTest, WorkedExample) {
  auto doc = fixture_json("labeling_example.json");
  auto caps = doc["capacities"].get<std::vector<std::int64_t>>();
  LabelResult r = label_children(caps, doc["replicas"].get<std::int64_t>());
  EXPECT_EQ(r.filled, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(r.unfilled, (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(r.remaining, 13);
  EXPECT_EQ(r.base, 4);
  EXPECT_EQ(r.heavy, 1);
}

TEST(LabelChildrenTest, AllFilledWhenReplicasMatchCapacity) {
  std::vector<std::int64_t> caps{3, 1, 2};
  LabelResult r = label_children(caps, 6);
  EXPECT_EQ(r.filled, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(r.unfilled.empty());
}

TEST(LabelChildrenTest, ZeroReplicasLeavesEverythingOpen) {
  std::vector<std::int64_t> caps{3, 1, 2};
  LabelResult r = label_children(caps, 0);
  EXPECT_TRUE(r.filled.empty());
  EXPECT_EQ(r.unfilled.size(), 3u);
  EXPECT_EQ(r.base, 0);
  EXPECT_EQ(r.heavy, 0);
}

TEST(LabelChildrenTest, RejectsBadInput) {
  std::vector<std::int64_t> caps{2, 2};
  EXPECT_THROW(label_children(caps, 5), Error);
  EXPECT_THROW(label_children(caps, -1), Error);
  std::vector<std::int64_t> zero{0, 2};
  EXPECT_THROW(label_children(zero, 1), Error);
}

TEST(LabelChildrenTest, MatchesUniqueSandwichSplit) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<std::int64_t> caps(1 + rng() % 9);
    for (auto& c : caps) c = 1 + static_cast<std::int64_t>(rng() % 12);
    const std::int64_t total = std::accumulate(caps.begin(), caps.end(), std::int64_t{0});
    const auto r = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(total + 1));
    LabelResult lab = label_children(caps, r);
    ASSERT_EQ(lab.filled.size() + lab.unfilled.size(), caps.size());
    if (r == total) {
      EXPECT_TRUE(lab.unfilled.empty());
      continue;
    }
    ASSERT_FALSE(lab.unfilled.empty());
    std::vector<std::int64_t> filled_caps;
    std::int64_t filled_sum = 0;
    for (auto i : lab.filled) {
      filled_caps.push_back(caps[i]);
      filled_sum += caps[i];
    }
    std::sort(filled_caps.begin(), filled_caps.end());
    auto splits = sandwich_splits(caps, r);
    ASSERT_EQ(splits.size(), 1u);
    EXPECT_EQ(splits.front(), filled_caps);
    EXPECT_EQ(lab.remaining, r - filled_sum);
    const auto u = static_cast<std::int64_t>(lab.unfilled.size());
    EXPECT_EQ(lab.base, lab.remaining / u);
    EXPECT_EQ(lab.heavy, lab.remaining % u);
    for (auto i : lab.unfilled) EXPECT_LE(lab.base + 1, caps[i]);
  }
}

TEST(SelectHeavyTest, PicksSmallestDifferences) {
  std::vector<ChildValuePair> pairs{
      {{0, 1, 3}, {1, 0, 3}},  // diff <1,-1,0>
      {{0, 2, 2}, {0, 3, 1}},  // diff <0,1,-1>
      {{0, 0, 4}, {0, 1, 3}},  // diff <0,1,-1>
      {{0, 1, 3}, {0, 1, 3}},  // diff <0,0,0>
  };
  EXPECT_TRUE(select_heavy(pairs, 0).empty());
  EXPECT_EQ(select_heavy(pairs, 1), (std::vector<std::size_t>{3}));
  EXPECT_EQ(select_heavy(pairs, 2), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(select_heavy(pairs, 3), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(select_heavy(pairs, 5), Error);
}

TEST(SingleBlockTest, TwoRowDatacenterOptimum) {
  FailureModel m = fixture_model("datacenter_model.json");
  auto expected = ref::best_single(m, 3);
  for (auto algo : {SingleAlgorithm::kBasic, SingleAlgorithm::kFast, SingleAlgorithm::kGreedy}) {
    SingleSolution s = solve_single(m, 3, algo);
    EXPECT_EQ(s.aggregate.entries(), expected.best) << to_string(algo);
    EXPECT_EQ(s.aggregate, (FailureAggregate{0, 1, 7, 7}));
    EXPECT_TRUE(expected.optimal.count(s.placement.leaves));
  }
}

TEST(SingleBlockTest, RejectsInfeasibleReplicationFactor) {
  FailureModel m = fixture_model("datacenter_model.json");
  for (std::int64_t rho : {0, 10}) {
    try {
      solve_fast(m, rho);
      FAIL() << "no error for rho " << rho;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    }
    EXPECT_THROW(solve_basic(m, rho), Error);
    EXPECT_THROW(solve_greedy(m, rho), Error);
  }
}

TEST(SingleBlockTest, SolversMatchBruteForceOnSmallTrees) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    FailureModel m = ref::random_model(seed, 10, 4);
    const auto leaves = static_cast<std::int64_t>(m.leaves().size());
    for (std::int64_t rho = 1; rho <= leaves; ++rho) {
      auto expected = ref::best_single(m, rho);
      SingleSolution basic = solve_basic(m, rho);
      SingleSolution fast = solve_fast(m, rho);
      SingleSolution greedy = solve_greedy(m, rho);
      EXPECT_EQ(basic.aggregate.entries(), expected.best) << "seed " << seed << " rho " << rho;
      EXPECT_EQ(fast.aggregate.entries(), expected.best) << "seed " << seed << " rho " << rho;
      EXPECT_EQ(greedy.aggregate.entries(), expected.best) << "seed " << seed << " rho " << rho;
      for (const auto* s : {&basic, &fast, &greedy}) {
        EXPECT_TRUE(expected.optimal.count(s->placement.leaves));
        EXPECT_EQ(failure_aggregate(m, s->placement, rho), s->aggregate);
        EXPECT_TRUE(check_balanced(m, s->placement).empty());
      }
    }
  }
}

TEST(SingleBlockTest, WitnessSplitsIntoAtMostTwoValues) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    FailureModel m = ref::random_model(seed, 60, 5);
    const auto leaves = static_cast<std::int64_t>(m.leaves().size());
    SubtreeStats stats = subtree_stats(m);
    for (std::int64_t rho : {std::int64_t{1}, leaves / 3 + 1, leaves / 2 + 1, leaves}) {
      SingleSolution s = solve_fast(m, rho);
      auto f = failure_numbers(m, s.placement);
      for (NodeIndex u = 0; u < m.size(); ++u) {
        const auto& kids = m.node(u).children;
        if (kids.empty()) continue;
        std::vector<std::int64_t> caps;
        for (NodeIndex c : kids) caps.push_back(stats.leaf_count[c]);
        LabelResult lab = label_children(caps, f[u]);
        for (auto i : lab.filled) EXPECT_EQ(f[kids[i]], caps[i]);
        for (auto i : lab.unfilled) {
          EXPECT_GE(f[kids[i]], lab.base);
          EXPECT_LE(f[kids[i]], lab.base + 1);
        }
      }
    }
  }
}

TEST(SingleBlockTest, FastMatchesBasicOnLargerTrees) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GeneratorOptions o;
    o.seed = seed;
    o.leaves = 200 + seed * 37;
    o.max_fanout = 2 + seed % 6;
    o.roots = seed % 3 == 0 ? 3 : 1;
    FailureModel m = generate_model(o);
    for (std::int64_t rho : {1, 2, 7, 33, 64}) {
      SingleSolution basic = solve_basic(m, rho);
      SingleSolution fast = solve_fast(m, rho);
      SingleSolution flat = solve_fast(m, rho, FastOptions{false});
      EXPECT_EQ(fast.aggregate, basic.aggregate) << "seed " << seed << " rho " << rho;
      EXPECT_EQ(flat.aggregate, basic.aggregate);
      EXPECT_EQ(failure_aggregate(m, fast.placement, rho), fast.aggregate);
      EXPECT_EQ(failure_aggregate(m, basic.placement, rho), basic.aggregate);
      EXPECT_EQ(fast.placement.leaves.size(), static_cast<std::size_t>(rho));
    }
  }
}

TEST(SingleBlockTest, ChainContraction) {
  // root -> {l0, v1}; v1 -> {l1, v2}; v2 -> {A, B}; A, B hold three leaves each.
  FailureModel m = parse_model(R"({"nodes": [
    {"id": "root", "parent": null},
    {"id": "l0", "parent": "root", "capacity": 1},
    {"id": "v1", "parent": "root"},
    {"id": "l1", "parent": "v1", "capacity": 1},
    {"id": "v2", "parent": "v1"},
    {"id": "A", "parent": "v2"}, {"id": "B", "parent": "v2"},
    {"id": "a1", "parent": "A", "capacity": 1}, {"id": "a2", "parent": "A", "capacity": 1},
    {"id": "a3", "parent": "A", "capacity": 1}, {"id": "b1", "parent": "B", "capacity": 1},
    {"id": "b2", "parent": "B", "capacity": 1}, {"id": "b3", "parent": "B", "capacity": 1}]})");
  auto chains = contract_chains(m, 5);
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].nodes, (std::vector<NodeIndex>{m.at("root"), m.at("v1")}));
  EXPECT_EQ(chains[0].end, m.at("v2"));

  FastStats on;
  FastStats off;
  SingleSolution a = solve_fast(m, 5, FastOptions{true}, &on);
  SingleSolution b = solve_fast(m, 5, FastOptions{false}, &off);
  EXPECT_EQ(on.pseudonodes, 1u);
  EXPECT_EQ(on.contracted_nodes, 2u);
  EXPECT_EQ(off.pseudonodes, 0u);
  EXPECT_LT(on.combine_nodes, off.combine_nodes);
  EXPECT_EQ(a.aggregate, b.aggregate);
  EXPECT_EQ(a.aggregate.entries(), ref::best_single(m, 5).best);
}

TEST(SingleBlockTest, LongPathIsHandledIteratively) {
  std::string json = R"({"nodes": [{"id": "n0", "parent": null})";
  const int depth = 20000;
  for (int i = 1; i < depth; ++i) {
    json += R"(, {"id": "n)" + std::to_string(i) + R"(", "parent": "n)" + std::to_string(i - 1) + "\"}";
  }
  json += R"(, {"id": "s1", "parent": "n)" + std::to_string(depth - 1) + R"(", "capacity": 1})";
  json += R"(, {"id": "s2", "parent": "n)" + std::to_string(depth - 1) + R"(", "capacity": 1})";
  json += "]}";
  FailureModel m = parse_model(json);
  SingleSolution fast = solve_fast(m, 1);
  SingleSolution basic = solve_basic(m, 1);
  EXPECT_EQ(fast.aggregate, basic.aggregate);
  EXPECT_EQ(fast.aggregate[0], depth + 1);
}

TEST(SingleBlockTest, GreedyBreaksTiesBySmallestId) {
  FailureModel m = parse_model(R"({"nodes": [
    {"id": "r", "parent": null},
    {"id": "zeta", "parent": "r", "capacity": 1},
    {"id": "alpha", "parent": "r", "capacity": 1}]})");
  SingleSolution s = solve_greedy(m, 1);
  EXPECT_EQ(placement_ids(m, s.placement), (std::vector<std::string>{"alpha"}));
}

TEST(SingleBlockTest, SingleLeafModel) {
  FailureModel m = parse_model(R"({"nodes": [{"id": "only", "capacity": 4}]})");
  for (auto algo : {SingleAlgorithm::kBasic, SingleAlgorithm::kFast, SingleAlgorithm::kGreedy}) {
    SingleSolution s = solve_single(m, 1, algo);
    EXPECT_EQ(s.aggregate, (FailureAggregate{1, 0}));
  }
}

TEST(SingleBlockTest, AlgorithmNames) {
  EXPECT_EQ(parse_single_algorithm("basic"), SingleAlgorithm::kBasic);
  EXPECT_EQ(parse_single_algorithm("greedy"), SingleAlgorithm::kGreedy);
  EXPECT_EQ(parse_single_algorithm("fast"), SingleAlgorithm::kFast);
  EXPECT_FALSE(parse_single_algorithm("other"));
  EXPECT_EQ(to_string(SingleAlgorithm::kBasic), "basic");
}

}  // namespace
}  // namespace fdplace
