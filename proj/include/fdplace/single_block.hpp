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

#ifndef FDPLACE_SINGLE_BLOCK_HPP_
#define FDPLACE_SINGLE_BLOCK_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fdplace/failure_model.hpp"
#include "fdplace/metrics.hpp"

namespace fdplace {

struct LabelResult {
  std::vector<std::size_t> filled;    // child positions, ascending
  std::vector<std::size_t> unfilled;  // child positions, ascending
  std::int64_t remaining = 0;         // replicas left for the unfilled set
  std::int64_t base = 0;              // remaining / |unfilled|
  std::int64_t heavy = 0;             // remaining % |unfilled|
};

// Splits r replicas among children with the given leaf counts. Requires
// 0 <= r <= sum(capacities) and positive capacities. Linear time.
LabelResult label_children(std::span<const std::int64_t> capacities, std::int64_t r);

struct ChildValuePair {
  FailureAggregate light;
  FailureAggregate heavy;
};

// Positions of the beta pairs with lexicographically smallest heavy - light,
// ties broken by position. Returned ascending.
std::vector<std::size_t> select_heavy(std::span<const ChildValuePair> pairs,
                                      std::size_t beta);

enum class SingleAlgorithm { kFast, kBasic, kGreedy };

std::string_view to_string(SingleAlgorithm algorithm);
std::optional<SingleAlgorithm> parse_single_algorithm(std::string_view name);

struct SingleSolution {
  FailureAggregate aggregate;
  Placement placement;
};

struct FastOptions {
  bool contract_chains = true;
};

struct FastStats {
  std::size_t combine_nodes = 0;
  std::size_t pseudonodes = 0;
  std::size_t contracted_nodes = 0;
};

// All solvers throw kInfeasible unless 1 <= rho <= number of leaves.
SingleSolution solve_basic(const FailureModel& model, std::int64_t rho);
SingleSolution solve_fast(const FailureModel& model, std::int64_t rho,
                          const FastOptions& options = {},
                          FastStats* stats = nullptr);
// Heuristic: repeatedly adds the leaf giving the smallest aggregate.
SingleSolution solve_greedy(const FailureModel& model, std::int64_t rho);
SingleSolution solve_single(const FailureModel& model, std::int64_t rho,
                            SingleAlgorithm algorithm);

// A maximal run of nodes that each hand their replicas to exactly one
// unfilled child. `end` is that child of the last chain node.
struct Chain {
  std::vector<NodeIndex> nodes;  // top-down
  NodeIndex end = 0;
};

// Chains the fast solver contracts for this instance. A chain starting at
// the virtual root of a forest lists only its model nodes.
std::vector<Chain> contract_chains(const FailureModel& model, std::int64_t rho);

}  // namespace fdplace

#endif  // FDPLACE_SINGLE_BLOCK_HPP_
