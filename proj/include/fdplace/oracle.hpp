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

#ifndef FDPLACE_ORACLE_HPP_
#define FDPLACE_ORACLE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "fdplace/failure_model.hpp"
#include "fdplace/metrics.hpp"

namespace fdplace {

inline constexpr std::uint64_t kDefaultOracleGuard = 1'000'000;

// C(n, k) saturated at `cap`.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

struct OracleSingleResult {
  FailureAggregate aggregate;
  std::vector<Placement> optimal;  // every minimizer, sorted
  std::uint64_t evaluated = 0;
};

// Exhaustive search over all rho-subsets of leaves. Throws kGuardTripped when
// more than `guard` subsets would be evaluated.
OracleSingleResult oracle_single(const FailureModel& model, std::int64_t rho,
                                 std::uint64_t guard = kDefaultOracleGuard,
                                 unsigned threads = 1);

struct OracleMultiResult {
  FailureAggregate aggregate;
  MultiPlacement witness;  // blocks in the requested order
  std::uint64_t evaluated = 0;
};

// Exhaustive search over capacity-respecting multi-placements; blocks of
// equal size are enumerated as multisets.
OracleMultiResult oracle_multi(const FailureModel& model,
                               std::span<const std::int64_t> sizes,
                               std::uint64_t guard = kDefaultOracleGuard,
                               unsigned threads = 1);

struct BalanceViolation {
  NodeIndex node = 0;
  NodeIndex unfilled_child = 0;
  NodeIndex other_child = 0;
  std::int64_t unfilled_count = 0;
  std::int64_t other_count = 0;
};

std::vector<BalanceViolation> check_balanced(const FailureModel& model,
                                             const Placement& placement);

// Aggregate restricted to `nodes`: entry i counts those with failure number
// rho - i.
LexVector subset_aggregate(const FailureModel& model, std::span<const NodeIndex> nodes,
                           const Placement& placement, std::int64_t rho);

// Nodes on the path from `from` down to `to`, both included, counted by
// failure number: entry i counts path nodes with failure number rho - i.
LexVector path_aggregate(const FailureModel& model, NodeIndex from, NodeIndex to,
                         const Placement& placement, std::int64_t rho);

// <a0, a1, ..., an> -> <a1, ..., an, 0>
LexVector shift(const LexVector& v);

}  // namespace fdplace

#endif  // FDPLACE_ORACLE_HPP_
