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

#ifndef FDPLACE_METRICS_HPP_
#define FDPLACE_METRICS_HPP_

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fdplace/failure_model.hpp"

namespace fdplace {

// Fixed-length integer vector ordered lexicographically from index 0.
// Comparing or adding vectors of different lengths throws kInvalidArgument.
class LexVector {
 public:
  LexVector() = default;
  explicit LexVector(std::size_t length) : v_(length, 0) {}
  LexVector(std::initializer_list<std::int64_t> values) : v_(values) {}
  explicit LexVector(std::vector<std::int64_t> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  std::int64_t& operator[](std::size_t i) { return v_[i]; }
  std::int64_t operator[](std::size_t i) const { return v_[i]; }
  const std::vector<std::int64_t>& entries() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  std::int64_t sum() const;
  bool is_zero() const;

  LexVector& operator+=(const LexVector& other);
  LexVector& operator-=(const LexVector& other);
  friend LexVector operator+(LexVector a, const LexVector& b) { return a += b; }
  friend LexVector operator-(LexVector a, const LexVector& b) { return a -= b; }

  friend bool operator==(const LexVector&, const LexVector&) = default;
  friend std::strong_ordering operator<=>(const LexVector& a,
                                          const LexVector& b);

  // "<a,b,c>"
  std::string str() const;

 private:
  std::vector<std::int64_t> v_;
};

// Entry i counts nodes whose failure number is rho - i.
using FailureAggregate = LexVector;
// Entry k counts blocks of size rho - k.
using Signature = LexVector;

struct Placement {
  std::vector<NodeIndex> leaves;  // sorted, distinct
};

struct MultiPlacement {
  std::vector<Placement> blocks;
};

// Sorts and validates: every entry must be a distinct leaf.
Placement make_placement(const FailureModel& model, std::vector<NodeIndex> leaves);
Placement placement_from_ids(const FailureModel& model,
                             const std::vector<std::string>& ids);
std::vector<std::string> placement_ids(const FailureModel& model,
                                       const Placement& placement);

// Throws kInfeasible if any leaf is used by more blocks than its capacity.
void validate_capacities(const FailureModel& model, const MultiPlacement& mp);

std::int64_t failure_number(const FailureModel& model, NodeIndex node,
                            const Placement& placement);
// Failure number of every node, indexed by NodeIndex.
std::vector<std::int64_t> failure_numbers(const FailureModel& model,
                                          const Placement& placement);

// Requires rho >= |placement|.
FailureAggregate failure_aggregate(const FailureModel& model,
                                   const Placement& placement, std::int64_t rho);
// Girth is the largest block size.
FailureAggregate multi_aggregate(const FailureModel& model,
                                 const MultiPlacement& mp);
std::int64_t multi_girth(const MultiPlacement& mp);

Signature signature_of_sizes(std::span<const std::int64_t> sizes, std::int64_t rho);
Signature signature_of_sizes(std::span<const std::int64_t> sizes);
// Signature of the blocks restricted to the subtree at node.
Signature sub_signature(const FailureModel& model, const MultiPlacement& mp,
                        NodeIndex node, std::int64_t rho);
Signature sub_signature(const FailureModel& model, const MultiPlacement& mp,
                        NodeIndex node);

struct SignatureStats {
  std::int64_t skew = 0;
  std::int64_t girth = 0;              // largest block size
  std::int64_t max_nonzero_index = 0;  // -1 for the zero vector
};

SignatureStats sig_stats(const Signature& sigma);

}  // namespace fdplace

#endif  // FDPLACE_METRICS_HPP_
