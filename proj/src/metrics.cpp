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

#include "fdplace/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "fdplace/error.hpp"

namespace fdplace {
namespace {

void require_same_length(const LexVector& a, const LexVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vector length mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

}  // namespace

std::int64_t LexVector::sum() const {
  return std::accumulate(v_.begin(), v_.end(), std::int64_t{0});
}

bool LexVector::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](std::int64_t x) { return x == 0; });
}

LexVector& LexVector::operator+=(const LexVector& other) {
  require_same_length(*this, other);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += other.v_[i];
  return *this;
}

LexVector& LexVector::operator-=(const LexVector& other) {
  require_same_length(*this, other);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= other.v_[i];
  return *this;
}

std::strong_ordering operator<=>(const LexVector& a, const LexVector& b) {
  require_same_length(a, b);
  for (std::size_t i = 0; i < a.v_.size(); ++i) {
    if (a.v_[i] != b.v_[i]) return a.v_[i] <=> b.v_[i];
  }
  return std::strong_ordering::equal;
}

std::string LexVector::str() const {
  std::string out = "<";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v_[i]);
  }
  out += '>';
  return out;
}

Placement make_placement(const FailureModel& model, std::vector<NodeIndex> leaves) {
  std::sort(leaves.begin(), leaves.end());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i] >= model.size() || !model.node(leaves[i]).is_leaf()) {
      throw Error(ErrorCode::kInvalidArgument, "placement entry is not a leaf");
    }
    if (i > 0 && leaves[i] == leaves[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "leaf '" + model.node(leaves[i]).id + "' placed twice");
    }
  }
  return Placement{std::move(leaves)};
}

Placement placement_from_ids(const FailureModel& model,
                             const std::vector<std::string>& ids) {
  std::vector<NodeIndex> leaves;
  leaves.reserve(ids.size());
  for (const auto& id : ids) leaves.push_back(model.at(id));
  return make_placement(model, std::move(leaves));
}

std::vector<std::string> placement_ids(const FailureModel& model,
                                       const Placement& placement) {
  std::vector<std::string> ids;
  ids.reserve(placement.leaves.size());
  for (NodeIndex leaf : placement.leaves) ids.push_back(model.node(leaf).id);
  return ids;
}

void validate_capacities(const FailureModel& model, const MultiPlacement& mp) {
  std::vector<std::int64_t> used(model.size(), 0);
  for (const Placement& block : mp.blocks) {
    for (NodeIndex leaf : block.leaves) {
      if (++used[leaf] > *model.node(leaf).capacity) {
        throw Error(ErrorCode::kInfeasible,
                    "leaf '" + model.node(leaf).id + "' exceeds its capacity");
      }
    }
  }
}

std::int64_t failure_number(const FailureModel& model, NodeIndex node,
                            const Placement& placement) {
  std::int64_t count = 0;
  for (NodeIndex leaf : placement.leaves) {
    if (model.is_ancestor_or_self(node, leaf)) ++count;
  }
  return count;
}

std::vector<std::int64_t> failure_numbers(const FailureModel& model,
                                          const Placement& placement) {
  std::vector<std::int64_t> f(model.size(), 0);
  for (NodeIndex leaf : placement.leaves) f[leaf] = 1;
  auto order = model.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& node = model.node(*it);
    if (node.parent) f[*node.parent] += f[*it];
  }
  return f;
}

FailureAggregate failure_aggregate(const FailureModel& model,
                                   const Placement& placement, std::int64_t rho) {
  const auto size = static_cast<std::int64_t>(placement.leaves.size());
  if (rho < size) {
    throw Error(ErrorCode::kInvalidArgument,
                "girth " + std::to_string(rho) + " below placement size " +
                    std::to_string(size));
  }
  FailureAggregate p(static_cast<std::size_t>(rho) + 1);
  for (std::int64_t f : failure_numbers(model, placement)) {
    ++p[static_cast<std::size_t>(rho - f)];
  }
  return p;
}

std::int64_t multi_girth(const MultiPlacement& mp) {
  std::int64_t rho = 0;
  for (const Placement& block : mp.blocks) {
    rho = std::max<std::int64_t>(rho, static_cast<std::int64_t>(block.leaves.size()));
  }
  return rho;
}

FailureAggregate multi_aggregate(const FailureModel& model,
                                 const MultiPlacement& mp) {
  validate_capacities(model, mp);
  const std::int64_t rho = multi_girth(mp);
  FailureAggregate g(static_cast<std::size_t>(rho) + 1);
  for (const Placement& block : mp.blocks) g += failure_aggregate(model, block, rho);
  return g;
}

Signature signature_of_sizes(std::span<const std::int64_t> sizes, std::int64_t rho) {
  Signature sigma(static_cast<std::size_t>(rho) + 1);
  for (std::int64_t s : sizes) {
    if (s < 0 || s > rho) {
      throw Error(ErrorCode::kInvalidArgument,
                  "block size " + std::to_string(s) + " outside [0, " +
                      std::to_string(rho) + "]");
    }
    ++sigma[static_cast<std::size_t>(rho - s)];
  }
  return sigma;
}

Signature signature_of_sizes(std::span<const std::int64_t> sizes) {
  std::int64_t rho = 0;
  for (std::int64_t s : sizes) rho = std::max(rho, s);
  return signature_of_sizes(sizes, rho);
}

Signature sub_signature(const FailureModel& model, const MultiPlacement& mp,
                        NodeIndex node, std::int64_t rho) {
  std::vector<std::int64_t> sizes;
  sizes.reserve(mp.blocks.size());
  for (const Placement& block : mp.blocks) sizes.push_back(failure_number(model, node, block));
  return signature_of_sizes(sizes, rho);
}

Signature sub_signature(const FailureModel& model, const MultiPlacement& mp,
                        NodeIndex node) {
  return sub_signature(model, mp, node, multi_girth(mp));
}

SignatureStats sig_stats(const Signature& sigma) {
  SignatureStats stats;
  std::int64_t lo = -1;
  std::int64_t hi = -1;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] == 0) continue;
    if (lo < 0) lo = static_cast<std::int64_t>(k);
    hi = static_cast<std::int64_t>(k);
  }
  stats.max_nonzero_index = hi;
  if (lo < 0) return stats;
  stats.skew = hi - lo;
  stats.girth = static_cast<std::int64_t>(sigma.size()) - 1 - lo;
  return stats;
}

}  // namespace fdplace
