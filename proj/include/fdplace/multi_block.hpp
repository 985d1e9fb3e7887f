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

#ifndef FDPLACE_MULTI_BLOCK_HPP_
#define FDPLACE_MULTI_BLOCK_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdplace/failure_model.hpp"
#include "fdplace/metrics.hpp"

namespace fdplace {

// Cells (i, j) of a (delta+1) x (delta+1) grid with d-1 <= i+j <= d-1+delta,
// for 1 <= d <= delta+1.
std::int64_t band_cell_count(std::int64_t delta, std::int64_t d);

// C(n + parts - 1, parts - 1), saturating at UINT64_MAX.
std::uint64_t weak_composition_count(std::int64_t n, std::size_t parts);

namespace detail {

template <class Visit>
void gray_compositions(std::vector<std::int64_t>& c, std::size_t pos, std::int64_t n,
                       bool reversed, Visit& visit) {
  if (pos + 1 == c.size()) {
    c[pos] = n;
    visit(static_cast<const std::vector<std::int64_t>&>(c));
    return;
  }
  for (std::int64_t step = 0; step <= n; ++step) {
    const std::int64_t rest = reversed ? n - step : step;
    c[pos] = n - rest;
    gray_compositions(c, pos + 1, rest, ((rest % 2) == 1) != reversed, visit);
  }
}

}  // namespace detail

// Visits every weak composition of n into `parts` parts exactly once.
// Consecutive compositions differ in at most three positions.
template <class Visit>
void for_each_weak_composition(std::int64_t n, std::size_t parts, Visit&& visit) {
  std::vector<std::int64_t> c(parts, 0);
  if (parts == 0) {
    if (n == 0) visit(static_cast<const std::vector<std::int64_t>&>(c));
    return;
  }
  detail::gray_compositions(c, 0, n, false, visit);
}

// Signatures of length rho+1 with entry sum m and skew at most delta, in
// enumeration order (window start ascending, compositions in gray order).
std::vector<Signature> signature_domain(std::int64_t m, std::int64_t rho,
                                        std::int64_t delta);

struct SupportCell {
  std::int64_t row = 0;  // block size rho-row on the left side
  std::int64_t col = 0;  // block size rho-col on the right side
  std::int64_t count = 0;
};

// (sigma, left, right) index into PhiTable::domain().
struct PhiEntry {
  std::size_t sigma = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<SupportCell> support;  // one pairing realizing the merge
};

class PhiTable {
 public:
  PhiTable(std::int64_t m, std::int64_t rho, std::int64_t delta,
           std::vector<Signature> domain, std::vector<PhiEntry> entries);

  std::int64_t m() const { return m_; }
  std::int64_t rho() const { return rho_; }
  std::int64_t delta() const { return delta_; }
  const std::vector<Signature>& domain() const { return domain_; }
  const std::vector<PhiEntry>& entries() const { return entries_; }
  std::span<const PhiEntry> entries_for(std::size_t sigma) const;
  std::optional<std::size_t> index_of(const Signature& sigma) const;
  bool contains(const Signature& sigma, const Signature& left,
                const Signature& right) const;

  std::string dump() const;
  static PhiTable parse(std::string_view text);

 private:
  std::int64_t m_;
  std::int64_t rho_;
  std::int64_t delta_;
  std::vector<Signature> domain_;
  std::vector<PhiEntry> entries_;  // grouped by sigma
  std::vector<std::size_t> offsets_;
  std::map<std::vector<std::int64_t>, std::size_t> index_;
};

PhiTable build_phi(std::int64_t m, std::int64_t rho, std::int64_t delta);

struct TargetSignature {
  Signature sigma;
  std::int64_t rho = 0;
  std::int64_t delta = 0;
};

// Throws kInfeasible for empty or non-positive sizes, or a size sum above
// total_capacity.
TargetSignature target_signature(std::span<const std::int64_t> sizes,
                                 std::int64_t total_capacity);

struct MultiOptions {
  std::optional<std::int64_t> skew;  // must not be below the natural skew
  const PhiTable* phi = nullptr;     // reused when (m, rho, delta) match
};

struct MultiSolution {
  FailureAggregate aggregate;
  MultiPlacement placement;  // blocks in the requested order
  Signature signature;
  std::int64_t delta = 0;
};

MultiSolution solve_multi(const FailureModel& model,
                          std::span<const std::int64_t> sizes,
                          const MultiOptions& options = {});

}  // namespace fdplace

#endif  // FDPLACE_MULTI_BLOCK_HPP_
