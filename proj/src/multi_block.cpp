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

#include "fdplace/multi_block.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "fdplace/error.hpp"
#include "json.hpp"
#include "solver_tree.hpp"

namespace fdplace {
namespace {

__extension__ typedef unsigned __int128 Wide;

std::int64_t triangle(std::int64_t k) { return k * (k + 1) / 2; }

[[noreturn]] void bad_phi(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "malformed phi table: " + what);
}

void require_phi_params(std::int64_t m, std::int64_t rho, std::int64_t delta) {
  if (m < 1 || rho < 1 || delta < 1 || delta > rho) {
    throw Error(ErrorCode::kInvalidArgument,
                "phi parameters need m >= 1, rho >= 1 and 1 <= delta <= rho");
  }
}

}  // namespace

std::int64_t band_cell_count(std::int64_t delta, std::int64_t d) {
  if (delta < 0 || d < 1 || d > delta + 1) {
    throw Error(ErrorCode::kInvalidArgument, "band index outside [1, delta+1]");
  }
  return (delta + 1) * (delta + 1) - triangle(d - 1) - triangle(delta + 1 - d);
}

std::uint64_t weak_composition_count(std::int64_t n, std::size_t parts) {
  if (parts == 0) return n == 0 ? 1 : 0;
  const auto k = static_cast<std::uint64_t>(parts - 1);
  const auto top = static_cast<std::uint64_t>(n) + k;
  Wide acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (top - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<Signature> signature_domain(std::int64_t m, std::int64_t rho,
                                        std::int64_t delta) {
  require_phi_params(m, rho, delta);
  std::vector<Signature> out;
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  const auto len = static_cast<std::size_t>(rho) + 1;
  for (std::int64_t w = 0; w + delta <= rho; ++w) {
    for_each_weak_composition(m, static_cast<std::size_t>(delta) + 1, [&](const auto& c) {
      std::vector<std::int64_t> v(len, 0);
      for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<std::size_t>(w) + i] = c[i];
      if (seen.emplace(v, out.size()).second) out.emplace_back(std::move(v));
    });
  }
  return out;
}

PhiTable::PhiTable(std::int64_t m, std::int64_t rho, std::int64_t delta,
                   std::vector<Signature> domain, std::vector<PhiEntry> entries)
    : m_(m), rho_(rho), delta_(delta), domain_(std::move(domain)) {
  for (std::size_t i = 0; i < domain_.size(); ++i) index_.emplace(domain_[i].entries(), i);
  for (const PhiEntry& e : entries) {
    if (e.sigma >= domain_.size() || e.left >= domain_.size() || e.right >= domain_.size()) {
      bad_phi("entry refers outside the signature domain");
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const PhiEntry& a, const PhiEntry& b) { return a.sigma < b.sigma; });
  entries_ = std::move(entries);
  offsets_.assign(domain_.size() + 1, 0);
  for (const PhiEntry& e : entries_) ++offsets_[e.sigma + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

std::span<const PhiEntry> PhiTable::entries_for(std::size_t sigma) const {
  return std::span<const PhiEntry>(entries_).subspan(offsets_[sigma],
                                                     offsets_[sigma + 1] - offsets_[sigma]);
}

std::optional<std::size_t> PhiTable::index_of(const Signature& sigma) const {
  auto it = index_.find(sigma.entries());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool PhiTable::contains(const Signature& sigma, const Signature& left,
                        const Signature& right) const {
  auto s = index_of(sigma);
  auto l = index_of(left);
  auto r = index_of(right);
  if (!s || !l || !r) return false;
  for (const PhiEntry& e : entries_for(*s)) {
    if (e.left == *l && e.right == *r) return true;
  }
  return false;
}

std::string PhiTable::dump() const {
  nlohmann::ordered_json doc;
  doc["m"] = m_;
  doc["rho"] = rho_;
  doc["delta"] = delta_;
  nlohmann::ordered_json domain = nlohmann::ordered_json::array();
  for (const Signature& s : domain_) domain.push_back(s.entries());
  doc["domain"] = std::move(domain);
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const PhiEntry& e : entries_) {
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const SupportCell& c : e.support) cells.push_back({c.row, c.col, c.count});
    entries.push_back({e.sigma, e.left, e.right, std::move(cells)});
  }
  doc["entries"] = std::move(entries);
  return doc.dump();
}

PhiTable PhiTable::parse(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    std::vector<Signature> domain;
    for (const auto& s : doc.at("domain")) domain.emplace_back(s.get<std::vector<std::int64_t>>());
    std::vector<PhiEntry> entries;
    for (const auto& row : doc.at("entries")) {
      PhiEntry e;
      e.sigma = row.at(0).get<std::size_t>();
      e.left = row.at(1).get<std::size_t>();
      e.right = row.at(2).get<std::size_t>();
      for (const auto& c : row.at(3)) {
        e.support.push_back({c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>(),
                             c.at(2).get<std::int64_t>()});
      }
      entries.push_back(std::move(e));
    }
    const auto m = doc.at("m").get<std::int64_t>();
    const auto rho = doc.at("rho").get<std::int64_t>();
    const auto delta = doc.at("delta").get<std::int64_t>();
    require_phi_params(m, rho, delta);
    if (domain != signature_domain(m, rho, delta)) bad_phi("signature domain mismatch");
    return PhiTable(m, rho, delta, std::move(domain), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    bad_phi(e.what());
  }
}

PhiTable build_phi(std::int64_t m, std::int64_t rho, std::int64_t delta) {
  require_phi_params(m, rho, delta);
  std::vector<Signature> domain = signature_domain(m, rho, delta);
  std::map<std::vector<std::int64_t>, std::size_t> index;
  for (std::size_t i = 0; i < domain.size(); ++i) index.emplace(domain[i].entries(), i);
  const std::size_t count = domain.size();
  const auto len = static_cast<std::size_t>(rho) + 1;
  const auto lookup = [&](const std::vector<std::int64_t>& v) {
    auto it = index.find(v);
    if (it == index.end()) throw Error(ErrorCode::kInternal, "merge left the signature domain");
    return it->second;
  };

  std::vector<PhiEntry> entries;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::vector<std::int64_t> left(len), right(len), sigma(len);
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  const std::int64_t span = rho - delta;
  for (std::int64_t a = 0; a <= span; ++a) {
    for (std::int64_t b = 0; b <= span; ++b) {
      if (a + b < span) continue;
      for (std::int64_t d = std::max<std::int64_t>(1, rho + 1 - a - b); d <= delta + 1; ++d) {
        cells.clear();
        for (std::int64_t i = 0; i <= delta; ++i) {
          for (std::int64_t j = 0; j <= delta; ++j) {
            if (i + j >= d - 1 && i + j <= d - 1 + delta) cells.emplace_back(i, j);
          }
        }
        if (static_cast<std::int64_t>(cells.size()) != band_cell_count(delta, d)) {
          throw Error(ErrorCode::kInternal, "band cell count mismatch");
        }
        for_each_weak_composition(m, cells.size(), [&](const auto& y) {
          std::fill(left.begin(), left.end(), 0);
          std::fill(right.begin(), right.end(), 0);
          std::fill(sigma.begin(), sigma.end(), 0);
          for (std::size_t c = 0; c < cells.size(); ++c) {
            if (y[c] == 0) continue;
            const std::int64_t row = a + cells[c].first;
            const std::int64_t col = b + cells[c].second;
            left[static_cast<std::size_t>(row)] += y[c];
            right[static_cast<std::size_t>(col)] += y[c];
            sigma[static_cast<std::size_t>(row + col - rho)] += y[c];
          }
          const std::size_t s = lookup(sigma);
          const std::size_t l = lookup(left);
          const std::size_t r = lookup(right);
          const std::uint64_t key = (static_cast<std::uint64_t>(s) * count + l) * count + r;
          if (!seen.emplace(key, entries.size()).second) return;
          PhiEntry e{s, l, r, {}};
          for (std::size_t c = 0; c < cells.size(); ++c) {
            if (y[c] == 0) continue;
            e.support.push_back({a + cells[c].first, b + cells[c].second, y[c]});
          }
          entries.push_back(std::move(e));
        });
      }
    }
  }
  return PhiTable(m, rho, delta, std::move(domain), std::move(entries));
}

TargetSignature target_signature(std::span<const std::int64_t> sizes,
                                 std::int64_t total_capacity) {
  if (sizes.empty()) throw Error(ErrorCode::kInfeasible, "no block sizes given");
  std::int64_t sum = 0;
  for (std::int64_t s : sizes) {
    if (s < 1) throw Error(ErrorCode::kInfeasible, "block sizes must be positive");
    sum += s;
  }
  if (sum > total_capacity) {
    throw Error(ErrorCode::kInfeasible,
                "blocks need " + std::to_string(sum) + " replicas but capacity is " +
                    std::to_string(total_capacity));
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  TargetSignature t;
  t.rho = *hi;
  t.delta = std::max<std::int64_t>(*hi - *lo, 1);
  t.delta = std::min(t.delta, t.rho);
  t.sigma = signature_of_sizes(sizes, t.rho);
  return t;
}

MultiSolution solve_multi(const FailureModel& model, std::span<const std::int64_t> sizes,
                          const MultiOptions& options) {
  TargetSignature target = target_signature(sizes, model.total_capacity());
  const std::int64_t rho = target.rho;
  const auto m = static_cast<std::int64_t>(sizes.size());
  std::int64_t delta = target.delta;
  if (options.skew) {
    if (*options.skew < target.delta) {
      throw Error(ErrorCode::kSkewBelowNatural,
                  "skew " + std::to_string(*options.skew) + " is below the natural skew " +
                      std::to_string(target.delta));
    }
    delta = std::min(*options.skew, rho);
  }
  if (rho > static_cast<std::int64_t>(model.leaves().size())) {
    throw Error(ErrorCode::kInfeasible, "a block is larger than the number of leaves");
  }

  std::optional<PhiTable> built;
  const PhiTable* phi = options.phi;
  if (!phi || phi->m() != m || phi->rho() != rho || phi->delta() != delta) {
    built.emplace(build_phi(m, rho, delta));
    phi = &*built;
  }
  const auto& domain = phi->domain();
  const std::size_t S = domain.size();
  const auto len = static_cast<std::size_t>(rho) + 1;

  std::vector<std::int64_t> replicas(S, 0);
  std::vector<std::int64_t> largest(S, 0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < len; ++k) {
      replicas[s] += (rho - static_cast<std::int64_t>(k)) * domain[s][k];
    }
    largest[s] = sig_stats(domain[s]).girth;
  }

  const detail::SolverTree tree = detail::make_solver_tree(model);
  using Table = std::vector<std::optional<FailureAggregate>>;
  std::vector<Table> table(tree.size());
  // backref[u][k-2][sigma]: entry index for prefix k >= 2, or -1.
  std::vector<std::vector<std::vector<std::int64_t>>> backref(tree.size());
  const auto& phi_entries = phi->entries();

  for (auto it = tree.preorder.rbegin(); it != tree.preorder.rend(); ++it) {
    const std::size_t u = *it;
    Table cur(S);
    if (tree.is_leaf(u)) {
      const std::int64_t cap = *model.node(u).capacity;
      for (std::size_t s = 0; s < S; ++s) {
        const Signature& sig = domain[s];
        if (sig[len - 1] + sig[len - 2] == m && sig[len - 2] <= cap) cur[s] = sig;
      }
      table[u] = std::move(cur);
      continue;
    }
    const auto& kids = tree.children[u];
    std::int64_t cap = tree.capacity_sum[kids[0]];
    std::int64_t leaves = tree.leaf_count[kids[0]];
    const Table& first = table[kids[0]];
    for (std::size_t s = 0; s < S; ++s) {
      if (!first[s] || replicas[s] > cap || largest[s] > leaves) continue;
      cur[s] = *first[s] + domain[s];
    }
    for (std::size_t k = 1; k < kids.size(); ++k) {
      const Table& child = table[kids[k]];
      cap += tree.capacity_sum[kids[k]];
      leaves += tree.leaf_count[kids[k]];
      Table next(S);
      std::vector<std::int64_t> refs(S, -1);
      for (std::size_t s = 0; s < S; ++s) {
        if (replicas[s] > cap || largest[s] > leaves) continue;
        for (const PhiEntry& e : phi->entries_for(s)) {
          if (!cur[e.left] || !child[e.right]) continue;
          FailureAggregate value = *cur[e.left] + *child[e.right] + domain[s] - domain[e.left];
          if (!next[s] || value < *next[s]) {
            next[s] = std::move(value);
            refs[s] = &e - phi_entries.data();
          }
        }
      }
      backref[u].push_back(std::move(refs));
      cur = std::move(next);
    }
    for (std::size_t c : kids) Table().swap(table[c]);
    table[u] = std::move(cur);
  }

  const std::size_t target_index = *phi->index_of(target.sigma);
  const auto& root_value = table[tree.root][target_index];
  if (!root_value) {
    throw Error(ErrorCode::kInfeasible, "no multi-placement respects the leaf capacities");
  }
  MultiSolution solution;
  solution.aggregate = *root_value;
  if (tree.virtual_root) solution.aggregate -= target.sigma;
  solution.signature = target.sigma;
  solution.delta = delta;

  using Blocks = std::vector<std::vector<NodeIndex>>;
  auto by_size = [&](Blocks blocks) {
    std::vector<Blocks> pools(len);
    for (auto& b : blocks) pools[b.size()].push_back(std::move(b));
    return pools;
  };
  auto rebuild = [&](auto&& self, std::size_t u, std::size_t s) -> Blocks {
    const Signature& sig = domain[s];
    if (tree.is_leaf(u)) {
      Blocks blocks;
      for (std::int64_t i = 0; i < sig[len - 2]; ++i) blocks.push_back({u});
      for (std::int64_t i = 0; i < sig[len - 1]; ++i) blocks.push_back({});
      return blocks;
    }
    const auto& kids = tree.children[u];
    std::vector<std::size_t> prefix(kids.size());
    std::vector<const PhiEntry*> merge(kids.size(), nullptr);
    prefix.back() = s;
    for (std::size_t k = kids.size() - 1; k >= 1; --k) {
      const PhiEntry& e = phi_entries[static_cast<std::size_t>(backref[u][k - 1][prefix[k]])];
      merge[k] = &e;
      prefix[k - 1] = e.left;
    }
    Blocks acc = self(self, kids[0], prefix[0]);
    for (std::size_t k = 1; k < kids.size(); ++k) {
      std::vector<Blocks> lhs = by_size(std::move(acc));
      std::vector<Blocks> rhs = by_size(self(self, kids[k], merge[k]->right));
      acc.clear();
      for (const SupportCell& cell : merge[k]->support) {
        auto& lp = lhs[static_cast<std::size_t>(rho - cell.row)];
        auto& rp = rhs[static_cast<std::size_t>(rho - cell.col)];
        for (std::int64_t c = 0; c < cell.count; ++c) {
          std::vector<NodeIndex> block = std::move(lp.back());
          lp.pop_back();
          block.insert(block.end(), rp.back().begin(), rp.back().end());
          rp.pop_back();
          acc.push_back(std::move(block));
        }
      }
    }
    return acc;
  };
  std::vector<Blocks> pools = by_size(rebuild(rebuild, tree.root, target_index));
  solution.placement.blocks.resize(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    auto& pool = pools[static_cast<std::size_t>(sizes[i])];
    solution.placement.blocks[i] = make_placement(model, std::move(pool.back()));
    pool.pop_back();
  }
  return solution;
}

}  // namespace fdplace
