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

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

#include "fdplace/error.hpp"

namespace fdplace {
namespace {

__extension__ typedef unsigned __int128 Wide;

[[noreturn]] void guard_tripped(std::uint64_t guard) {
  throw Error(ErrorCode::kGuardTripped,
              "exhaustive search exceeds the guard of " + std::to_string(guard) +
                  " candidates");
}

// Visits each k-subset of [lo, n) in lexicographic order.
template <class Visit>
void for_each_combination(std::size_t lo, std::size_t n, std::size_t k,
                          std::vector<std::size_t>& prefix, Visit&& visit) {
  const std::size_t base = prefix.size();
  if (k == 0) {
    visit(prefix);
    return;
  }
  if (n < lo + k) return;
  prefix.resize(base + k);
  for (std::size_t i = 0; i < k; ++i) prefix[base + i] = lo + i;
  while (true) {
    visit(prefix);
    std::size_t i = k;
    while (i > 0 && prefix[base + i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++prefix[base + i - 1];
    for (std::size_t j = i; j < k; ++j) prefix[base + j] = prefix[base + j - 1] + 1;
  }
  prefix.resize(base);
}

// Aggregate of a leaf subset, touching only ancestors of the chosen leaves.
class AggregateScratch {
 public:
  AggregateScratch(const FailureModel& model, std::int64_t rho)
      : model_(model), rho_(rho), f_(model.size(), 0) {}

  FailureAggregate eval(std::span<const NodeIndex> leaves) {
    touched_.clear();
    for (NodeIndex leaf : leaves) {
      for (std::optional<NodeIndex> v = leaf; v; v = model_.node(*v).parent) {
        if (f_[*v]++ == 0) touched_.push_back(*v);
      }
    }
    FailureAggregate p(static_cast<std::size_t>(rho_) + 1);
    p[static_cast<std::size_t>(rho_)] =
        static_cast<std::int64_t>(model_.size() - touched_.size());
    for (NodeIndex v : touched_) {
      ++p[static_cast<std::size_t>(rho_ - f_[v])];
      f_[v] = 0;
    }
    return p;
  }

 private:
  const FailureModel& model_;
  std::int64_t rho_;
  std::vector<std::int64_t> f_;
  std::vector<NodeIndex> touched_;
};

unsigned worker_count(unsigned threads, std::size_t tasks) {
  return static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(std::max(1u, threads), tasks)));
}

template <class Work>
void run_workers(unsigned workers, Work&& work) {
  if (workers == 1) {
    work(0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
}

}  // namespace

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > cap) return cap;
  }
  return static_cast<std::uint64_t>(acc);
}

OracleSingleResult oracle_single(const FailureModel& model, std::int64_t rho,
                                 std::uint64_t guard, unsigned threads) {
  const std::size_t n_leaves = model.leaves().size();
  if (rho < 1 || static_cast<std::size_t>(rho) > n_leaves) {
    throw Error(ErrorCode::kInfeasible,
                "replication factor " + std::to_string(rho) + " outside [1, " +
                    std::to_string(n_leaves) + "]");
  }
  const auto k = static_cast<std::size_t>(rho);
  const std::uint64_t total = binomial_capped(n_leaves, k, guard + 1);
  if (total > guard) guard_tripped(guard);

  const std::size_t firsts = n_leaves - k + 1;
  const unsigned workers = worker_count(threads, firsts);
  std::vector<OracleSingleResult> partial(workers);
  run_workers(workers, [&](unsigned w) {
    AggregateScratch scratch(model, rho);
    OracleSingleResult& mine = partial[w];
    std::vector<std::size_t> combo;
    std::vector<NodeIndex> leaves(k);
    for (std::size_t first = w; first < firsts; first += workers) {
      combo.assign(1, first);
      for_each_combination(first + 1, n_leaves, k - 1, combo, [&](const auto& c) {
        for (std::size_t i = 0; i < k; ++i) leaves[i] = model.leaves()[c[i]];
        FailureAggregate p = scratch.eval(leaves);
        ++mine.evaluated;
        if (mine.optimal.empty() || p < mine.aggregate) {
          mine.aggregate = std::move(p);
          mine.optimal.clear();
        } else if (p != mine.aggregate) {
          return;
        }
        std::vector<NodeIndex> sorted = leaves;
        std::sort(sorted.begin(), sorted.end());
        mine.optimal.push_back(Placement{std::move(sorted)});
      });
    }
  });

  OracleSingleResult result;
  for (auto& part : partial) {
    result.evaluated += part.evaluated;
    if (part.optimal.empty()) continue;
    if (result.optimal.empty() || part.aggregate < result.aggregate) {
      result.aggregate = part.aggregate;
      result.optimal = std::move(part.optimal);
    } else if (part.aggregate == result.aggregate) {
      for (auto& p : part.optimal) result.optimal.push_back(std::move(p));
    }
  }
  std::sort(result.optimal.begin(), result.optimal.end(),
            [](const Placement& a, const Placement& b) { return a.leaves < b.leaves; });
  return result;
}

OracleMultiResult oracle_multi(const FailureModel& model,
                               std::span<const std::int64_t> sizes,
                               std::uint64_t guard, unsigned threads) {
  const std::size_t n_leaves = model.leaves().size();
  if (sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "no block sizes given");
  for (std::int64_t s : sizes) {
    if (s < 1 || static_cast<std::size_t>(s) > n_leaves) {
      throw Error(ErrorCode::kInfeasible,
                  "block size " + std::to_string(s) + " outside [1, " +
                      std::to_string(n_leaves) + "]");
    }
  }
  const std::int64_t rho = *std::max_element(sizes.begin(), sizes.end());

  // Blocks sorted by decreasing size so equal sizes are adjacent.
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });

  // Candidate subsets per distinct size, with their aggregates.
  struct Subsets {
    std::vector<std::vector<NodeIndex>> leaves;
    std::vector<FailureAggregate> aggregate;
  };
  std::vector<std::int64_t> distinct;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && sizes[order[j]] == sizes[order[i]]) ++j;
    const std::uint64_t choices =
        binomial_capped(n_leaves, static_cast<std::uint64_t>(sizes[order[i]]), guard + 1);
    const std::uint64_t multisets = binomial_capped(choices + (j - i) - 1, j - i, guard + 1);
    Wide prod = static_cast<Wide>(total) * multisets;
    total = prod > guard ? guard + 1 : static_cast<std::uint64_t>(prod);
    if (total > guard) guard_tripped(guard);
    distinct.push_back(sizes[order[i]]);
    i = j;
  }
  std::vector<Subsets> subsets(distinct.size());
  std::vector<std::size_t> size_slot(order.size());
  {
    AggregateScratch scratch(model, rho);
    for (std::size_t d = 0; d < distinct.size(); ++d) {
      std::vector<std::size_t> prefix;
      std::vector<NodeIndex> leaves;
      for_each_combination(0, n_leaves, static_cast<std::size_t>(distinct[d]), prefix,
                           [&](const auto& c) {
                             leaves.clear();
                             for (std::size_t i : c) leaves.push_back(model.leaves()[i]);
                             subsets[d].aggregate.push_back(scratch.eval(leaves));
                             subsets[d].leaves.push_back(leaves);
                           });
    }
    for (std::size_t j = 0, d = 0; j < order.size(); ++j) {
      if (j > 0 && sizes[order[j]] != sizes[order[j - 1]]) ++d;
      size_slot[j] = d;
    }
  }

  struct Best {
    std::optional<FailureAggregate> aggregate;
    std::vector<std::size_t> choice;
    std::uint64_t evaluated = 0;
  };
  const std::size_t blocks = order.size();
  const std::size_t firsts = subsets[size_slot[0]].leaves.size();
  const unsigned workers = worker_count(threads, firsts);
  std::vector<Best> partial(workers);
  run_workers(workers, [&](unsigned w) {
    Best& mine = partial[w];
    std::vector<std::int64_t> used(model.size(), 0);
    std::vector<std::size_t> choice(blocks, 0);
    std::vector<FailureAggregate> running(blocks + 1,
                                          FailureAggregate(static_cast<std::size_t>(rho) + 1));
    auto fits = [&](const std::vector<NodeIndex>& leaves) {
      for (NodeIndex leaf : leaves) {
        if (used[leaf] >= *model.node(leaf).capacity) return false;
      }
      return true;
    };
    auto take = [&](const std::vector<NodeIndex>& leaves, std::int64_t delta) {
      for (NodeIndex leaf : leaves) used[leaf] += delta;
    };
    auto recurse = [&](auto&& self, std::size_t j) -> void {
      if (j == blocks) {
        ++mine.evaluated;
        if (!mine.aggregate || running[j] < *mine.aggregate) {
          mine.aggregate = running[j];
          mine.choice = choice;
        }
        return;
      }
      const Subsets& pool = subsets[size_slot[j]];
      std::size_t start = 0;
      if (j > 0 && size_slot[j] == size_slot[j - 1]) start = choice[j - 1];
      for (std::size_t s = start; s < pool.leaves.size(); ++s) {
        if (!fits(pool.leaves[s])) continue;
        choice[j] = s;
        take(pool.leaves[s], 1);
        running[j + 1] = running[j] + pool.aggregate[s];
        self(self, j + 1);
        take(pool.leaves[s], -1);
      }
    };
    const Subsets& first_pool = subsets[size_slot[0]];
    for (std::size_t s = w; s < firsts; s += workers) {
      if (!fits(first_pool.leaves[s])) continue;
      choice[0] = s;
      take(first_pool.leaves[s], 1);
      running[1] = running[0] + first_pool.aggregate[s];
      recurse(recurse, 1);
      take(first_pool.leaves[s], -1);
    }
  });

  Best best;
  std::uint64_t evaluated = 0;
  for (auto& part : partial) {
    evaluated += part.evaluated;
    if (!part.aggregate) continue;
    if (!best.aggregate || *part.aggregate < *best.aggregate ||
        (*part.aggregate == *best.aggregate && part.choice < best.choice)) {
      best = std::move(part);
    }
  }
  if (!best.aggregate) {
    throw Error(ErrorCode::kInfeasible, "no multi-placement respects the leaf capacities");
  }
  OracleMultiResult result;
  result.evaluated = evaluated;
  result.aggregate = std::move(*best.aggregate);
  result.witness.blocks.resize(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    result.witness.blocks[order[j]] =
        Placement{subsets[size_slot[j]].leaves[best.choice[j]]};
    std::sort(result.witness.blocks[order[j]].leaves.begin(),
              result.witness.blocks[order[j]].leaves.end());
  }
  return result;
}

std::vector<BalanceViolation> check_balanced(const FailureModel& model,
                                             const Placement& placement) {
  const std::vector<std::int64_t> f = failure_numbers(model, placement);
  const SubtreeStats stats = subtree_stats(model);
  std::vector<BalanceViolation> out;
  for (NodeIndex u : model.preorder()) {
    const auto& kids = model.node(u).children;
    std::optional<NodeIndex> lightest;
    for (NodeIndex c : kids) {
      if (f[c] < stats.leaf_count[c] && (!lightest || f[c] < f[*lightest])) lightest = c;
    }
    if (!lightest) continue;
    for (NodeIndex c : kids) {
      if (f[c] > f[*lightest] + 1) {
        out.push_back({u, *lightest, c, f[*lightest], f[c]});
      }
    }
  }
  return out;
}

LexVector subset_aggregate(const FailureModel& model, std::span<const NodeIndex> nodes,
                           const Placement& placement, std::int64_t rho) {
  const std::vector<std::int64_t> f = failure_numbers(model, placement);
  LexVector s(static_cast<std::size_t>(rho) + 1);
  for (NodeIndex v : nodes) {
    if (f[v] > rho) throw Error(ErrorCode::kInvalidArgument, "failure number exceeds girth");
    ++s[static_cast<std::size_t>(rho - f[v])];
  }
  return s;
}

LexVector path_aggregate(const FailureModel& model, NodeIndex from, NodeIndex to,
                         const Placement& placement, std::int64_t rho) {
  if (!model.is_ancestor_or_self(from, to)) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + model.node(from).id + "' is not an ancestor of '" +
                    model.node(to).id + "'");
  }
  std::vector<NodeIndex> path;
  for (NodeIndex v = to;; v = *model.node(v).parent) {
    path.push_back(v);
    if (v == from) break;
  }
  return subset_aggregate(model, path, placement, rho);
}

LexVector shift(const LexVector& v) {
  LexVector out(v.size());
  for (std::size_t i = 1; i < v.size(); ++i) out[i - 1] = v[i];
  return out;
}

}  // namespace fdplace
