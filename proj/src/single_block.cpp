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

#include <algorithm>
#include <numeric>
#include <string>

#include "fdplace/error.hpp"
#include "select.hpp"
#include "solver_tree.hpp"

namespace fdplace {
namespace {

using detail::SolverTree;

void require_rho(const SolverTree& tree, std::int64_t rho) {
  if (rho < 1 || rho > tree.leaf_count[tree.root]) {
    throw Error(ErrorCode::kInfeasible,
                "replication factor " + std::to_string(rho) + " outside [1, " +
                    std::to_string(tree.leaf_count[tree.root]) + "]");
  }
}

enum class Role : std::uint8_t { kIdle, kActive, kFilled };

struct Divide {
  std::vector<std::int64_t> mass;
  std::vector<Role> role;
  std::vector<LabelResult> label;
};

// Top-down labeling. With stop_at_empty, nodes of mass zero are not split.
Divide divide(const SolverTree& tree, std::int64_t rho, bool stop_at_empty) {
  Divide d;
  d.mass.assign(tree.size(), -1);
  d.role.assign(tree.size(), Role::kIdle);
  d.label.resize(tree.size());
  d.mass[tree.root] = rho;
  d.role[tree.root] = Role::kActive;
  std::vector<std::int64_t> caps;
  for (std::size_t u : tree.preorder) {
    if (d.role[u] != Role::kActive || tree.is_leaf(u)) continue;
    if (stop_at_empty && d.mass[u] == 0) continue;
    const auto& kids = tree.children[u];
    caps.clear();
    for (std::size_t c : kids) caps.push_back(tree.leaf_count[c]);
    d.label[u] = label_children(caps, d.mass[u]);
    for (std::size_t pos : d.label[u].filled) {
      d.role[kids[pos]] = Role::kFilled;
      d.mass[kids[pos]] = tree.leaf_count[kids[pos]];
    }
    for (std::size_t pos : d.label[u].unfilled) {
      d.role[kids[pos]] = Role::kActive;
      d.mass[kids[pos]] = d.label[u].base;
    }
  }
  return d;
}

void collect_leaves(const SolverTree& tree, std::size_t u,
                    std::vector<NodeIndex>& out) {
  detail::visit_subtree(tree, u, [&](std::size_t v) {
    if (tree.is_leaf(v)) out.push_back(v);
  });
}

// Positions (into `items`) of the beta + 1 smallest under `less`, with the
// (beta + 1)-th smallest last.
template <class Less>
std::vector<std::size_t> smallest_with_extra(std::size_t count, std::size_t beta,
                                             Less less) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto nth = idx.begin() + static_cast<std::ptrdiff_t>(beta);
  detail::select_nth(idx.begin(), nth, idx.end(), less);
  idx.resize(beta + 1);
  return idx;
}

// ---------------------------------------------------------------------------
// Basic solver: full-length aggregates on the original tree.

SingleSolution run_basic(const FailureModel& model, const SolverTree& tree,
                         std::int64_t rho) {
  Divide d = divide(tree, rho, /*stop_at_empty=*/false);
  const std::size_t len = static_cast<std::size_t>(rho) + 1;
  auto unit = [&](std::int64_t f) {
    FailureAggregate e(len);
    ++e[static_cast<std::size_t>(rho - f)];
    return e;
  };

  std::vector<FailureAggregate> light(tree.size());
  std::vector<std::optional<FailureAggregate>> heavy(tree.size());
  std::vector<std::vector<std::size_t>> chosen(tree.size());

  for (auto it = tree.preorder.rbegin(); it != tree.preorder.rend(); ++it) {
    std::size_t u = *it;
    if (d.role[u] != Role::kActive) continue;
    const std::int64_t m = d.mass[u];
    // No subtree other than the root's can hold more than rho replicas.
    const bool want_heavy = u != tree.root && m + 1 <= tree.leaf_count[u] && m + 1 <= rho;
    if (tree.is_leaf(u)) {
      light[u] = unit(m);
      if (want_heavy) heavy[u] = unit(m + 1);
      continue;
    }
    const LabelResult& lab = d.label[u];
    const auto& kids = tree.children[u];
    FailureAggregate sum(len);
    for (std::size_t pos : lab.filled) {
      detail::visit_subtree(tree, kids[pos], [&](std::size_t v) {
        ++sum[static_cast<std::size_t>(rho - tree.leaf_count[v])];
      });
    }
    std::vector<FailureAggregate> diff;
    diff.reserve(lab.unfilled.size());
    for (std::size_t pos : lab.unfilled) {
      std::size_t c = kids[pos];
      sum += light[c];
      // Siblings share one mass, so either all have a heavy variant or
      // none is ever asked for one.
      diff.push_back(heavy[c] ? *heavy[c] - light[c] : FailureAggregate(len));
    }
    if (!lab.unfilled.empty()) {
      const auto beta = static_cast<std::size_t>(lab.heavy);
      chosen[u] = smallest_with_extra(diff.size(), beta, [&](std::size_t a, std::size_t b) {
        auto cmp = diff[a] <=> diff[b];
        return cmp < 0 || (cmp == 0 && a < b);
      });
      for (std::size_t i = 0; i < beta; ++i) sum += diff[chosen[u][i]];
      if (want_heavy) heavy[u] = sum + diff[chosen[u][beta]] + unit(m + 1);
    }
    light[u] = sum + unit(m);
    for (std::size_t pos : lab.unfilled) {
      light[kids[pos]] = FailureAggregate();
      heavy[kids[pos]].reset();
    }
  }

  FailureAggregate total = light[tree.root];
  if (tree.virtual_root) --total[0];

  // Top-down reconstruction; is_heavy marks nodes holding mass + 1.
  std::vector<bool> is_heavy(tree.size(), false);
  std::vector<NodeIndex> leaves;
  for (std::size_t u : tree.preorder) {
    if (d.role[u] != Role::kActive) continue;
    const std::int64_t m = d.mass[u] + (is_heavy[u] ? 1 : 0);
    if (tree.is_leaf(u)) {
      if (m == 1) leaves.push_back(u);
      continue;
    }
    const LabelResult& lab = d.label[u];
    const auto& kids = tree.children[u];
    for (std::size_t pos : lab.filled) collect_leaves(tree, kids[pos], leaves);
    if (lab.unfilled.empty()) continue;
    std::size_t take = static_cast<std::size_t>(lab.heavy) + (is_heavy[u] ? 1 : 0);
    for (std::size_t i = 0; i < take; ++i) {
      is_heavy[kids[lab.unfilled[chosen[u][i]]]] = true;
    }
  }
  return {std::move(total), make_placement(model, std::move(leaves))};
}

// ---------------------------------------------------------------------------
// Fast solver: histograms by failure number, truncated at the node's mass,
// on a combine tree with single-child chains contracted.

using Hist = std::vector<std::int64_t>;

void add_into(Hist& acc, const Hist& h) {
  if (acc.size() < h.size()) acc.resize(h.size(), 0);
  for (std::size_t i = 0; i < h.size(); ++i) acc[i] += h[i];
}

void add_unit(Hist& acc, std::int64_t f) {
  auto i = static_cast<std::size_t>(f);
  if (acc.size() <= i) acc.resize(i + 1, 0);
  ++acc[i];
}

// Lexicographic order of aggregates, i.e. from the highest failure number.
std::strong_ordering compare_desc(const Hist& a, const Hist& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return std::strong_ordering::equal;
}

struct CombineNode {
  enum class Kind { kBranch, kChain, kTerminal };
  Kind kind = Kind::kBranch;
  std::size_t origin = 0;           // chain: the chain end's parent chain top
  std::vector<std::size_t> chain;   // chain nodes, top-down
  std::vector<std::size_t> children;  // combine indices; branch: label order
};

struct CombineTree {
  std::vector<CombineNode> nodes;  // parents precede children
};

bool is_terminal(const SolverTree& tree, const Divide& d, std::size_t u) {
  return tree.is_leaf(u) || d.mass[u] == 0;
}

CombineTree build_combine_tree(const SolverTree& tree, const Divide& d, bool contract) {
  CombineTree ct;
  // (solver node, parent combine index or npos)
  std::vector<std::pair<std::size_t, std::size_t>> work{{tree.root, SIZE_MAX}};
  for (std::size_t w = 0; w < work.size(); ++w) {
    auto [u, parent] = work[w];
    CombineNode node;
    node.origin = u;
    std::size_t next = u;
    if (is_terminal(tree, d, u)) {
      node.kind = CombineNode::Kind::kTerminal;
    } else if (contract && d.label[u].unfilled.size() == 1) {
      node.kind = CombineNode::Kind::kChain;
      while (!is_terminal(tree, d, next) && d.label[next].unfilled.size() == 1) {
        node.chain.push_back(next);
        next = tree.children[next][d.label[next].unfilled.front()];
      }
    } else {
      node.kind = CombineNode::Kind::kBranch;
    }
    std::size_t self = ct.nodes.size();
    if (parent != SIZE_MAX) ct.nodes[parent].children.push_back(self);
    ct.nodes.push_back(std::move(node));
    const CombineNode& placed = ct.nodes.back();
    if (placed.kind == CombineNode::Kind::kChain) {
      work.emplace_back(next, self);
    } else if (placed.kind == CombineNode::Kind::kBranch) {
      for (std::size_t pos : d.label[u].unfilled) {
        work.emplace_back(tree.children[u][pos], self);
      }
    }
  }
  return ct;
}

Hist filled_hist(const SolverTree& tree, std::size_t u) {
  Hist h(static_cast<std::size_t>(tree.leaf_count[u]) + 1, 0);
  detail::visit_subtree(tree, u, [&](std::size_t v) {
    ++h[static_cast<std::size_t>(tree.leaf_count[v])];
  });
  return h;
}

Hist filled_children_hist(const SolverTree& tree, const Divide& d, std::size_t u) {
  Hist h;
  for (std::size_t pos : d.label[u].filled) add_into(h, filled_hist(tree, tree.children[u][pos]));
  return h;
}

SingleSolution run_fast(const FailureModel& model, const SolverTree& tree,
                        std::int64_t rho, const FastOptions& options,
                        FastStats* stats) {
  Divide d = divide(tree, rho, /*stop_at_empty=*/true);
  CombineTree ct = build_combine_tree(tree, d, options.contract_chains);
  const std::size_t count = ct.nodes.size();
  if (stats) {
    *stats = FastStats{};
    stats->combine_nodes = count;
    for (const CombineNode& node : ct.nodes) {
      if (node.kind == CombineNode::Kind::kChain) {
        ++stats->pseudonodes;
        stats->contracted_nodes += node.chain.size();
      }
    }
  }

  std::vector<Hist> light(count);
  std::vector<std::optional<Hist>> heavy(count);
  std::vector<std::vector<std::size_t>> chosen(count);

  for (std::size_t k = count; k-- > 0;) {
    const CombineNode& node = ct.nodes[k];
    const std::size_t u = node.origin;
    const std::int64_t m = d.mass[u];
    switch (node.kind) {
      case CombineNode::Kind::kTerminal: {
        if (m == 0) {
          const std::int64_t path =
              static_cast<std::int64_t>(tree.depth[tree.min_depth_leaf[u]] - tree.depth[u]) + 1;
          light[k] = Hist{tree.node_count[u]};
          heavy[k] = Hist{tree.node_count[u] - path, path};
        } else {
          light[k] = Hist{0, 1};  // a lone leaf holding the only replica
        }
        break;
      }
      case CombineNode::Kind::kChain: {
        Hist a;
        Hist b;
        for (std::size_t v : node.chain) {
          Hist filled = filled_children_hist(tree, d, v);
          add_into(a, filled);
          add_into(b, filled);
          add_unit(a, d.mass[v]);
          add_unit(b, d.mass[v] + 1);
        }
        const std::size_t child = node.children.front();
        add_into(a, light[child]);
        light[k] = std::move(a);
        if (heavy[child]) {
          add_into(b, *heavy[child]);
          heavy[k] = std::move(b);
        }
        break;
      }
      case CombineNode::Kind::kBranch: {
        const LabelResult& lab = d.label[u];
        const bool want_heavy = u != tree.root && m + 1 <= tree.leaf_count[u];
        Hist sum = filled_children_hist(tree, d, u);
        std::vector<Hist> diff;
        diff.reserve(node.children.size());
        for (std::size_t c : node.children) {
          add_into(sum, light[c]);
          Hist delta = *heavy[c];
          for (std::size_t i = 0; i < light[c].size(); ++i) delta[i] -= light[c][i];
          diff.push_back(std::move(delta));
        }
        if (!node.children.empty()) {
          const auto beta = static_cast<std::size_t>(lab.heavy);
          chosen[k] = smallest_with_extra(diff.size(), beta, [&](std::size_t a, std::size_t b) {
            auto cmp = compare_desc(diff[a], diff[b]);
            return cmp < 0 || (cmp == 0 && a < b);
          });
          for (std::size_t i = 0; i < beta; ++i) add_into(sum, diff[chosen[k][i]]);
          if (want_heavy) {
            Hist h = sum;
            add_into(h, diff[chosen[k][beta]]);
            add_unit(h, m + 1);
            h.resize(static_cast<std::size_t>(m) + 2, 0);
            heavy[k] = std::move(h);
          }
        }
        add_unit(sum, m);
        sum.resize(static_cast<std::size_t>(m) + 1, 0);
        light[k] = std::move(sum);
        break;
      }
    }
    for (std::size_t c : node.children) {
      light[c].clear();
      light[c].shrink_to_fit();
      heavy[c].reset();
    }
  }

  Hist root = light.front();
  root.resize(static_cast<std::size_t>(rho) + 1, 0);
  if (tree.virtual_root) --root[static_cast<std::size_t>(rho)];
  FailureAggregate total(static_cast<std::size_t>(rho) + 1);
  for (std::size_t f = 0; f < root.size(); ++f) {
    total[static_cast<std::size_t>(rho) - f] = root[f];
  }

  std::vector<bool> is_heavy(count, false);
  std::vector<NodeIndex> leaves;
  for (std::size_t k = 0; k < count; ++k) {
    const CombineNode& node = ct.nodes[k];
    const std::size_t u = node.origin;
    switch (node.kind) {
      case CombineNode::Kind::kTerminal:
        if (d.mass[u] == 0) {
          if (is_heavy[k]) leaves.push_back(tree.min_depth_leaf[u]);
        } else {
          leaves.push_back(u);
        }
        break;
      case CombineNode::Kind::kChain:
        for (std::size_t v : node.chain) {
          for (std::size_t pos : d.label[v].filled) {
            collect_leaves(tree, tree.children[v][pos], leaves);
          }
        }
        is_heavy[node.children.front()] = is_heavy[k];
        break;
      case CombineNode::Kind::kBranch: {
        for (std::size_t pos : d.label[u].filled) {
          collect_leaves(tree, tree.children[u][pos], leaves);
        }
        if (node.children.empty()) break;
        std::size_t take = static_cast<std::size_t>(d.label[u].heavy) + (is_heavy[k] ? 1 : 0);
        for (std::size_t i = 0; i < take; ++i) is_heavy[node.children[chosen[k][i]]] = true;
        break;
      }
    }
  }
  return {std::move(total), make_placement(model, std::move(leaves))};
}

}  // namespace

LabelResult label_children(std::span<const std::int64_t> capacities, std::int64_t r) {
  std::int64_t total = 0;
  for (std::int64_t c : capacities) {
    if (c <= 0) throw Error(ErrorCode::kInvalidArgument, "child capacity must be positive");
    total += c;
  }
  if (r < 0 || r > total) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot split " + std::to_string(r) + " replicas over capacity " +
                    std::to_string(total));
  }
  LabelResult out;
  const std::size_t t = capacities.size();
  if (r == total) {
    out.filled.resize(t);
    std::iota(out.filled.begin(), out.filled.end(), std::size_t{0});
    return out;
  }

  std::vector<std::size_t> live(t);
  std::iota(live.begin(), live.end(), std::size_t{0});
  auto by_cap = [&](std::size_t a, std::size_t b) {
    return capacities[a] < capacities[b] || (capacities[a] == capacities[b] && a < b);
  };
  // A child of capacity v is filled iff sum(min(c, v)) <= r. Each round
  // tests the lower median of the undecided children and settles at least
  // half of them.
  std::int64_t settled_low = 0;    // capacity of children known filled
  std::int64_t settled_high = 0;   // number of children known unfilled
  std::vector<std::size_t> low, high;
  while (!live.empty()) {
    const std::size_t mid = (live.size() - 1) / 2;
    detail::select_nth(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(mid),
                       live.end(), by_cap);
    const std::int64_t v = capacities[live[mid]];
    std::int64_t level = settled_low + v * settled_high;
    for (std::size_t i : live) level += std::min(capacities[i], v);
    low.clear();
    high.clear();
    if (level <= r) {
      for (std::size_t i : live) {
        if (capacities[i] <= v) {
          out.filled.push_back(i);
          settled_low += capacities[i];
        } else {
          high.push_back(i);
        }
      }
      live.swap(high);
    } else {
      for (std::size_t i : live) {
        if (capacities[i] >= v) {
          out.unfilled.push_back(i);
          ++settled_high;
        } else {
          low.push_back(i);
        }
      }
      live.swap(low);
    }
  }
  std::sort(out.filled.begin(), out.filled.end());
  std::sort(out.unfilled.begin(), out.unfilled.end());
  std::int64_t filled_sum = 0;
  for (std::size_t i : out.filled) filled_sum += capacities[i];
  out.remaining = r - filled_sum;
  const auto u = static_cast<std::int64_t>(out.unfilled.size());
  out.base = out.remaining / u;
  out.heavy = out.remaining % u;
  return out;
}

std::vector<std::size_t> select_heavy(std::span<const ChildValuePair> pairs,
                                      std::size_t beta) {
  if (beta > pairs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "beta exceeds the number of children");
  }
  if (beta == 0) return {};
  std::vector<FailureAggregate> diff;
  diff.reserve(pairs.size());
  for (const auto& p : pairs) diff.push_back(p.heavy - p.light);
  std::vector<std::size_t> idx =
      smallest_with_extra(pairs.size(), beta - 1, [&](std::size_t a, std::size_t b) {
        auto cmp = diff[a] <=> diff[b];
        return cmp < 0 || (cmp == 0 && a < b);
      });
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::string_view to_string(SingleAlgorithm algorithm) {
  switch (algorithm) {
    case SingleAlgorithm::kFast: return "fast";
    case SingleAlgorithm::kBasic: return "basic";
    case SingleAlgorithm::kGreedy: return "greedy";
  }
  return "fast";
}

std::optional<SingleAlgorithm> parse_single_algorithm(std::string_view name) {
  if (name == "fast") return SingleAlgorithm::kFast;
  if (name == "basic") return SingleAlgorithm::kBasic;
  if (name == "greedy") return SingleAlgorithm::kGreedy;
  return std::nullopt;
}

SingleSolution solve_basic(const FailureModel& model, std::int64_t rho) {
  SolverTree tree = detail::make_solver_tree(model);
  require_rho(tree, rho);
  return run_basic(model, tree, rho);
}

SingleSolution solve_fast(const FailureModel& model, std::int64_t rho,
                          const FastOptions& options, FastStats* stats) {
  SolverTree tree = detail::make_solver_tree(model);
  require_rho(tree, rho);
  return run_fast(model, tree, rho, options, stats);
}

SingleSolution solve_greedy(const FailureModel& model, std::int64_t rho) {
  SolverTree tree = detail::make_solver_tree(model);
  require_rho(tree, rho);
  const std::size_t len = static_cast<std::size_t>(rho) + 1;
  std::vector<std::int64_t> f(model.size(), 0);
  std::vector<bool> used(model.size(), false);
  FailureAggregate current(len);
  current[static_cast<std::size_t>(rho)] = static_cast<std::int64_t>(model.size());

  std::vector<NodeIndex> chosen;
  FailureAggregate path;
  for (std::int64_t step = 0; step < rho; ++step) {
    std::optional<FailureAggregate> best;
    NodeIndex best_leaf = 0;
    for (NodeIndex leaf : model.leaves()) {
      if (used[leaf]) continue;
      path = FailureAggregate(len);
      for (std::optional<NodeIndex> v = leaf; v; v = model.node(*v).parent) {
        ++path[static_cast<std::size_t>(rho - f[*v])];
      }
      // Every node on the path gains one replica: entries move one index left.
      FailureAggregate candidate = current - path;
      for (std::size_t i = 1; i < len; ++i) candidate[i - 1] += path[i];
      if (!best || candidate < *best ||
          (candidate == *best && model.node(leaf).id < model.node(best_leaf).id)) {
        best = std::move(candidate);
        best_leaf = leaf;
      }
    }
    used[best_leaf] = true;
    chosen.push_back(best_leaf);
    for (std::optional<NodeIndex> v = best_leaf; v; v = model.node(*v).parent) ++f[*v];
    current = std::move(*best);
  }
  return {std::move(current), make_placement(model, std::move(chosen))};
}

SingleSolution solve_single(const FailureModel& model, std::int64_t rho,
                            SingleAlgorithm algorithm) {
  switch (algorithm) {
    case SingleAlgorithm::kBasic: return solve_basic(model, rho);
    case SingleAlgorithm::kGreedy: return solve_greedy(model, rho);
    case SingleAlgorithm::kFast: break;
  }
  return solve_fast(model, rho);
}

std::vector<Chain> contract_chains(const FailureModel& model, std::int64_t rho) {
  SolverTree tree = detail::make_solver_tree(model);
  require_rho(tree, rho);
  Divide d = divide(tree, rho, /*stop_at_empty=*/true);
  CombineTree ct = build_combine_tree(tree, d, /*contract=*/true);
  std::vector<Chain> chains;
  for (const CombineNode& node : ct.nodes) {
    if (node.kind != CombineNode::Kind::kChain) continue;
    Chain chain;
    for (std::size_t v : node.chain) {
      if (v < model.size()) chain.nodes.push_back(v);
    }
    if (chain.nodes.empty()) continue;
    chain.end = ct.nodes[node.children.front()].origin;
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace fdplace
