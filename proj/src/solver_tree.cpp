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

#include "solver_tree.hpp"

namespace fdplace::detail {

SolverTree make_solver_tree(const FailureModel& model) {
  const std::size_t n = model.size();
  const bool forest = model.roots().size() > 1;
  const std::size_t total = forest ? n + 1 : n;
  SolverTree tree;
  tree.virtual_root = forest;
  tree.root = forest ? n : model.roots().front();
  tree.children.resize(total);
  tree.depth.assign(total, 0);
  for (NodeIndex u = 0; u < n; ++u) {
    tree.children[u].assign(model.node(u).children.begin(),
                            model.node(u).children.end());
    tree.depth[u] = model.depth(u) + (forest ? 1 : 0);
  }
  if (forest) tree.children[n].assign(model.roots().begin(), model.roots().end());

  if (forest) tree.preorder.push_back(n);
  for (NodeIndex u : model.preorder()) tree.preorder.push_back(u);

  SubtreeStats stats = subtree_stats(model);
  tree.leaf_count = std::move(stats.leaf_count);
  tree.capacity_sum = std::move(stats.capacity_sum);
  tree.node_count = std::move(stats.node_count);
  tree.min_depth_leaf = std::move(stats.min_depth_leaf);
  if (forest) {
    std::int64_t leaves = 0;
    std::int64_t capacity = 0;
    std::int64_t nodes = 1;
    std::size_t best = tree.min_depth_leaf[model.roots().front()];
    for (NodeIndex r : model.roots()) {
      leaves += tree.leaf_count[r];
      capacity += tree.capacity_sum[r];
      nodes += tree.node_count[r];
      if (tree.depth[tree.min_depth_leaf[r]] < tree.depth[best]) {
        best = tree.min_depth_leaf[r];
      }
    }
    tree.leaf_count.push_back(leaves);
    tree.capacity_sum.push_back(capacity);
    tree.node_count.push_back(nodes);
    tree.min_depth_leaf.push_back(best);
  }
  return tree;
}

}  // namespace fdplace::detail
