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

#ifndef FDPLACE_SRC_SOLVER_TREE_HPP_
#define FDPLACE_SRC_SOLVER_TREE_HPP_

#include <cstdint>
#include <vector>

#include "fdplace/failure_model.hpp"

namespace fdplace::detail {

// The model as a single rooted tree. A forest gets a virtual root with index
// model.size() whose children are the model roots.
struct SolverTree {
  std::size_t root = 0;
  bool virtual_root = false;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::int64_t> leaf_count;
  std::vector<std::int64_t> capacity_sum;
  std::vector<std::int64_t> node_count;
  std::vector<std::size_t> min_depth_leaf;
  std::vector<std::size_t> depth;
  std::vector<std::size_t> preorder;

  std::size_t size() const { return children.size(); }
  bool is_leaf(std::size_t u) const { return children[u].empty(); }
};

SolverTree make_solver_tree(const FailureModel& model);

// Preorder of the subtree rooted at u.
template <class Visit>
void visit_subtree(const SolverTree& tree, std::size_t u, Visit&& visit) {
  std::vector<std::size_t> stack{u};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    visit(v);
    const auto& kids = tree.children[v];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
}

}  // namespace fdplace::detail

#endif  // FDPLACE_SRC_SOLVER_TREE_HPP_
