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

#ifndef FDPLACE_FAILURE_MODEL_HPP_
#define FDPLACE_FAILURE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fdplace {

using NodeIndex = std::size_t;

enum class NodeKind { kEvent, kServer };

struct Node {
  std::string id;
  std::optional<NodeIndex> parent;
  // Present exactly on servers (leaves).
  std::optional<std::int64_t> capacity;
  std::vector<NodeIndex> children;

  NodeKind kind() const {
    return capacity ? NodeKind::kServer : NodeKind::kEvent;
  }
  bool is_leaf() const { return capacity.has_value(); }
};

// Unvalidated node record as it appears in a model file.
struct NodeSpec {
  std::string id;
  std::optional<std::string> parent;
  std::optional<std::int64_t> capacity;
};

// Immutable forest of failure events with servers at the leaves. Node
// indices follow input order; children keep input order too.
class FailureModel {
 public:
  // Throws Error(kInvalidModel) on duplicate ids, unknown parents, cycles,
  // capacities on internal nodes, missing or non-positive leaf capacities.
  static FailureModel FromSpecs(const std::vector<NodeSpec>& specs);

  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeIndex i) const { return nodes_[i]; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const NodeIndex> roots() const { return roots_; }
  std::span<const NodeIndex> leaves() const { return leaves_; }
  // Parents precede children; siblings in input order.
  std::span<const NodeIndex> preorder() const { return preorder_; }

  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex at(std::string_view id) const;  // throws kInvalidArgument

  std::size_t depth(NodeIndex i) const { return depth_[i]; }
  bool is_ancestor_or_self(NodeIndex ancestor, NodeIndex node) const {
    return enter_[ancestor] <= enter_[node] && exit_[node] <= exit_[ancestor];
  }
  std::int64_t total_capacity() const { return total_capacity_; }

 private:
  std::vector<Node> nodes_;
  std::vector<NodeIndex> roots_;
  std::vector<NodeIndex> leaves_;
  std::vector<NodeIndex> preorder_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> enter_;
  std::vector<std::size_t> exit_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::int64_t total_capacity_ = 0;
};

FailureModel parse_model(std::string_view json_text);
FailureModel load_model(const std::filesystem::path& path);
std::string render_model(const FailureModel& model);

// Hex FNV-1a digest of render_model(model).
std::string model_digest(const FailureModel& model);

struct SubtreeStats {
  std::vector<std::int64_t> leaf_count;
  std::vector<std::int64_t> capacity_sum;
  std::vector<std::int64_t> node_count;
  // Leaf of minimum depth below each node; ties go to the first in preorder.
  std::vector<NodeIndex> min_depth_leaf;
};

SubtreeStats subtree_stats(const FailureModel& model);

}  // namespace fdplace

#endif  // FDPLACE_FAILURE_MODEL_HPP_
