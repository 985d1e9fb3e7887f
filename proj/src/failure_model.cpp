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

#include "fdplace/failure_model.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "fdplace/error.hpp"
#include "json.hpp"

namespace fdplace {
namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidModel, message);
}

}  // namespace

FailureModel FailureModel::FromSpecs(const std::vector<NodeSpec>& specs) {
  if (specs.empty()) invalid("model has no nodes");
  FailureModel model;
  model.nodes_.reserve(specs.size());
  for (NodeIndex i = 0; i < specs.size(); ++i) {
    const NodeSpec& spec = specs[i];
    if (spec.id.empty()) invalid("node " + std::to_string(i) + " has an empty id");
    if (!model.index_.emplace(spec.id, i).second) {
      invalid("duplicate node id '" + spec.id + "'");
    }
    Node node;
    node.id = spec.id;
    node.capacity = spec.capacity;
    model.nodes_.push_back(std::move(node));
  }
  for (NodeIndex i = 0; i < specs.size(); ++i) {
    if (!specs[i].parent) {
      model.roots_.push_back(i);
      continue;
    }
    auto it = model.index_.find(*specs[i].parent);
    if (it == model.index_.end()) {
      invalid("node '" + specs[i].id + "' has unknown parent '" +
              *specs[i].parent + "'");
    }
    if (it->second == i) invalid("node '" + specs[i].id + "' is its own parent");
    model.nodes_[i].parent = it->second;
    model.nodes_[it->second].children.push_back(i);
  }
  for (Node& node : model.nodes_) {
    if (node.children.empty()) {
      if (!node.capacity) invalid("leaf '" + node.id + "' has no capacity");
      if (*node.capacity <= 0) {
        invalid("leaf '" + node.id + "' has non-positive capacity");
      }
      model.total_capacity_ += *node.capacity;
    } else if (node.capacity) {
      invalid("internal node '" + node.id + "' carries a capacity");
    }
  }

  const std::size_t n = model.nodes_.size();
  model.depth_.assign(n, 0);
  model.enter_.assign(n, 0);
  model.exit_.assign(n, 0);
  std::vector<bool> seen(n, false);
  std::size_t clock = 0;
  // (node, next child position) stack for an iterative Euler tour.
  std::vector<std::pair<NodeIndex, std::size_t>> stack;
  for (NodeIndex root : model.roots_) {
    stack.emplace_back(root, 0);
    seen[root] = true;
    model.enter_[root] = clock++;
    model.preorder_.push_back(root);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& kids = model.nodes_[u].children;
      if (next < kids.size()) {
        NodeIndex c = kids[next++];
        seen[c] = true;
        model.depth_[c] = model.depth_[u] + 1;
        model.enter_[c] = clock++;
        model.preorder_.push_back(c);
        stack.emplace_back(c, 0);
      } else {
        model.exit_[u] = clock++;
        stack.pop_back();
      }
    }
  }
  for (NodeIndex i = 0; i < n; ++i) {
    if (!seen[i]) invalid("node '" + model.nodes_[i].id + "' lies on a cycle");
  }
  for (NodeIndex u : model.preorder_) {
    if (model.nodes_[u].is_leaf()) model.leaves_.push_back(u);
  }
  return model;
}

std::optional<NodeIndex> FailureModel::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex FailureModel::at(std::string_view id) const {
  auto found = find(id);
  if (!found) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown node id '" + std::string(id) + "'");
  }
  return *found;
}

FailureModel parse_model(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    invalid(std::string("malformed model JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    invalid("model JSON must be an object with a \"nodes\" array");
  }
  std::vector<NodeSpec> specs;
  for (const auto& entry : doc["nodes"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      invalid("every node needs a string \"id\"");
    }
    NodeSpec spec;
    spec.id = entry["id"].get<std::string>();
    if (entry.contains("parent") && !entry["parent"].is_null()) {
      if (!entry["parent"].is_string()) {
        invalid("parent of '" + spec.id + "' must be a string or null");
      }
      spec.parent = entry["parent"].get<std::string>();
    }
    if (entry.contains("capacity") && !entry["capacity"].is_null()) {
      if (!entry["capacity"].is_number_integer()) {
        invalid("capacity of '" + spec.id + "' must be an integer");
      }
      spec.capacity = entry["capacity"].get<std::int64_t>();
    }
    specs.push_back(std::move(spec));
  }
  return FailureModel::FromSpecs(specs);
}

FailureModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read model file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string render_model(const FailureModel& model) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const Node& node : model.nodes()) {
    nlohmann::ordered_json entry;
    entry["id"] = node.id;
    if (node.parent) {
      entry["parent"] = model.node(*node.parent).id;
    } else {
      entry["parent"] = nullptr;
    }
    if (node.capacity) entry["capacity"] = *node.capacity;
    nodes.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

std::string model_digest(const FailureModel& model) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : render_model(model)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

SubtreeStats subtree_stats(const FailureModel& model) {
  const std::size_t n = model.size();
  SubtreeStats stats;
  stats.leaf_count.assign(n, 0);
  stats.capacity_sum.assign(n, 0);
  stats.node_count.assign(n, 1);
  stats.min_depth_leaf.assign(n, 0);
  auto order = model.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeIndex u = *it;
    const Node& node = model.node(u);
    if (node.is_leaf()) {
      stats.leaf_count[u] = 1;
      stats.capacity_sum[u] = *node.capacity;
      stats.min_depth_leaf[u] = u;
      continue;
    }
    bool first = true;
    for (NodeIndex c : node.children) {
      stats.leaf_count[u] += stats.leaf_count[c];
      stats.capacity_sum[u] += stats.capacity_sum[c];
      stats.node_count[u] += stats.node_count[c];
      NodeIndex cand = stats.min_depth_leaf[c];
      if (first || model.depth(cand) < model.depth(stats.min_depth_leaf[u])) {
        stats.min_depth_leaf[u] = cand;
        first = false;
      }
    }
  }
  return stats;
}

}  // namespace fdplace
