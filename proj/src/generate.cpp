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

#include "fdplace/generate.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fdplace/error.hpp"

namespace fdplace {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform-ish on [0, bound); plain modulo keeps results portable.
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  bool percent(unsigned p) { return below(100) < p; }

 private:
  std::mt19937_64 engine_;
};

// Splits n into k positive parts at random cut points.
std::vector<std::size_t> split(Rng& rng, std::size_t n, std::size_t k) {
  std::set<std::size_t> cuts;
  while (cuts.size() + 1 < k) cuts.insert(1 + rng.below(n - 1));
  std::vector<std::size_t> parts;
  std::size_t prev = 0;
  for (std::size_t c : cuts) {
    parts.push_back(c - prev);
    prev = c;
  }
  parts.push_back(n - prev);
  return parts;
}

}  // namespace

FailureModel generate_model(const GeneratorOptions& options) {
  if (options.leaves == 0 || options.roots == 0 || options.roots > options.leaves) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= roots <= leaves");
  }
  if (options.max_fanout < 2 && options.leaves > options.roots) {
    throw Error(ErrorCode::kInvalidArgument, "max fanout must be at least 2");
  }
  if (options.max_capacity < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max capacity must be positive");
  }
  constexpr std::size_t kMaxChainDepth = 24;
  Rng rng(options.seed);
  std::vector<NodeSpec> specs;
  struct Pending {
    std::optional<std::string> parent;
    std::size_t leaves;
    std::size_t depth;
  };
  std::vector<Pending> stack;
  std::vector<std::size_t> root_parts = split(rng, options.leaves, options.roots);
  for (auto it = root_parts.rbegin(); it != root_parts.rend(); ++it) {
    stack.push_back({std::nullopt, *it, 0});
  }
  while (!stack.empty()) {
    Pending job = stack.back();
    stack.pop_back();
    NodeSpec spec;
    spec.id = "v" + std::to_string(specs.size());
    spec.parent = job.parent;
    const bool may_chain = job.depth < kMaxChainDepth && rng.percent(options.chain_percent);
    if (job.leaves == 1 && !may_chain) {
      spec.capacity = 1 + static_cast<std::int64_t>(
                              rng.below(static_cast<std::uint64_t>(options.max_capacity)));
      specs.push_back(std::move(spec));
      continue;
    }
    std::size_t fanout = 1;
    if (job.leaves > 1 && !may_chain) {
      const std::size_t cap = std::min(options.max_fanout, job.leaves);
      fanout = 2 + rng.below(cap - 1);
    }
    std::vector<std::size_t> parts = split(rng, job.leaves, fanout);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      stack.push_back({spec.id, *it, job.depth + 1});
    }
    specs.push_back(std::move(spec));
  }
  return FailureModel::FromSpecs(specs);
}

}  // namespace fdplace
