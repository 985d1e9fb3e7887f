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

#ifndef FDPLACE_GENERATE_HPP_
#define FDPLACE_GENERATE_HPP_

#include <cstddef>
#include <cstdint>

#include "fdplace/failure_model.hpp"

namespace fdplace {

struct GeneratorOptions {
  std::size_t leaves = 8;
  std::uint64_t seed = 1;
  std::size_t max_fanout = 3;
  std::int64_t max_capacity = 1;  // capacities drawn from [1, max_capacity]
  std::size_t roots = 1;
  unsigned chain_percent = 15;  // chance of a single-child node
};

// Deterministic for a given options value on every platform.
FailureModel generate_model(const GeneratorOptions& options);

}  // namespace fdplace

#endif  // FDPLACE_GENERATE_HPP_
