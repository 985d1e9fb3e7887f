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

#include <gtest/gtest.h>

#include "fdplace/error.hpp"

namespace fdplace {
namespace {

TEST(GenerateTest, SameSeedSameModel) {
  GeneratorOptions o;
  o.leaves = 40;
  o.seed = 9;
  o.max_capacity = 3;
  EXPECT_EQ(render_model(generate_model(o)), render_model(generate_model(o)));
  GeneratorOptions other = o;
  other.seed = 10;
  EXPECT_NE(model_digest(generate_model(o)), model_digest(generate_model(other)));
}

TEST(GenerateTest, RespectsShapeOptions) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorOptions o;
    o.seed = seed;
    o.leaves = 1 + seed * 7 % 60;
    o.max_fanout = 2 + seed % 4;
    o.max_capacity = 1 + static_cast<std::int64_t>(seed % 3);
    o.roots = std::min<std::size_t>(1 + seed % 3, o.leaves);
    FailureModel m = generate_model(o);
    EXPECT_EQ(m.leaves().size(), o.leaves);
    EXPECT_EQ(m.roots().size(), o.roots);
    for (const Node& n : m.nodes()) {
      EXPECT_LE(n.children.size(), o.max_fanout);
      if (n.is_leaf()) {
        ASSERT_TRUE(n.capacity.has_value());
        EXPECT_GE(*n.capacity, 1);
        EXPECT_LE(*n.capacity, o.max_capacity);
      }
    }
  }
}

TEST(GenerateTest, RejectsBadOptions) {
  GeneratorOptions o;
  o.leaves = 0;
  EXPECT_THROW(generate_model(o), Error);
  o.leaves = 5;
  o.max_fanout = 1;
  EXPECT_THROW(generate_model(o), Error);
  o.max_fanout = 3;
  o.roots = 6;
  EXPECT_THROW(generate_model(o), Error);
}

}  // namespace
}  // namespace fdplace
