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

#include "fdplace/fdplace.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using nlohmann::json;

std::string fixture(const std::string& name) { return std::string(FDPLACE_FIXTURE_DIR) + "/" + name; }

struct ModelHandle {
  fdp_model* p = nullptr;
  ~ModelHandle() { fdp_model_free(p); }
};

struct ResultHandle {
  fdp_result* p = nullptr;
  ~ResultHandle() { fdp_result_free(p); }
  std::vector<int64_t> objective() const {
    std::vector<int64_t> v(fdp_result_objective(p, nullptr, 0));
    fdp_result_objective(p, v.data(), v.size());
    return v;
  }
  json report(const char* command = nullptr) const {
    char* text = fdp_result_json(p, command);
    json j = json::parse(text);
    fdp_string_free(text);
    return j;
  }
};

TEST(CApiTest, LoadAndSolve) {
  ModelHandle m;
  ASSERT_EQ(fdp_model_load(fixture("datacenter_model.json").c_str(), &m.p), FDP_OK);
  EXPECT_EQ(fdp_model_node_count(m.p), 15u);
  EXPECT_EQ(fdp_model_leaf_count(m.p), 9u);
  for (fdp_algorithm a : {FDP_ALGO_FAST, FDP_ALGO_BASIC, FDP_ALGO_GREEDY}) {
    ResultHandle r;
    ASSERT_EQ(fdp_solve_single(m.p, 3, a, &r.p), FDP_OK);
    EXPECT_EQ(r.objective(), (std::vector<int64_t>{0, 1, 7, 7}));
    EXPECT_GE(fdp_result_wall_ms(r.p), 0.0);
    json j = r.report("solve-single");
    EXPECT_EQ(j["command"], "solve-single");
    EXPECT_EQ(j["witness"]["leaves"].size(), 3u);
  }
}

TEST(CApiTest, ErrorsCarryStatusAndMessage) {
  ModelHandle m;
  const std::string bad = R"({"nodes": [{"id": "a", "parent": "b"}]})";
  EXPECT_EQ(fdp_model_parse(bad.data(), bad.size(), &m.p), FDP_ERR_INVALID_INPUT);
  EXPECT_EQ(m.p, nullptr);
  EXPECT_NE(std::string(fdp_last_error()), "");
  EXPECT_EQ(fdp_model_load("/nonexistent/model.json", &m.p), FDP_ERR_IO);

  ASSERT_EQ(fdp_model_load(fixture("datacenter_model.json").c_str(), &m.p), FDP_OK);
  ResultHandle r;
  EXPECT_EQ(fdp_solve_single(m.p, 10, FDP_ALGO_FAST, &r.p), FDP_ERR_INFEASIBLE);
  EXPECT_EQ(fdp_solve_single(nullptr, 3, FDP_ALGO_FAST, &r.p), FDP_ERR_INVALID_INPUT);
  EXPECT_EQ(fdp_oracle_single(m.p, 4, 10, 1, &r.p), FDP_ERR_GUARD);
}

TEST(CApiTest, MultiSolveAndCache) {
  ModelHandle m;
  ASSERT_EQ(fdp_model_load(fixture("inner_node_model.json").c_str(), &m.p), FDP_OK);
  const int64_t sizes[] = {3, 3, 2};
  ResultHandle oracle;
  ASSERT_EQ(fdp_oracle_multi(m.p, sizes, 3, 0, 1, &oracle.p), FDP_OK);

  const auto cache = std::filesystem::temp_directory_path() / "fdplace_capi_phi.json";
  std::filesystem::remove(cache);
  for (int pass = 0; pass < 2; ++pass) {
    ResultHandle r;
    ASSERT_EQ(fdp_solve_multi(m.p, sizes, 3, 0, cache.c_str(), &r.p), FDP_OK);
    EXPECT_EQ(r.objective(), oracle.objective());
    EXPECT_TRUE(std::filesystem::exists(cache));
  }
  std::filesystem::remove(cache);

  ResultHandle r;
  const int64_t tight[] = {3, 1};
  EXPECT_EQ(fdp_solve_multi(m.p, tight, 2, 1, nullptr, &r.p), FDP_ERR_SKEW_BELOW_NATURAL);
}

TEST(CApiTest, EvalAndCheck) {
  ModelHandle m;
  ASSERT_EQ(fdp_model_load(fixture("datacenter_model.json").c_str(), &m.p), FDP_OK);
  const std::string p1 = R"({"leaves": ["srv7", "srv8", "srv9"]})";
  ResultHandle e;
  ASSERT_EQ(fdp_eval(m.p, p1.data(), p1.size(), 0, &e.p), FDP_OK);
  EXPECT_EQ(e.objective(), (std::vector<int64_t>{2, 0, 3, 10}));
  ResultHandle c;
  ASSERT_EQ(fdp_check(m.p, p1.data(), p1.size(), &c.p), FDP_OK);
  json j = c.report();
  EXPECT_EQ(j["balanced"], false);
  const std::string bogus = R"({"leaves": ["rack1"]})";
  ResultHandle b;
  EXPECT_EQ(fdp_eval(m.p, bogus.data(), bogus.size(), 0, &b.p), FDP_ERR_INVALID_INPUT);
}

TEST(CApiTest, GenerateAndPhi) {
  char* text = nullptr;
  ASSERT_EQ(fdp_generate(12, 3, 3, 2, 1, &text), FDP_OK);
  ModelHandle m;
  EXPECT_EQ(fdp_model_parse(text, std::string(text).size(), &m.p), FDP_OK);
  EXPECT_EQ(fdp_model_leaf_count(m.p), 12u);
  fdp_string_free(text);

  ASSERT_EQ(fdp_phi_dump(3, 3, 1, &text), FDP_OK);
  json phi = json::parse(text);
  fdp_string_free(text);
  EXPECT_EQ(phi["rho"], 3);
  EXPECT_NE(std::string(fdp_version()), "");
}

}  // namespace
