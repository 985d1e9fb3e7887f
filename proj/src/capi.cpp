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

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fdplace/error.hpp"
#include "fdplace/failure_model.hpp"
#include "fdplace/generate.hpp"
#include "fdplace/metrics.hpp"
#include "fdplace/multi_block.hpp"
#include "fdplace/oracle.hpp"
#include "fdplace/single_block.hpp"
#include "json.hpp"

using nlohmann::ordered_json;

struct fdp_model {
  fdplace::FailureModel model;
  std::string digest;
};

struct fdp_result {
  std::vector<std::int64_t> objective;
  double wall_ms = 0;
  ordered_json body;
};

namespace {

thread_local std::string g_last_error;

fdp_status status_of(fdplace::ErrorCode code) {
  using fdplace::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidModel:
    case ErrorCode::kInvalidArgument: return FDP_ERR_INVALID_INPUT;
    case ErrorCode::kInfeasible: return FDP_ERR_INFEASIBLE;
    case ErrorCode::kSkewBelowNatural: return FDP_ERR_SKEW_BELOW_NATURAL;
    case ErrorCode::kGuardTripped: return FDP_ERR_GUARD;
    case ErrorCode::kIo: return FDP_ERR_IO;
    case ErrorCode::kInternal: break;
  }
  return FDP_ERR_INTERNAL;
}

template <class Body>
fdp_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return FDP_OK;
  } catch (const fdplace::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  }
  return FDP_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw fdplace::Error(fdplace::ErrorCode::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ordered_json ids_json(const fdplace::FailureModel& model, const fdplace::Placement& p) {
  return ordered_json(fdplace::placement_ids(model, p));
}

ordered_json blocks_json(const fdplace::FailureModel& model, const fdplace::MultiPlacement& mp) {
  ordered_json blocks = ordered_json::array();
  for (const auto& b : mp.blocks) blocks.push_back(ids_json(model, b));
  return blocks;
}

fdp_result* make_result(const fdp_model* m, const char* algorithm,
                        const fdplace::LexVector* objective) {
  auto* r = new fdp_result;
  r->body["algorithm"] = algorithm;
  r->body["model_digest"] = m->digest;
  if (objective) r->objective = objective->entries();
  return r;
}

void put_objective(fdp_result* r, const fdplace::LexVector& objective) {
  r->body["objective"] = objective.entries();
  r->body["objective_text"] = objective.str();
}

std::vector<std::int64_t> sizes_of(const int64_t* sizes, size_t count) {
  require(count == 0 || sizes != nullptr, "sizes pointer is null");
  return std::vector<std::int64_t>(sizes, sizes + count);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::json parse_placement_doc(const char* text, size_t length) {
  require(text != nullptr, "placement text is null");
  try {
    return nlohmann::json::parse(std::string_view(text, length));
  } catch (const nlohmann::json::parse_error& e) {
    throw fdplace::Error(fdplace::ErrorCode::kInvalidArgument,
                         std::string("malformed placement JSON: ") + e.what());
  }
}

std::vector<std::string> string_list(const nlohmann::json& j, const char* what) {
  require(j.is_array(), what);
  std::vector<std::string> out;
  for (const auto& e : j) {
    require(e.is_string(), what);
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

extern "C" {

const char* fdp_version(void) { return "1.0.0"; }

const char* fdp_last_error(void) { return g_last_error.c_str(); }

fdp_status fdp_model_parse(const char* text, size_t length, fdp_model** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    auto model = fdplace::parse_model(std::string_view(text, length));
    std::string digest = fdplace::model_digest(model);
    *out = new fdp_model{std::move(model), std::move(digest)};
  });
}

fdp_status fdp_model_load(const char* path, fdp_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto model = fdplace::load_model(path);
    std::string digest = fdplace::model_digest(model);
    *out = new fdp_model{std::move(model), std::move(digest)};
  });
}

void fdp_model_free(fdp_model* model) { delete model; }

size_t fdp_model_node_count(const fdp_model* model) {
  return model ? model->model.size() : 0;
}

size_t fdp_model_leaf_count(const fdp_model* model) {
  return model ? model->model.leaves().size() : 0;
}

fdp_status fdp_solve_single(const fdp_model* model, int64_t rho, fdp_algorithm algorithm,
                            fdp_result** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    fdplace::SingleAlgorithm algo = fdplace::SingleAlgorithm::kFast;
    switch (algorithm) {
      case FDP_ALGO_FAST: break;
      case FDP_ALGO_BASIC: algo = fdplace::SingleAlgorithm::kBasic; break;
      case FDP_ALGO_GREEDY: algo = fdplace::SingleAlgorithm::kGreedy; break;
      default: require(false, "unknown algorithm");
    }
    Stopwatch clock;
    auto solution = fdplace::solve_single(model->model, rho, algo);
    std::string name(fdplace::to_string(algo));
    fdp_result* r = make_result(model, name.c_str(), &solution.aggregate);
    r->body["rho"] = rho;
    put_objective(r, solution.aggregate);
    r->body["witness"] = {{"leaves", ids_json(model->model, solution.placement)}};
    r->wall_ms = clock.elapsed_ms();
    *out = r;
  });
}

fdp_status fdp_solve_multi(const fdp_model* model, const int64_t* sizes, size_t count,
                           int64_t skew, const char* phi_cache, fdp_result** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    std::vector<std::int64_t> blocks = sizes_of(sizes, count);
    Stopwatch clock;
    fdplace::MultiOptions options;
    if (skew > 0) options.skew = skew;

    std::optional<fdplace::PhiTable> cached;
    bool write_cache = false;
    if (phi_cache) {
      auto target = fdplace::target_signature(blocks, model->model.total_capacity());
      std::int64_t delta = target.delta;
      if (options.skew && *options.skew >= delta) delta = std::min(*options.skew, target.rho);
      const auto m = static_cast<std::int64_t>(blocks.size());
      if (std::filesystem::exists(phi_cache)) {
        auto table = fdplace::PhiTable::parse(read_file(phi_cache));
        if (table.m() == m && table.rho() == target.rho && table.delta() == delta) {
          cached.emplace(std::move(table));
        }
      }
      if (!cached && (!options.skew || *options.skew >= target.delta)) {
        cached.emplace(fdplace::build_phi(m, target.rho, delta));
        write_cache = true;
      }
      if (cached) options.phi = &*cached;
    }
    auto solution = fdplace::solve_multi(model->model, blocks, options);
    if (write_cache) {
      std::ofstream file(phi_cache, std::ios::binary | std::ios::trunc);
      file << cached->dump();
      if (!file) {
        throw fdplace::Error(fdplace::ErrorCode::kIo,
                             std::string("cannot write phi cache '") + phi_cache + "'");
      }
    }
    fdp_result* r = make_result(model, "dp", &solution.aggregate);
    r->body["sizes"] = blocks;
    r->body["skew"] = solution.delta;
    r->body["signature"] = solution.signature.entries();
    put_objective(r, solution.aggregate);
    r->body["witness"] = {{"blocks", blocks_json(model->model, solution.placement)}};
    r->wall_ms = clock.elapsed_ms();
    *out = r;
  });
}

fdp_status fdp_oracle_single(const fdp_model* model, int64_t rho, uint64_t guard,
                             unsigned threads, fdp_result** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    Stopwatch clock;
    auto res = fdplace::oracle_single(model->model, rho,
                                      guard ? guard : fdplace::kDefaultOracleGuard, threads);
    fdp_result* r = make_result(model, "oracle", &res.aggregate);
    r->body["rho"] = rho;
    put_objective(r, res.aggregate);
    r->body["witness"] = {{"leaves", ids_json(model->model, res.optimal.front())}};
    r->body["optimal_count"] = res.optimal.size();
    ordered_json all = ordered_json::array();
    for (const auto& p : res.optimal) all.push_back(ids_json(model->model, p));
    r->body["optimal"] = std::move(all);
    r->body["evaluated"] = res.evaluated;
    r->wall_ms = clock.elapsed_ms();
    *out = r;
  });
}

fdp_status fdp_oracle_multi(const fdp_model* model, const int64_t* sizes, size_t count,
                            uint64_t guard, unsigned threads, fdp_result** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    std::vector<std::int64_t> blocks = sizes_of(sizes, count);
    Stopwatch clock;
    auto res = fdplace::oracle_multi(model->model, blocks,
                                     guard ? guard : fdplace::kDefaultOracleGuard, threads);
    fdp_result* r = make_result(model, "oracle", &res.aggregate);
    r->body["sizes"] = blocks;
    put_objective(r, res.aggregate);
    r->body["witness"] = {{"blocks", blocks_json(model->model, res.witness)}};
    r->body["evaluated"] = res.evaluated;
    r->wall_ms = clock.elapsed_ms();
    *out = r;
  });
}

fdp_status fdp_eval(const fdp_model* model, const char* placement_json, size_t length,
                    int64_t rho, fdp_result** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    const auto& fm = model->model;
    nlohmann::json doc = parse_placement_doc(placement_json, length);
    require(doc.is_object(), "placement JSON must be an object");
    Stopwatch clock;
    if (doc.contains("blocks")) {
      require(doc["blocks"].is_array(), "\"blocks\" must be an array of id lists");
      fdplace::MultiPlacement mp;
      for (const auto& b : doc["blocks"]) {
        mp.blocks.push_back(fdplace::placement_from_ids(fm, string_list(b, "block must list leaf ids")));
      }
      require(!mp.blocks.empty(), "no blocks given");
      try {
        fdplace::validate_capacities(fm, mp);
      } catch (const fdplace::Error& e) {
        throw fdplace::Error(fdplace::ErrorCode::kInvalidArgument, e.what());
      }
      auto g = fdplace::multi_aggregate(fm, mp);
      fdp_result* r = make_result(model, "eval", &g);
      r->body["girth"] = fdplace::multi_girth(mp);
      put_objective(r, g);
      r->body["witness"] = {{"blocks", blocks_json(fm, mp)}};
      r->wall_ms = clock.elapsed_ms();
      *out = r;
      return;
    }
    require(doc.contains("leaves"), "placement needs \"leaves\" or \"blocks\"");
    auto p = fdplace::placement_from_ids(fm, string_list(doc["leaves"], "\"leaves\" must list leaf ids"));
    const std::int64_t girth = rho > 0 ? rho : static_cast<std::int64_t>(p.leaves.size());
    auto agg = fdplace::failure_aggregate(fm, p, girth);
    fdp_result* r = make_result(model, "eval", &agg);
    r->body["rho"] = girth;
    put_objective(r, agg);
    r->body["witness"] = {{"leaves", ids_json(fm, p)}};
    r->wall_ms = clock.elapsed_ms();
    *out = r;
  });
}

fdp_status fdp_check(const fdp_model* model, const char* placement_json, size_t length,
                     fdp_result** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    const auto& fm = model->model;
    nlohmann::json doc = parse_placement_doc(placement_json, length);
    require(doc.is_object() && doc.contains("leaves"), "placement needs \"leaves\"");
    auto p = fdplace::placement_from_ids(fm, string_list(doc["leaves"], "\"leaves\" must list leaf ids"));
    Stopwatch clock;
    auto violations = fdplace::check_balanced(fm, p);
    fdp_result* r = make_result(model, "check", nullptr);
    r->body["balanced"] = violations.empty();
    ordered_json list = ordered_json::array();
    for (const auto& v : violations) {
      ordered_json item;
      item["node"] = fm.node(v.node).id;
      item["unfilled_child"] = fm.node(v.unfilled_child).id;
      item["unfilled_count"] = v.unfilled_count;
      item["other_child"] = fm.node(v.other_child).id;
      item["other_count"] = v.other_count;
      list.push_back(std::move(item));
    }
    r->body["violations"] = std::move(list);
    r->body["witness"] = {{"leaves", ids_json(fm, p)}};
    r->wall_ms = clock.elapsed_ms();
    *out = r;
  });
}

fdp_status fdp_phi_dump(int64_t m, int64_t rho, int64_t delta, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = copy_string(fdplace::build_phi(m, rho, delta).dump());
    if (!*out) throw std::bad_alloc();
  });
}

fdp_status fdp_generate(uint64_t leaves, uint64_t seed, uint32_t max_fanout,
                        uint32_t max_capacity, uint32_t roots, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    fdplace::GeneratorOptions options;
    options.leaves = leaves;
    options.seed = seed;
    options.max_fanout = max_fanout;
    options.max_capacity = max_capacity;
    options.roots = roots;
    *out = copy_string(fdplace::render_model(fdplace::generate_model(options)));
    if (!*out) throw std::bad_alloc();
  });
}

size_t fdp_result_objective(const fdp_result* result, int64_t* out, size_t capacity) {
  if (!result) return 0;
  for (size_t i = 0; i < capacity && i < result->objective.size(); ++i) {
    out[i] = result->objective[i];
  }
  return result->objective.size();
}

double fdp_result_wall_ms(const fdp_result* result) { return result ? result->wall_ms : 0; }

char* fdp_result_json(const fdp_result* result, const char* command) {
  if (!result) return nullptr;
  ordered_json doc;
  if (command) doc["command"] = command;
  for (auto it = result->body.begin(); it != result->body.end(); ++it) doc[it.key()] = it.value();
  doc["wall_time_ms"] = result->wall_ms;
  return copy_string(doc.dump(2));
}

void fdp_result_free(fdp_result* result) { delete result; }

void fdp_string_free(char* text) { std::free(text); }

}  // extern "C"
