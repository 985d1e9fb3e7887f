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

// Command-line front end. Links only the C interface.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdplace/fdplace.h"

namespace {

constexpr int kExitUsage = 1;

struct Args {
  std::string model_path;
  std::string placement_path;
  std::string out_path;
  std::string algo = "fast";
  std::string phi_cache;
  std::int64_t rho = 0;
  std::int64_t skew = 0;
  std::vector<std::int64_t> sizes;
  std::uint64_t guard = 0;
  unsigned threads = 1;
  std::uint64_t leaves = 0;
  std::uint64_t seed = 1;
  std::uint32_t max_fanout = 3;
  std::uint32_t max_capacity = 1;
  std::uint32_t roots = 1;
  std::int64_t phi_m = 0;
};

int fail(fdp_status status) {
  std::cerr << "fdplace: error: " << fdp_last_error() << '\n';
  return static_cast<int>(status);
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << text << '\n';
  if (!out) {
    std::cerr << "fdplace: error: cannot write '" << out_path << "'\n";
    return FDP_ERR_IO;
  }
  return 0;
}

int emit_owned(char* text, const std::string& out_path) {
  std::string copy(text);
  fdp_string_free(text);
  return emit(copy, out_path);
}

bool read_text(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

std::uint64_t resolve_guard(std::uint64_t flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("FDPLACE_ORACLE_GUARD")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    std::cerr << "fdplace: warning: ignoring malformed FDPLACE_ORACLE_GUARD\n";
  }
  return 0;
}

// Loads the model, runs `solve`, prints the report.
template <class Solve>
int run_with_model(const Args& args, const std::string& command, Solve&& solve) {
  fdp_model* model = nullptr;
  fdp_status st = fdp_model_load(args.model_path.c_str(), &model);
  if (st != FDP_OK) return fail(st);
  fdp_result* result = nullptr;
  st = solve(model, &result);
  fdp_model_free(model);
  if (st != FDP_OK) return fail(st);
  char* json = fdp_result_json(result, command.c_str());
  fdp_result_free(result);
  if (!json) {
    std::cerr << "fdplace: error: out of memory\n";
    return FDP_ERR_INTERNAL;
  }
  return emit_owned(json, args.out_path);
}

int with_placement(const Args& args, const std::string& command, bool check) {
  std::string text;
  if (!read_text(args.placement_path, text)) {
    std::cerr << "fdplace: error: cannot read placement file '" << args.placement_path << "'\n";
    return FDP_ERR_IO;
  }
  return run_with_model(args, command, [&](fdp_model* m, fdp_result** r) {
    return check ? fdp_check(m, text.data(), text.size(), r)
                 : fdp_eval(m, text.data(), text.size(), args.rho, r);
  });
}

}  // namespace

int main(int argc, char** argv) {
  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i) command += ' ';
    command += i == 0 ? std::string("fdplace") : std::string(argv[i]);
  }

  Args args;
  CLI::App app{"Replica placement under hierarchical failure models"};
  app.set_version_flag("--version", fdp_version());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", args.threads, "Worker threads for exhaustive search")
      ->check(CLI::PositiveNumber)
      ->default_val(1);

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", args.model_path, "Model JSON file")->required();
    sub->add_option("--out", args.out_path, "Write the report here instead of stdout");
  };

  auto* single = app.add_subcommand("solve-single", "Optimal placement of one block");
  add_model(single);
  single->add_option("--rho", args.rho, "Replication factor")->required();
  single->add_option("--algo", args.algo, "fast, basic or greedy")
      ->check(CLI::IsMember({"fast", "basic", "greedy"}));

  auto* multi = app.add_subcommand("solve-multi", "Optimal placement of several blocks");
  add_model(multi);
  multi->add_option("--sizes", args.sizes, "Block sizes, comma separated")
      ->required()
      ->delimiter(',');
  multi->add_option("--skew", args.skew, "Skew bound, at least the natural skew");
  multi->add_option("--phi-cache", args.phi_cache, "Merge table cache file");

  auto* eval = app.add_subcommand("eval", "Aggregate of a given placement");
  add_model(eval);
  eval->add_option("--placement", args.placement_path, "Placement JSON file")->required();
  eval->add_option("--rho", args.rho, "Girth for a single placement (default: its size)");

  auto* check = app.add_subcommand("check", "Balance check of a placement");
  add_model(check);
  check->add_option("--placement", args.placement_path, "Placement JSON file")->required();

  auto* osingle = app.add_subcommand("oracle-single", "Exhaustive single-block search");
  add_model(osingle);
  osingle->add_option("--rho", args.rho, "Replication factor")->required();
  osingle->add_option("--guard", args.guard, "Maximum candidates to evaluate");

  auto* omulti = app.add_subcommand("oracle-multi", "Exhaustive multi-block search");
  add_model(omulti);
  omulti->add_option("--sizes", args.sizes, "Block sizes, comma separated")
      ->required()
      ->delimiter(',');
  omulti->add_option("--guard", args.guard, "Maximum candidates to evaluate");

  auto* gen = app.add_subcommand("gen", "Random model");
  gen->add_option("--leaves", args.leaves, "Number of leaves")->required();
  gen->add_option("--seed", args.seed, "Random seed")->required();
  gen->add_option("--max-fanout", args.max_fanout, "Maximum children per node")->required();
  gen->add_option("--max-capacity", args.max_capacity, "Leaf capacities drawn from [1, C]");
  gen->add_option("--roots", args.roots, "Number of trees");
  gen->add_option("--out", args.out_path, "Write the model here instead of stdout");

  auto* phi = app.add_subcommand("phi", "Dump the merge table");
  phi->add_option("--m", args.phi_m, "Number of blocks")->required();
  phi->add_option("--rho", args.rho, "Girth")->required();
  phi->add_option("--skew", args.skew, "Skew bound")->required();
  phi->add_option("--out", args.out_path, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*single) {
    fdp_algorithm algo = args.algo == "basic"    ? FDP_ALGO_BASIC
                         : args.algo == "greedy" ? FDP_ALGO_GREEDY
                                                 : FDP_ALGO_FAST;
    return run_with_model(args, command, [&](fdp_model* m, fdp_result** r) {
      return fdp_solve_single(m, args.rho, algo, r);
    });
  }
  if (*multi) {
    if (multi->count("--skew") && args.skew <= 0) {
      std::cerr << "fdplace: error: --skew must be positive\n";
      return FDP_ERR_SKEW_BELOW_NATURAL;
    }
    return run_with_model(args, command, [&](fdp_model* m, fdp_result** r) {
      return fdp_solve_multi(m, args.sizes.data(), args.sizes.size(), args.skew,
                             args.phi_cache.empty() ? nullptr : args.phi_cache.c_str(), r);
    });
  }
  if (*eval) return with_placement(args, command, /*check=*/false);
  if (*check) return with_placement(args, command, /*check=*/true);
  if (*osingle) {
    const std::uint64_t guard = resolve_guard(args.guard);
    return run_with_model(args, command, [&](fdp_model* m, fdp_result** r) {
      return fdp_oracle_single(m, args.rho, guard, args.threads, r);
    });
  }
  if (*omulti) {
    const std::uint64_t guard = resolve_guard(args.guard);
    return run_with_model(args, command, [&](fdp_model* m, fdp_result** r) {
      return fdp_oracle_multi(m, args.sizes.data(), args.sizes.size(), guard, args.threads, r);
    });
  }
  if (*gen) {
    char* json = nullptr;
    fdp_status st = fdp_generate(args.leaves, args.seed, args.max_fanout, args.max_capacity,
                                 args.roots, &json);
    if (st != FDP_OK) return fail(st);
    return emit_owned(json, args.out_path);
  }
  if (*phi) {
    char* json = nullptr;
    fdp_status st = fdp_phi_dump(args.phi_m, args.rho, args.skew, &json);
    if (st != FDP_OK) return fail(st);
    return emit_owned(json, args.out_path);
  }
  return kExitUsage;
}
