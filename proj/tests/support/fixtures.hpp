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

#ifndef FDPLACE_TESTS_SUPPORT_FIXTURES_HPP_
#define FDPLACE_TESTS_SUPPORT_FIXTURES_HPP_

#include <fstream>
#include <sstream>
#include <string>

#include "fdplace/failure_model.hpp"
#include "json.hpp"

namespace fdplace::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(FDPLACE_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline FailureModel fixture_model(const std::string& name) {
  return load_model(fixture_path(name));
}

inline nlohmann::json fixture_json(const std::string& name) {
  return nlohmann::json::parse(read_fixture(name));
}

}  // namespace fdplace::testing

#endif  // FDPLACE_TESTS_SUPPORT_FIXTURES_HPP_
