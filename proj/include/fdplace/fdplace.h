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

/* C interface to the fdplace library. Every function returns an fdp_status;
 * on failure fdp_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * fdp_string_free. */
#ifndef FDPLACE_FDPLACE_H_
#define FDPLACE_FDPLACE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FDP_API __declspec(dllexport)
#else
#define FDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fdp_status {
  FDP_OK = 0,
  FDP_ERR_INVALID_INPUT = 2,
  FDP_ERR_INFEASIBLE = 3,
  FDP_ERR_SKEW_BELOW_NATURAL = 4,
  FDP_ERR_GUARD = 5,
  FDP_ERR_IO = 6,
  FDP_ERR_INTERNAL = 70
} fdp_status;

typedef enum fdp_algorithm {
  FDP_ALGO_FAST = 0,
  FDP_ALGO_BASIC = 1,
  FDP_ALGO_GREEDY = 2
} fdp_algorithm;

typedef struct fdp_model fdp_model;
typedef struct fdp_result fdp_result;

FDP_API const char* fdp_version(void);
FDP_API const char* fdp_last_error(void);

FDP_API fdp_status fdp_model_parse(const char* text, size_t length, fdp_model** out);
FDP_API fdp_status fdp_model_load(const char* path, fdp_model** out);
FDP_API void fdp_model_free(fdp_model* model);
FDP_API size_t fdp_model_node_count(const fdp_model* model);
FDP_API size_t fdp_model_leaf_count(const fdp_model* model);

FDP_API fdp_status fdp_solve_single(const fdp_model* model, int64_t rho,
                                    fdp_algorithm algorithm, fdp_result** out);

/* skew <= 0 selects the natural skew. phi_cache may be NULL; otherwise the
 * table is read from that file when its parameters match and written there
 * after a rebuild. */
FDP_API fdp_status fdp_solve_multi(const fdp_model* model, const int64_t* sizes,
                                   size_t count, int64_t skew, const char* phi_cache,
                                   fdp_result** out);

/* guard == 0 selects the default guard. */
FDP_API fdp_status fdp_oracle_single(const fdp_model* model, int64_t rho,
                                     uint64_t guard, unsigned threads,
                                     fdp_result** out);
FDP_API fdp_status fdp_oracle_multi(const fdp_model* model, const int64_t* sizes,
                                    size_t count, uint64_t guard, unsigned threads,
                                    fdp_result** out);

/* placement_json holds {"leaves": [...]} or {"blocks": [[...], ...]}.
 * rho <= 0 selects the placement's own girth. */
FDP_API fdp_status fdp_eval(const fdp_model* model, const char* placement_json,
                            size_t length, int64_t rho, fdp_result** out);
/* placement_json holds {"leaves": [...]}. */
FDP_API fdp_status fdp_check(const fdp_model* model, const char* placement_json,
                             size_t length, fdp_result** out);

FDP_API fdp_status fdp_phi_dump(int64_t m, int64_t rho, int64_t delta, char** out);
FDP_API fdp_status fdp_generate(uint64_t leaves, uint64_t seed, uint32_t max_fanout,
                                uint32_t max_capacity, uint32_t roots, char** out);

/* Copies up to `capacity` entries and returns the full objective length. */
FDP_API size_t fdp_result_objective(const fdp_result* result, int64_t* out,
                                    size_t capacity);
FDP_API double fdp_result_wall_ms(const fdp_result* result);
/* Report document; command may be NULL. Returns NULL on allocation failure. */
FDP_API char* fdp_result_json(const fdp_result* result, const char* command);
FDP_API void fdp_result_free(fdp_result* result);
FDP_API void fdp_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* FDPLACE_FDPLACE_H_ */
