// Copyright 2026 The teamstruct Authors.
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

// C interface to the teamstruct solvers.
//
// Every call that can fail returns a ts_status; a description of the most
// recent failure on the calling thread is available from ts_last_error().
// Strings returned through a ts_report stay valid until the report is freed.

#ifndef TEAMSTRUCT_TEAMSTRUCT_H_
#define TEAMSTRUCT_TEAMSTRUCT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TEAMSTRUCT_BUILDING_LIBRARY)
#define TS_API __declspec(dllexport)
#else
#define TS_API __declspec(dllimport)
#endif
#else
#define TS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
  TS_OK = 0,
  TS_ERR_INVALID_INPUT = 2,
  TS_ERR_NUMERICAL = 3,
  TS_ERR_TOO_LARGE = 4,
  TS_ERR_INTERNAL = 5
} ts_status;

typedef struct ts_problem ts_problem;
typedef struct ts_report ts_report;

typedef enum ts_design_kind {
  TS_DESIGN_TEAM = 0,
  TS_DESIGN_BLUE_IN_GAME = 1,
  // Use the kind from the problem file, else team.
  TS_DESIGN_FROM_FILE = 2
} ts_design_kind;

typedef enum ts_design_method {
  TS_METHOD_GREEDY = 0,
  TS_METHOD_EXHAUSTIVE = 1,
  TS_METHOD_BOTH = 2,
  TS_METHOD_FROM_FILE = 3
} ts_design_method;

typedef struct ts_design_options {
  // Negative means "take k from the problem file".
  int k;
  ts_design_kind kind;
  ts_design_method method;
  // Maximum concurrent oracle evaluations; 0 selects the core count.
  int parallel;
} ts_design_options;

typedef struct ts_benchmark_config {
  int n;
  int agents;
  int decisions;
  int measurements;
  int candidates_per_agent;
  int k;
  int trials;
  uint64_t seed;
  int parallel;
} ts_benchmark_config;

// Parses a JSON problem file held in memory (length bytes, not necessarily
// NUL terminated).
TS_API ts_status ts_problem_parse(const char* text, size_t length,
                                  ts_problem** out);
// The two-agent fixture whose optimal cost is not supermodular.
TS_API ts_status ts_problem_counterexample(ts_problem** out);
TS_API void ts_problem_free(ts_problem* problem);
// Canonical JSON encoding; the caller frees the string with ts_string_free.
TS_API ts_status ts_problem_json(const ts_problem* problem, char** out);
TS_API size_t ts_problem_num_candidates(const ts_problem* problem);

// Optimal cost after adding the candidates with the given ids.
TS_API ts_status ts_evaluate_modification(const ts_problem* problem,
                                          ts_design_kind kind,
                                          const int64_t* ids, size_t count,
                                          double* value);

// The report functions below also produce a report on numerical failure
// (with the condition estimate in its diagnostics). On invalid input *out is
// set to NULL.
TS_API ts_status ts_solve_team(const ts_problem* problem, ts_report** out);
TS_API ts_status ts_solve_game(const ts_problem* problem, ts_report** out);

TS_API void ts_design_options_init(ts_design_options* options);
TS_API ts_status ts_design(const ts_problem* problem,
                           const ts_design_options* options, ts_report** out);

TS_API void ts_benchmark_config_init(ts_benchmark_config* config);
TS_API ts_status ts_benchmark(const ts_benchmark_config* config,
                              ts_report** out);

TS_API ts_status ts_counterexample(ts_report** out);

// Pretty-printed JSON document, newline terminated.
TS_API const char* ts_report_json(const ts_report* report);
// CSV rendering, or an empty string for commands without one.
TS_API const char* ts_report_csv(const ts_report* report);
TS_API void ts_report_free(ts_report* report);

TS_API void ts_string_free(char* str);

TS_API const char* ts_last_error(void);
TS_API const char* ts_status_string(ts_status status);
TS_API const char* ts_version(void);
TS_API int ts_default_parallelism(void);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // TEAMSTRUCT_TEAMSTRUCT_H_
