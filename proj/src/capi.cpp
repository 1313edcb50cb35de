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

#include <cstdlib>
#include <cstring>
#include <exception>
#include <json.hpp>
#include <memory>
#include <new>
#include <string>

#include "design.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "parallel.hpp"
#include "problem_io.hpp"
#include "report.hpp"
#include "teamstruct/teamstruct.h"

struct ts_problem {
  teamstruct::ProblemFile file;
  std::string digest;
};

struct ts_report {
  teamstruct::Report report;
  std::string json;
};

namespace {

using teamstruct::Error;
using teamstruct::ErrorCode;

thread_local std::string last_error;

ts_status StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return TS_ERR_INVALID_INPUT;
    case ErrorCode::kNoUniqueSolution:
      return TS_ERR_NUMERICAL;
    case ErrorCode::kTooLarge:
      return TS_ERR_TOO_LARGE;
  }
  return TS_ERR_INTERNAL;
}

ts_status Fail(ts_status status, const std::string& message) {
  last_error = message;
  return status;
}

ts_report* Wrap(teamstruct::Report report) {
  auto* out = new ts_report{std::move(report), {}};
  out->json = out->report.Json();
  return out;
}

// Runs a report builder, mapping exceptions to status codes. Numerical
// failures still yield an error report for the given command.
template <typename Build>
ts_status RunReport(const char* command, const std::string& digest,
                    ts_report** out, Build&& build) {
  if (out == nullptr) return Fail(TS_ERR_INVALID_INPUT, "out: null pointer");
  *out = nullptr;
  try {
    *out = Wrap(build());
    last_error.clear();
    return TS_OK;
  } catch (const Error& e) {
    const ts_status status = StatusFor(e.code());
    if (status == TS_ERR_NUMERICAL) {
      *out = Wrap(teamstruct::ErrorReport(command, digest, e));
    }
    return Fail(status, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(TS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(TS_ERR_INTERNAL, e.what());
  }
}

int Workers(int parallel) {
  return parallel > 0 ? parallel : teamstruct::DefaultParallelism();
}

}  // namespace

extern "C" {

ts_status ts_problem_parse(const char* text, size_t length, ts_problem** out) {
  if (out == nullptr) return Fail(TS_ERR_INVALID_INPUT, "out: null pointer");
  *out = nullptr;
  if (text == nullptr) return Fail(TS_ERR_INVALID_INPUT, "text: null pointer");
  try {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text, text + length);
    } catch (const nlohmann::json::parse_error& e) {
      return Fail(TS_ERR_INVALID_INPUT,
                  std::string("problem file: malformed JSON: ") + e.what());
    }
    auto problem = std::make_unique<ts_problem>();
    problem->file = teamstruct::ParseProblemFile(doc);
    problem->digest = teamstruct::ContentDigest(doc);
    *out = problem.release();
    return TS_OK;
  } catch (const Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::exception& e) {
    return Fail(TS_ERR_INTERNAL, e.what());
  }
}

ts_status ts_problem_counterexample(ts_problem** out) {
  if (out == nullptr) return Fail(TS_ERR_INVALID_INPUT, "out: null pointer");
  try {
    auto problem = std::make_unique<ts_problem>();
    problem->file = teamstruct::CounterexampleFile();
    problem->digest =
        teamstruct::ContentDigest(teamstruct::ProblemFileToJson(problem->file));
    *out = problem.release();
    return TS_OK;
  } catch (const std::exception& e) {
    *out = nullptr;
    return Fail(TS_ERR_INTERNAL, e.what());
  }
}

void ts_problem_free(ts_problem* problem) { delete problem; }

ts_status ts_problem_json(const ts_problem* problem, char** out) {
  if (problem == nullptr || out == nullptr) {
    return Fail(TS_ERR_INVALID_INPUT, "null argument");
  }
  const std::string text =
      teamstruct::ProblemFileToJson(problem->file).dump(2) + "\n";
  *out = static_cast<char*>(std::malloc(text.size() + 1));
  if (*out == nullptr) return Fail(TS_ERR_INTERNAL, "out of memory");
  std::memcpy(*out, text.c_str(), text.size() + 1);
  return TS_OK;
}

size_t ts_problem_num_candidates(const ts_problem* problem) {
  return problem == nullptr ? 0 : problem->file.candidates.links.size();
}

ts_status ts_evaluate_modification(const ts_problem* problem,
                                   ts_design_kind kind, const int64_t* ids,
                                   size_t count, double* value) {
  if (problem == nullptr || value == nullptr || (ids == nullptr && count > 0)) {
    return Fail(TS_ERR_INVALID_INPUT, "null argument");
  }
  try {
    teamstruct::DesignKind resolved = teamstruct::DesignKind::kTeam;
    if (kind == TS_DESIGN_BLUE_IN_GAME) {
      resolved = teamstruct::DesignKind::kBlueInGame;
    } else if (kind == TS_DESIGN_FROM_FILE) {
      resolved = problem->file.design.kind.value_or(resolved);
    }
    teamstruct::Modification mod;
    for (size_t i = 0; i < count; ++i) {
      if (!mod.selected.insert(ids[i]).second) {
        return Fail(TS_ERR_INVALID_INPUT,
                    "ids: duplicate id " + std::to_string(ids[i]));
      }
    }
    *value =
        teamstruct::EvaluateModification(problem->file.Design(resolved), mod);
    return TS_OK;
  } catch (const Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::exception& e) {
    return Fail(TS_ERR_INTERNAL, e.what());
  }
}

ts_status ts_solve_team(const ts_problem* problem, ts_report** out) {
  if (problem == nullptr) return Fail(TS_ERR_INVALID_INPUT, "problem: null");
  return RunReport("solve-team", problem->digest, out, [&] {
    return teamstruct::SolveTeamReport(problem->file, problem->digest);
  });
}

ts_status ts_solve_game(const ts_problem* problem, ts_report** out) {
  if (problem == nullptr) return Fail(TS_ERR_INVALID_INPUT, "problem: null");
  return RunReport("solve-game", problem->digest, out, [&] {
    return teamstruct::SolveGameReport(problem->file, problem->digest);
  });
}

void ts_design_options_init(ts_design_options* options) {
  if (options == nullptr) return;
  options->k = -1;
  options->kind = TS_DESIGN_FROM_FILE;
  options->method = TS_METHOD_FROM_FILE;
  options->parallel = 0;
}

ts_status ts_design(const ts_problem* problem, const ts_design_options* options,
                    ts_report** out) {
  if (problem == nullptr) return Fail(TS_ERR_INVALID_INPUT, "problem: null");
  ts_design_options opts;
  ts_design_options_init(&opts);
  if (options != nullptr) opts = *options;
  const auto& section = problem->file.design;

  teamstruct::DesignRequest request;
  switch (opts.kind) {
    case TS_DESIGN_TEAM:
      request.kind = teamstruct::DesignKind::kTeam;
      break;
    case TS_DESIGN_BLUE_IN_GAME:
      request.kind = teamstruct::DesignKind::kBlueInGame;
      break;
    case TS_DESIGN_FROM_FILE:
      request.kind = section.kind.value_or(teamstruct::DesignKind::kTeam);
      break;
    default:
      return Fail(TS_ERR_INVALID_INPUT, "kind: unknown value");
  }
  switch (opts.method) {
    case TS_METHOD_GREEDY:
      request.method = teamstruct::DesignMethod::kGreedy;
      break;
    case TS_METHOD_EXHAUSTIVE:
      request.method = teamstruct::DesignMethod::kExhaustive;
      break;
    case TS_METHOD_BOTH:
      request.method = teamstruct::DesignMethod::kBoth;
      break;
    case TS_METHOD_FROM_FILE:
      request.method =
          section.method.value_or(teamstruct::DesignMethod::kGreedy);
      break;
    default:
      return Fail(TS_ERR_INVALID_INPUT, "method: unknown value");
  }
  if (opts.k >= 0) {
    request.k = opts.k;
  } else if (section.k) {
    request.k = *section.k;
  } else {
    if (out != nullptr) *out = nullptr;
    return Fail(TS_ERR_INVALID_INPUT,
                "k: not given on the command line or in design.k");
  }
  request.parallelism = Workers(opts.parallel);
  return RunReport("design", problem->digest, out, [&] {
    return teamstruct::DesignReport(problem->file, request, problem->digest);
  });
}

void ts_benchmark_config_init(ts_benchmark_config* config) {
  if (config == nullptr) return;
  const teamstruct::BenchmarkConfig defaults;
  config->n = defaults.n;
  config->agents = defaults.agents;
  config->decisions = defaults.decisions;
  config->measurements = defaults.measurements;
  config->candidates_per_agent = defaults.candidates_per_agent;
  config->k = defaults.k;
  config->trials = defaults.trials;
  config->seed = defaults.seed;
  config->parallel = 0;
}

ts_status ts_benchmark(const ts_benchmark_config* config, ts_report** out) {
  if (config == nullptr) return Fail(TS_ERR_INVALID_INPUT, "config: null");
  teamstruct::BenchmarkConfig cfg;
  cfg.n = config->n;
  cfg.agents = config->agents;
  cfg.decisions = config->decisions;
  cfg.measurements = config->measurements;
  cfg.candidates_per_agent = config->candidates_per_agent;
  cfg.k = config->k;
  cfg.trials = config->trials;
  cfg.seed = config->seed;
  const teamstruct::DesignOptions options{Workers(config->parallel)};
  return RunReport("benchmark", "", out, [&] {
    teamstruct::ValidateBenchmarkConfig(cfg);
    return teamstruct::BenchmarkReport(cfg, options);
  });
}

ts_status ts_counterexample(ts_report** out) {
  return RunReport("counterexample", "", out,
                   [] { return teamstruct::CounterexampleReport(); });
}

const char* ts_report_json(const ts_report* report) {
  return report == nullptr ? "" : report->json.c_str();
}

const char* ts_report_csv(const ts_report* report) {
  return report == nullptr ? "" : report->report.csv.c_str();
}

void ts_report_free(ts_report* report) { delete report; }

void ts_string_free(char* str) { std::free(str); }

const char* ts_last_error(void) { return last_error.c_str(); }

const char* ts_status_string(ts_status status) {
  switch (status) {
    case TS_OK:
      return "ok";
    case TS_ERR_INVALID_INPUT:
      return "invalid input";
    case TS_ERR_NUMERICAL:
      return "numerical failure";
    case TS_ERR_TOO_LARGE:
      return "problem too large";
    case TS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* ts_version(void) { return teamstruct::kVersion; }

int ts_default_parallelism(void) { return teamstruct::DefaultParallelism(); }

}  // extern "C"
