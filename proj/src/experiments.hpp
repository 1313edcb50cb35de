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

// Fixed and randomized problem instances and the greedy-vs-exhaustive
// benchmark harness.

#ifndef TEAMSTRUCT_EXPERIMENTS_HPP_
#define TEAMSTRUCT_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "design.hpp"
#include "team_solver.hpp"

namespace teamstruct {

struct BenchmarkConfig {
  int n = 10;                    // state dimension
  int agents = 4;                // N
  int decisions = 3;             // m per agent
  int measurements = 2;          // p per agent
  int candidates_per_agent = 2;  // q
  int k = 4;
  int trials = 200;
  std::uint64_t seed = 0;
};

void ValidateBenchmarkConfig(const BenchmarkConfig& config);

struct TrialRecord {
  int trial = 0;
  bool failed = false;
  std::string error;
  double greedy_value = 0.0;
  double optimal_value = 0.0;
  double gap = 0.0;
  // Set when |J_opt| is too small for a relative gap; `gap` is then absolute.
  bool absolute_gap = false;
  double greedy_seconds = 0.0;
  double exhaustive_seconds = 0.0;
  std::vector<CandidateId> greedy_selected;
  std::vector<CandidateId> optimal_selected;
};

struct ExperimentStats {
  int trials = 0;
  int failed = 0;
  double fraction_optimal = 0.0;
  double worst_gap = 0.0;
  double mean_gap = 0.0;
  double time_greedy = 0.0;
  double time_exhaustive = 0.0;
  double speedup = 0.0;
  std::vector<TrialRecord> records;
};

// Gaps at or below this count as greedy finding the optimum.
inline constexpr double kOptimalGapTolerance = 1e-9;

// Two agents with scalar decisions and one noiseless candidate each, for
// which J*(S) is not supermodular.
std::pair<TeamProblem, CandidateSet> CounterexampleInstance();

// Standard-normal instance: P and X are Gram matrices of Gaussian draws,
// R_i = Rt_i^T Rt_i, r_ij = g^2, zero prior mean. Candidates are ordered by
// agent with ids 0..N*q-1.
std::pair<TeamProblem, CandidateSet> RandomInstance(
    const BenchmarkConfig& config, std::uint64_t trial_seed);

ExperimentStats RunBenchmark(const BenchmarkConfig& config,
                             const DesignOptions& options = {});

}  // namespace teamstruct

#endif  // TEAMSTRUCT_EXPERIMENTS_HPP_
