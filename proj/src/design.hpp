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

// Information-structure design: choose k candidate links that minimize the
// team's optimal cost (or blue's Nash value in a two-team game).

#ifndef TEAMSTRUCT_DESIGN_HPP_
#define TEAMSTRUCT_DESIGN_HPP_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "game_solver.hpp"
#include "model.hpp"
#include "team_solver.hpp"

namespace teamstruct {

enum class DesignKind { kTeam, kBlueInGame };

// Values closer than this are ties; ties go to the smallest id (greedy) or
// the lexicographically smallest id sequence (exhaustive).
inline constexpr double kTieTolerance = 1e-9;

// Exhaustive search refuses to enumerate more subsets than this.
inline constexpr double kMaxExhaustiveSubsets = 1e7;

struct DesignProblem {
  std::variant<TeamProblem, GameProblem> base;
  CandidateSet candidates;

  DesignKind kind() const {
    return std::holds_alternative<TeamProblem>(base) ? DesignKind::kTeam
                                                     : DesignKind::kBlueInGame;
  }
};

struct DesignResult {
  std::vector<CandidateId> selected;
  // Greedy: value after each addition. Exhaustive: the single final value.
  std::vector<double> values;
  double final_value = 0.0;
  std::int64_t evaluations = 0;
  double wall_time = 0.0;
};

struct SupermodularityReport {
  bool violated = false;
  // Witness of the largest margin: f(A+s) - f(A) - f(B+s) + f(B).
  std::vector<CandidateId> witness_a;
  std::vector<CandidateId> witness_b;
  std::optional<CandidateId> witness_element;
  double margin = 0.0;
  // f(A') + f(B') - f(A' u B') - f(A' n B') with A' = A + s, B' = B.
  double four_set_margin = 0.0;
  std::int64_t checked = 0;
};

struct DesignOptions {
  // Maximum number of concurrent oracle evaluations.
  int parallelism = 1;
};

void ValidateDesignProblem(const DesignProblem& problem);

// J*(S) for team problems, J1*(S) for blue-in-game problems.
double EvaluateModification(const DesignProblem& problem,
                            const Modification& mod);

DesignResult GreedyDesign(const DesignProblem& problem, int k,
                          const DesignOptions& options = {});

DesignResult ExhaustiveDesign(const DesignProblem& problem, int k,
                              const DesignOptions& options = {});

SupermodularityReport CheckSupermodularity(const DesignProblem& problem,
                                           std::size_t max_ground_size = 12,
                                           const DesignOptions& options = {});

// Number of k-subsets of an n-set as a double (saturates instead of
// overflowing).
double BinomialCount(std::size_t n, std::size_t k);

}  // namespace teamstruct

#endif  // TEAMSTRUCT_DESIGN_HPP_
