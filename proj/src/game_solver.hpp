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

// Affine Nash equilibrium of the static two-team LQ game.
//
// Blue agents minimize u^T Q1 x + 1/2 u^T P1 u + v^T R1 u, red agents
// minimize v^T Q2 x + 1/2 v^T P2 v + v^T R2 u. R1 and R2 are indexed
// (red block, blue block).

#ifndef TEAMSTRUCT_GAME_SOLVER_HPP_
#define TEAMSTRUCT_GAME_SOLVER_HPP_

#include <vector>

#include "model.hpp"
#include "team_solver.hpp"

namespace teamstruct {

struct GameObjective {
  Matrix Q1;
  Matrix P1;
  Matrix R1;
  Matrix Q2;
  Matrix P2;
  Matrix R2;
  std::vector<int> blue_dims;
  std::vector<int> red_dims;
};

struct GameProblem {
  GaussianPrior prior;
  InformationStructure blue;
  InformationStructure red;
  GameObjective objective;
};

// Red coefficients reuse TeamStrategy: A holds C_j, B holds D_j.
struct GameStrategy {
  TeamStrategy blue;
  TeamStrategy red;
};

struct GameValues {
  double blue = 0.0;
  double red = 0.0;
};

struct GameDiagnostics {
  double mean_residual = 0.0;
  double estimate_residual = 0.0;
  double condition_estimate = 1.0;
};

void ValidateGameProblem(const GameProblem& problem);

GameStrategy SolveGame(const GameProblem& problem,
                       GameDiagnostics* diagnostics = nullptr);

GameValues EvaluateGame(const GameProblem& problem,
                        const GameStrategy& strategy);

GameValues NashValues(const GameProblem& problem);

// Blue's optimal reply to a fixed red strategy, and vice versa.
TeamStrategy BestResponseBlue(const GameProblem& problem,
                              const TeamStrategy& red);
TeamStrategy BestResponseRed(const GameProblem& problem,
                             const TeamStrategy& blue);

// Largest relative change in any coefficient block when each team is
// replaced by its best response to the other.
double NashFixedPointResidual(const GameProblem& problem,
                              const GameStrategy& strategy);

// Two-team encoding of the zero-sum kernel
//   J = u^T Q x + 1/2 u^T Pu u - 1/2 v^T Pv v + v^T Rcross u,
// minimized by blue and maximized by red.
GameObjective ZeroSumGame(const Matrix& Q, const Matrix& Pu, const Matrix& Pv,
                          const Matrix& Rcross, std::vector<int> blue_dims,
                          std::vector<int> red_dims);

// Value of the full zero-sum kernel for an objective built by ZeroSumGame:
// blue = J, red = -J.
GameValues ZeroSumValues(const GameProblem& problem,
                         const GameStrategy& strategy);

}  // namespace teamstruct

#endif  // TEAMSTRUCT_GAME_SOLVER_HPP_
