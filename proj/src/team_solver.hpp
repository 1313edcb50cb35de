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

// Optimal decentralized affine strategies for the static LQ team problem and
// exact / sampled evaluation of their expected cost.

#ifndef TEAMSTRUCT_TEAM_SOLVER_HPP_
#define TEAMSTRUCT_TEAM_SOLVER_HPP_

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace teamstruct {

struct TeamProblem {
  GaussianPrior prior;
  InformationStructure structure;
  TeamObjective objective;
};

void ValidateTeamProblem(const TeamProblem& problem);

struct TeamDiagnostics {
  double mean_residual = 0.0;
  double estimate_residual = 0.0;
  double condition_estimate = 1.0;
};

// Solves P A = -Q and the coupled estimate system
//   P_ii B_i + sum_{j != i} P_ij B_j M_j = -Q_i.
// Throws kNoUniqueSolution when either system is numerically singular.
TeamStrategy SolveTeam(const TeamProblem& problem,
                       TeamDiagnostics* diagnostics = nullptr);

// Exact expected cost E[u^T Q x + 1/2 u^T P u] under an affine strategy.
double TeamValue(const TeamProblem& problem, const TeamStrategy& strategy);

double OptimalTeamValue(const TeamProblem& problem);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Sampled version of TeamValue; deterministic for a given seed.
MonteCarloEstimate MonteCarloValue(const TeamProblem& problem,
                                   const TeamStrategy& strategy,
                                   std::int64_t samples, std::uint64_t seed);

// Residuals of both stationarity equations for an arbitrary strategy,
// computed blockwise without the vectorized system.
TeamDiagnostics TeamStationarityResiduals(const TeamProblem& problem,
                                          const TeamStrategy& strategy);

std::vector<EstimationGain> ChannelGains(const GaussianPrior& prior,
                                         const InformationStructure& structure);

// Stacking helpers between per-agent blocks and (sum d) x n matrices.
Matrix StackBlocks(const std::vector<Matrix>& blocks, Eigen::Index cols);
std::vector<Matrix> SplitBlocks(const Matrix& stacked,
                                const std::vector<int>& dims);

namespace internal {

// Stacked rows B_i M_i: the part of u_i - A_i mean driven by x - mean.
Matrix FilteredGains(const Matrix& estimate_coeffs,
                     const std::vector<int>& dims,
                     const std::vector<EstimationGain>& gains);

// Covariance of the zero-mean parts of the stacked decisions.
Matrix DecisionCovariance(const Matrix& estimate_coeffs,
                          const std::vector<int>& dims,
                          const std::vector<EstimationGain>& gains,
                          const InformationStructure& structure,
                          const Matrix& state_covariance);

// E[u^T Q x + 1/2 u^T P u] with stacked coefficients and precomputed gains.
double QuadraticValue(const GaussianPrior& prior, const Matrix& Q,
                      const Matrix& P, const std::vector<int>& dims,
                      const InformationStructure& structure,
                      const std::vector<EstimationGain>& gains,
                      const Matrix& mean_coeffs, const Matrix& estimate_coeffs);

}  // namespace internal
}  // namespace teamstruct

#endif  // TEAMSTRUCT_TEAM_SOLVER_HPP_
