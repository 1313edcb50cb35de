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

#include "team_solver.hpp"

#include <cmath>
#include <random>

#include "coupled_system.hpp"
#include "error.hpp"

namespace teamstruct {

void ValidateTeamProblem(const TeamProblem& problem) {
  ValidatePrior(problem.prior);
  const Eigen::Index n = problem.prior.dim();
  ValidateStructure(problem.structure, n, "agents");
  ValidateQuadraticBlocks(problem.objective.Q, problem.objective.P,
                          problem.objective.dims, n, "objective.Q",
                          "objective.P", "objective.dims");
  if (problem.objective.dims.size() != problem.structure.size()) {
    ThrowInvalid(
        "objective.dims: " + std::to_string(problem.objective.dims.size()) +
        " agents, but " + std::to_string(problem.structure.size()) +
        " channels");
  }
}

std::vector<EstimationGain> ChannelGains(
    const GaussianPrior& prior, const InformationStructure& structure) {
  std::vector<EstimationGain> gains;
  gains.reserve(structure.size());
  for (const auto& channel : structure.channels) {
    gains.push_back(PosteriorGain(prior, channel));
  }
  return gains;
}

Matrix StackBlocks(const std::vector<Matrix>& blocks, Eigen::Index cols) {
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix stacked(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) ThrowInvalid("strategy: block has the wrong width");
    stacked.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return stacked;
}

std::vector<Matrix> SplitBlocks(const Matrix& stacked,
                                const std::vector<int>& dims) {
  std::vector<Matrix> blocks;
  Eigen::Index at = 0;
  for (int d : dims) {
    blocks.push_back(stacked.middleRows(at, d));
    at += d;
  }
  return blocks;
}

namespace {

std::vector<Matrix> GainMatrices(const std::vector<EstimationGain>& gains) {
  std::vector<Matrix> out;
  out.reserve(gains.size());
  for (const auto& g : gains) out.push_back(g.M);
  return out;
}

void CheckStrategyShape(const TeamProblem& problem,
                        const TeamStrategy& strategy) {
  const auto& dims = problem.objective.dims;
  if (strategy.A.size() != dims.size() || strategy.B.size() != dims.size()) {
    ThrowInvalid("strategy: wrong number of agents");
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (strategy.A[i].rows() != dims[i] || strategy.B[i].rows() != dims[i] ||
        strategy.A[i].cols() != problem.prior.dim() ||
        strategy.B[i].cols() != problem.prior.dim()) {
      ThrowInvalid("strategy: agent " + std::to_string(i) +
                   " coefficients have the wrong shape");
    }
  }
}

}  // namespace

TeamStrategy SolveTeam(const TeamProblem& problem,
                       TeamDiagnostics* diagnostics) {
  ValidateTeamProblem(problem);
  const auto& objective = problem.objective;
  const auto gains = ChannelGains(problem.prior, problem.structure);
  const Matrix rhs = -objective.Q;

  const CheckedSolve mean =
      SolveChecked(objective.P, rhs, "team mean coefficients");
  const CheckedSolve estimate =
      SolveEstimateSystem(objective.P, objective.dims, GainMatrices(gains), rhs,
                          "team estimate coefficients");

  TeamStrategy strategy;
  strategy.A = SplitBlocks(mean.solution, objective.dims);
  strategy.B = SplitBlocks(estimate.solution, objective.dims);
  if (diagnostics != nullptr) {
    *diagnostics = TeamStationarityResiduals(problem, strategy);
    diagnostics->condition_estimate =
        std::max(mean.condition_estimate, estimate.condition_estimate);
  }
  return strategy;
}

TeamDiagnostics TeamStationarityResiduals(const TeamProblem& problem,
                                          const TeamStrategy& strategy) {
  CheckStrategyShape(problem, strategy);
  const auto& objective = problem.objective;
  const Eigen::Index n = problem.prior.dim();
  const auto gains = ChannelGains(problem.prior, problem.structure);
  const Matrix a = StackBlocks(strategy.A, n);
  const Matrix b = StackBlocks(strategy.B, n);
  TeamDiagnostics out;
  out.mean_residual = RelativeResidual(objective.P * a, -objective.Q);
  out.estimate_residual =
      RelativeResidual(ApplyEstimateOperator(objective.P, objective.dims,
                                             GainMatrices(gains), b),
                       -objective.Q);
  return out;
}

namespace internal {

Matrix FilteredGains(const Matrix& estimate_coeffs,
                     const std::vector<int>& dims,
                     const std::vector<EstimationGain>& gains) {
  const auto offsets = BlockOffsets(dims);
  Matrix filtered(estimate_coeffs.rows(), estimate_coeffs.cols());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    filtered.middleRows(offsets[i], dims[i]) =
        estimate_coeffs.middleRows(offsets[i], dims[i]) * gains[i].M;
  }
  return filtered;
}

Matrix DecisionCovariance(const Matrix& estimate_coeffs,
                          const std::vector<int>& dims,
                          const std::vector<EstimationGain>& gains,
                          const InformationStructure& structure,
                          const Matrix& state_covariance) {
  // Cov(B_i e_i, B_j e_j) = B_i K_i (H_i X H_j^T + delta_ij R_i) K_j^T B_j^T
  // and K_i H_i = M_i, so off-diagonal blocks are (B_i M_i) X (B_j M_j)^T.
  const auto offsets = BlockOffsets(dims);
  const Matrix filtered = FilteredGains(estimate_coeffs, dims, gains);
  Matrix cov = filtered * state_covariance * filtered.transpose();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const Matrix bk =
        estimate_coeffs.middleRows(offsets[i], dims[i]) * gains[i].K;
    cov.block(offsets[i], offsets[i], dims[i], dims[i]) +=
        bk * structure.channels[i].R * bk.transpose();
  }
  return cov;
}

double QuadraticValue(const GaussianPrior& prior, const Matrix& Q,
                      const Matrix& P, const std::vector<int>& dims,
                      const InformationStructure& structure,
                      const std::vector<EstimationGain>& gains,
                      const Matrix& mean_coeffs,
                      const Matrix& estimate_coeffs) {
  const Vector& xbar = prior.mean;
  const Matrix& X = prior.covariance;
  const Vector mean_decision = mean_coeffs * xbar;
  // E[(x - xbar)(B_i e_i)^T] = X M_i^T B_i^T.
  const Matrix filtered = FilteredGains(estimate_coeffs, dims, gains);
  const double linear =
      mean_decision.dot(Q * xbar) + (Q * X * filtered.transpose()).trace();
  const Matrix cov =
      DecisionCovariance(estimate_coeffs, dims, gains, structure, X);
  const double quadratic =
      mean_decision.dot(P * mean_decision) + (P * cov).trace();
  return linear + 0.5 * quadratic;
}

}  // namespace internal

double TeamValue(const TeamProblem& problem, const TeamStrategy& strategy) {
  ValidateTeamProblem(problem);
  CheckStrategyShape(problem, strategy);
  const Eigen::Index n = problem.prior.dim();
  const auto gains = ChannelGains(problem.prior, problem.structure);
  return internal::QuadraticValue(
      problem.prior, problem.objective.Q, problem.objective.P,
      problem.objective.dims, problem.structure, gains,
      StackBlocks(strategy.A, n), StackBlocks(strategy.B, n));
}

double OptimalTeamValue(const TeamProblem& problem) {
  return TeamValue(problem, SolveTeam(problem));
}

MonteCarloEstimate MonteCarloValue(const TeamProblem& problem,
                                   const TeamStrategy& strategy,
                                   std::int64_t samples, std::uint64_t seed) {
  ValidateTeamProblem(problem);
  CheckStrategyShape(problem, strategy);
  if (samples < 1) ThrowInvalid("monte carlo: samples must be >= 1");

  const auto& prior = problem.prior;
  const auto& channels = problem.structure.channels;
  const auto& objective = problem.objective;
  const Eigen::Index n = prior.dim();
  const std::size_t agents = channels.size();
  const auto gains = ChannelGains(prior, problem.structure);
  const auto offsets = BlockOffsets(objective.dims);

  const Matrix state_root = PsdSquareRoot(prior.covariance);
  std::vector<Matrix> noise_roots;
  std::vector<Vector> mean_parts;
  for (std::size_t i = 0; i < agents; ++i) {
    noise_roots.push_back(PsdSquareRoot(channels[i].R));
    mean_parts.push_back(strategy.A[i] * prior.mean);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](Eigen::Index size) {
    Vector v(size);
    for (Eigen::Index k = 0; k < size; ++k) v(k) = normal(rng);
    return v;
  };

  Vector u(offsets.back());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Vector x = prior.mean + state_root * draw(n);
    for (std::size_t i = 0; i < agents; ++i) {
      const Channel& ch = channels[i];
      const Vector z = ch.H * x + noise_roots[i] * draw(ch.rows());
      const Vector innovation = gains[i].K * (z - ch.H * prior.mean);
      u.segment(offsets[i], objective.dims[i]) =
          mean_parts[i] + strategy.B[i] * innovation;
    }
    const double cost = u.dot(objective.Q * x) + 0.5 * u.dot(objective.P * u);
    // Welford update.
    const double delta = cost - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (cost - mean);
  }
  MonteCarloEstimate out;
  out.mean = mean;
  if (samples > 1) {
    const double variance = m2 / static_cast<double>(samples - 1);
    out.standard_error = std::sqrt(variance / static_cast<double>(samples));
  }
  return out;
}

}  // namespace teamstruct
