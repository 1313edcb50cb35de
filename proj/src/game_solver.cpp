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

#include "game_solver.hpp"

#include <algorithm>

#include "coupled_system.hpp"
#include "error.hpp"

namespace teamstruct {
namespace {

void CheckCross(const Matrix& r, int red_total, int blue_total,
                const std::string& what) {
  if (r.rows() != red_total || r.cols() != blue_total) {
    ThrowInvalid(what + ": expected " + std::to_string(red_total) + "x" +
                 std::to_string(blue_total) + ", got " +
                 std::to_string(r.rows()) + "x" + std::to_string(r.cols()));
  }
}

std::vector<Matrix> GainMatrices(const std::vector<EstimationGain>& gains) {
  std::vector<Matrix> out;
  for (const auto& g : gains) out.push_back(g.M);
  return out;
}

std::vector<int> Concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void CheckStrategy(const TeamStrategy& s, const std::vector<int>& dims,
                   Eigen::Index n, const std::string& what) {
  if (s.A.size() != dims.size() || s.B.size() != dims.size()) {
    ThrowInvalid(what + ": wrong number of agents");
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (s.A[i].rows() != dims[i] || s.A[i].cols() != n ||
        s.B[i].rows() != dims[i] || s.B[i].cols() != n) {
      ThrowInvalid(what + ": agent " + std::to_string(i) +
                   " coefficients have the wrong shape");
    }
  }
}

// E[v^T R u] for affine rules on both teams.
double CrossValue(const GameProblem& problem, const Matrix& r,
                  const std::vector<EstimationGain>& blue_gains,
                  const std::vector<EstimationGain>& red_gains,
                  const GameStrategy& strategy) {
  const auto& obj = problem.objective;
  const Eigen::Index n = problem.prior.dim();
  const Vector& xbar = problem.prior.mean;
  const Vector u_mean = StackBlocks(strategy.blue.A, n) * xbar;
  const Vector v_mean = StackBlocks(strategy.red.A, n) * xbar;
  // Cross-team noises are independent, so E[(B_i e_i)(D_j f_j)^T] is
  // (B_i M_i) X (D_j N_j)^T.
  const Matrix blue_filtered = internal::FilteredGains(
      StackBlocks(strategy.blue.B, n), obj.blue_dims, blue_gains);
  const Matrix red_filtered = internal::FilteredGains(
      StackBlocks(strategy.red.B, n), obj.red_dims, red_gains);
  return v_mean.dot(r * u_mean) +
         (r * blue_filtered * problem.prior.covariance *
          red_filtered.transpose())
             .trace();
}

}  // namespace

void ValidateGameProblem(const GameProblem& problem) {
  ValidatePrior(problem.prior);
  const Eigen::Index n = problem.prior.dim();
  const auto& obj = problem.objective;
  ValidateStructure(problem.blue, n, "agents");
  ValidateStructure(problem.red, n, "game.red_agents", /*allow_empty=*/true,
                    "G", "T");
  ValidateQuadraticBlocks(obj.Q1, obj.P1, obj.blue_dims, n, "game.Q1",
                          "game.P1", "game.blue_dims");
  if (!obj.red_dims.empty() || obj.Q2.size() != 0 || obj.P2.size() != 0) {
    ValidateQuadraticBlocks(obj.Q2, obj.P2, obj.red_dims, n, "game.Q2",
                            "game.P2", "game.red_dims");
  }
  const int blue_total = TotalDim(obj.blue_dims);
  const int red_total = TotalDim(obj.red_dims);
  CheckCross(obj.R1, red_total, blue_total, "game.R1");
  CheckCross(obj.R2, red_total, blue_total, "game.R2");
  if (obj.blue_dims.size() != problem.blue.size()) {
    ThrowInvalid("game.blue_dims: " + std::to_string(obj.blue_dims.size()) +
                 " agents, but " + std::to_string(problem.blue.size()) +
                 " blue channels");
  }
  if (obj.red_dims.size() != problem.red.size()) {
    ThrowInvalid("game.red_dims: " + std::to_string(obj.red_dims.size()) +
                 " agents, but " + std::to_string(problem.red.size()) +
                 " red channels");
  }
}

GameStrategy SolveGame(const GameProblem& problem,
                       GameDiagnostics* diagnostics) {
  ValidateGameProblem(problem);
  const auto& obj = problem.objective;
  const Eigen::Index n = problem.prior.dim();
  const int blue_total = TotalDim(obj.blue_dims);
  const int red_total = TotalDim(obj.red_dims);
  const int total = blue_total + red_total;

  Matrix coupling(total, total);
  coupling << obj.P1, obj.R1.transpose(), obj.R2, obj.P2;
  Matrix rhs(total, n);
  rhs << -obj.Q1, -obj.Q2;
  const std::vector<int> dims = Concat(obj.blue_dims, obj.red_dims);

  auto gains = GainMatrices(ChannelGains(problem.prior, problem.blue));
  for (auto& m : GainMatrices(ChannelGains(problem.prior, problem.red))) {
    gains.push_back(std::move(m));
  }

  const CheckedSolve mean =
      SolveChecked(coupling, rhs, "game mean coefficients");
  const CheckedSolve estimate = SolveEstimateSystem(
      coupling, dims, gains, rhs, "game estimate coefficients");

  GameStrategy strategy;
  strategy.blue.A =
      SplitBlocks(mean.solution.topRows(blue_total), obj.blue_dims);
  strategy.red.A =
      SplitBlocks(mean.solution.bottomRows(red_total), obj.red_dims);
  strategy.blue.B =
      SplitBlocks(estimate.solution.topRows(blue_total), obj.blue_dims);
  strategy.red.B =
      SplitBlocks(estimate.solution.bottomRows(red_total), obj.red_dims);

  if (diagnostics != nullptr) {
    diagnostics->condition_estimate =
        std::max(mean.condition_estimate, estimate.condition_estimate);
    diagnostics->mean_residual =
        RelativeResidual(coupling * mean.solution, rhs);
    diagnostics->estimate_residual = RelativeResidual(
        ApplyEstimateOperator(coupling, dims, gains, estimate.solution), rhs);
  }
  return strategy;
}

GameValues EvaluateGame(const GameProblem& problem,
                        const GameStrategy& strategy) {
  ValidateGameProblem(problem);
  const auto& obj = problem.objective;
  const Eigen::Index n = problem.prior.dim();
  CheckStrategy(strategy.blue, obj.blue_dims, n, "blue strategy");
  CheckStrategy(strategy.red, obj.red_dims, n, "red strategy");
  const auto blue_gains = ChannelGains(problem.prior, problem.blue);
  const auto red_gains = ChannelGains(problem.prior, problem.red);

  GameValues values;
  values.blue = internal::QuadraticValue(
                    problem.prior, obj.Q1, obj.P1, obj.blue_dims, problem.blue,
                    blue_gains, StackBlocks(strategy.blue.A, n),
                    StackBlocks(strategy.blue.B, n)) +
                CrossValue(problem, obj.R1, blue_gains, red_gains, strategy);
  values.red = internal::QuadraticValue(problem.prior, obj.Q2, obj.P2,
                                        obj.red_dims, problem.red, red_gains,
                                        StackBlocks(strategy.red.A, n),
                                        StackBlocks(strategy.red.B, n)) +
               CrossValue(problem, obj.R2, blue_gains, red_gains, strategy);
  return values;
}

GameValues NashValues(const GameProblem& problem) {
  return EvaluateGame(problem, SolveGame(problem));
}

TeamStrategy BestResponseBlue(const GameProblem& problem,
                              const TeamStrategy& red) {
  ValidateGameProblem(problem);
  const auto& obj = problem.objective;
  const Eigen::Index n = problem.prior.dim();
  CheckStrategy(red, obj.red_dims, n, "red strategy");
  const auto red_gains = ChannelGains(problem.prior, problem.red);
  const Matrix c = StackBlocks(red.A, n);
  const Matrix d_filtered =
      internal::FilteredGains(StackBlocks(red.B, n), obj.red_dims, red_gains);

  const Matrix mean_rhs = -obj.Q1 - obj.R1.transpose() * c;
  const Matrix estimate_rhs = -obj.Q1 - obj.R1.transpose() * d_filtered;
  TeamStrategy out;
  out.A =
      SplitBlocks(SolveChecked(obj.P1, mean_rhs, "blue best response").solution,
                  obj.blue_dims);
  out.B =
      SplitBlocks(SolveEstimateSystem(
                      obj.P1, obj.blue_dims,
                      GainMatrices(ChannelGains(problem.prior, problem.blue)),
                      estimate_rhs, "blue best response")
                      .solution,
                  obj.blue_dims);
  return out;
}

TeamStrategy BestResponseRed(const GameProblem& problem,
                             const TeamStrategy& blue) {
  ValidateGameProblem(problem);
  const auto& obj = problem.objective;
  const Eigen::Index n = problem.prior.dim();
  CheckStrategy(blue, obj.blue_dims, n, "blue strategy");
  const auto blue_gains = ChannelGains(problem.prior, problem.blue);
  const Matrix a = StackBlocks(blue.A, n);
  const Matrix b_filtered = internal::FilteredGains(StackBlocks(blue.B, n),
                                                    obj.blue_dims, blue_gains);

  const Matrix mean_rhs = -obj.Q2 - obj.R2 * a;
  const Matrix estimate_rhs = -obj.Q2 - obj.R2 * b_filtered;
  TeamStrategy out;
  out.A =
      SplitBlocks(SolveChecked(obj.P2, mean_rhs, "red best response").solution,
                  obj.red_dims);
  out.B =
      SplitBlocks(SolveEstimateSystem(
                      obj.P2, obj.red_dims,
                      GainMatrices(ChannelGains(problem.prior, problem.red)),
                      estimate_rhs, "red best response")
                      .solution,
                  obj.red_dims);
  return out;
}

double NashFixedPointResidual(const GameProblem& problem,
                              const GameStrategy& strategy) {
  const Eigen::Index n = problem.prior.dim();
  const TeamStrategy blue = BestResponseBlue(problem, strategy.red);
  const TeamStrategy red = BestResponseRed(problem, strategy.blue);
  auto diff = [n](const std::vector<Matrix>& got,
                  const std::vector<Matrix>& want) {
    if (want.empty()) return 0.0;
    return RelativeResidual(StackBlocks(got, n), StackBlocks(want, n));
  };
  return std::max({diff(blue.A, strategy.blue.A), diff(blue.B, strategy.blue.B),
                   diff(red.A, strategy.red.A), diff(red.B, strategy.red.B)});
}

GameObjective ZeroSumGame(const Matrix& Q, const Matrix& Pu, const Matrix& Pv,
                          const Matrix& Rcross, std::vector<int> blue_dims,
                          std::vector<int> red_dims) {
  const int blue_total = TotalDim(blue_dims);
  const int red_total = TotalDim(red_dims);
  ValidateQuadraticBlocks(Q, Pu, blue_dims, Q.cols(), "zero_sum.Q",
                          "zero_sum.Pu", "zero_sum.blue_dims");
  RequireSymmetricPd(Pv, "zero_sum.Pv");
  if (Pv.rows() != red_total) ThrowInvalid("zero_sum.Pv: wrong size");
  CheckCross(Rcross, red_total, blue_total, "zero_sum.Rcross");
  GameObjective obj;
  obj.Q1 = Q;
  obj.P1 = Pu;
  obj.R1 = Rcross;
  obj.Q2 = Matrix::Zero(red_total, Q.cols());
  obj.P2 = Pv;
  obj.R2 = -Rcross;
  obj.blue_dims = std::move(blue_dims);
  obj.red_dims = std::move(red_dims);
  return obj;
}

GameValues ZeroSumValues(const GameProblem& problem,
                         const GameStrategy& strategy) {
  const auto& obj = problem.objective;
  if (MaxAbs(obj.Q2) != 0.0 || MaxAbs(obj.R1 + obj.R2) != 0.0) {
    ThrowInvalid(
        "zero-sum values: objective is not in zero-sum form "
        "(need Q2 = 0 and R2 = -R1)");
  }
  // Red's kernel is the v-dependent part of -J, so
  // J = J1 - (1/2) E[v^T Pv v] and J2 omits -u^T Q x - 1/2 u^T Pu u.
  GameProblem red_only = problem;
  red_only.objective.R2 = Matrix::Zero(obj.R2.rows(), obj.R2.cols());
  const GameValues split = EvaluateGame(red_only, strategy);
  GameValues out;
  out.blue = split.blue - split.red;
  out.red = -out.blue;
  return out;
}

}  // namespace teamstruct
