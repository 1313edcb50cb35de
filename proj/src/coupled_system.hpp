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

// Vectorized stationarity systems shared by the team and game solvers.
//
// Both solvers reduce to finding stacked coefficients Y = [Y_1; ...; Y_N]
// (block i is d_i x n) with
//
//   sum_j W_ij Y_j Mt_ij = F_i,   Mt_ij = M_j for j != i,  Mt_ii = I,
//
// where W is a block matrix partitioned by `dims` and M_j = K_j H_j is agent
// j's estimation gain. With vec(W Y M) = (M^T (x) W) vec(Y) this is one dense
// system of size n * sum(d_i). The team problem uses W = P; the two-team
// game stacks blue and red agents with W = [P1, R1^T; R2, P2].

#ifndef TEAMSTRUCT_COUPLED_SYSTEM_HPP_
#define TEAMSTRUCT_COUPLED_SYSTEM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace teamstruct {

struct CheckedSolve {
  Matrix solution;
  double condition_estimate = 1.0;
};

// LU solve that throws kNoUniqueSolution when the L1 condition estimate
// exceeds kMaxConditionEstimate.
CheckedSolve SolveChecked(const Matrix& system, const Matrix& rhs,
                          const std::string& what);

// Per-agent blocks of a stacked (sum d) x n matrix, vectorized column-major
// within each block and concatenated by agent.
Vector VectorizeBlocks(const Matrix& stacked, const std::vector<int>& dims);
Matrix UnvectorizeBlocks(const Vector& vec, const std::vector<int>& dims,
                         Eigen::Index state_dim);

Matrix AssembleEstimateSystem(const Matrix& coupling,
                              const std::vector<int>& dims,
                              const std::vector<Matrix>& gains);

// Left-hand side of the stationarity system evaluated blockwise.
Matrix ApplyEstimateOperator(const Matrix& coupling,
                             const std::vector<int>& dims,
                             const std::vector<Matrix>& gains,
                             const Matrix& coefficients);

// ||lhs - rhs||_F / ||rhs||_F, or the absolute residual when rhs is zero.
double RelativeResidual(const Matrix& lhs, const Matrix& rhs);

// Full solve of the estimate-coefficient system.
CheckedSolve SolveEstimateSystem(const Matrix& coupling,
                                 const std::vector<int>& dims,
                                 const std::vector<Matrix>& gains,
                                 const Matrix& rhs, const std::string& what);

// Factors the estimate system once and answers "what if agent a's gain were
// G" queries through Woodbury updates. Adding one observation row changes
// M_a by a low-rank matrix, which changes the vectorized system by a matrix
// of rank rank(dM) * d_a. Committed changes are chained on top of the same
// factorization until the accumulated rank gets large, at which point the
// system is refactored. Every low-rank answer is verified against the
// blockwise residual; failures return std::nullopt so the caller can fall
// back to a full solve.
//
// Queries are const and safe to run concurrently.
class EstimateSystemSolver {
 public:
  EstimateSystemSolver(Matrix coupling, std::vector<int> dims,
                       std::vector<Matrix> gains, Matrix rhs);

  const Matrix& solution() const { return solution_; }
  const std::vector<Matrix>& gains() const { return gains_; }
  double condition_estimate() const { return condition_estimate_; }

  std::optional<Matrix> SolveWithGain(std::size_t agent,
                                      const Matrix& gain) const;

  void CommitGain(std::size_t agent, const Matrix& gain);

 private:
  struct Update {
    Matrix U;  // N x r
    Matrix V;  // N x r
    Matrix Z;  // factorization^{-1} U
  };

  void Refactor();
  std::optional<Update> MakeUpdate(std::size_t agent, const Matrix& gain) const;
  std::optional<Matrix> SolveWith(const std::vector<const Update*>& updates,
                                  const std::vector<Matrix>& gains) const;

  Matrix coupling_;
  std::vector<int> dims_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index state_dim_ = 0;
  Matrix rhs_;
  Vector rhs_vec_;
  std::vector<Matrix> gains_;

  Eigen::PartialPivLU<Matrix> lu_;
  Vector base_solution_;
  double condition_estimate_ = 1.0;
  std::vector<Update> committed_;
  Eigen::Index committed_rank_ = 0;
  Matrix solution_;
};

}  // namespace teamstruct

#endif  // TEAMSTRUCT_COUPLED_SYSTEM_HPP_
