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

#include "coupled_system.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "model.hpp"

namespace teamstruct {
namespace {

constexpr double kLowRankTolerance = 1e-12;
constexpr double kUpdateResidualTolerance = 1e-10;

double ConditionFromLu(const Eigen::PartialPivLU<Matrix>& lu) {
  const double rcond = lu.rcond();
  return rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

// Cross approximation with complete pivoting: delta ~= left * right^T.
// Exact (up to rounding) for matrices of rank <= max_rank.
bool LowRankFactor(const Matrix& delta, Eigen::Index max_rank, Matrix* left,
                   Matrix* right) {
  const double scale = MaxAbs(delta);
  left->resize(delta.rows(), 0);
  right->resize(delta.cols(), 0);
  if (scale == 0.0) return true;
  Matrix residual = delta;
  for (Eigen::Index s = 0; s < max_rank; ++s) {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    const double pivot = residual.cwiseAbs().maxCoeff(&i, &j);
    if (pivot <= kLowRankTolerance * scale) break;
    const Vector col = residual.col(j);
    const Vector row = residual.row(i).transpose() / residual(i, j);
    residual.noalias() -= col * row.transpose();
    left->conservativeResize(Eigen::NoChange, s + 1);
    right->conservativeResize(Eigen::NoChange, s + 1);
    left->col(s) = col;
    right->col(s) = row;
  }
  return MaxAbs(residual) <= kLowRankTolerance * scale;
}

}  // namespace

CheckedSolve SolveChecked(const Matrix& system, const Matrix& rhs,
                          const std::string& what) {
  CheckedSolve out;
  if (system.rows() == 0) {
    out.solution = Matrix::Zero(0, rhs.cols());
    return out;
  }
  Eigen::PartialPivLU<Matrix> lu(system);
  out.condition_estimate = ConditionFromLu(lu);
  if (!(out.condition_estimate <= kMaxConditionEstimate)) {
    std::ostringstream msg;
    msg << what << ": linear system has no unique solution (condition estimate "
        << out.condition_estimate << ")";
    throw Error(ErrorCode::kNoUniqueSolution, msg.str(),
                out.condition_estimate);
  }
  out.solution = lu.solve(rhs);
  return out;
}

Vector VectorizeBlocks(const Matrix& stacked, const std::vector<int>& dims) {
  const Eigen::Index n = stacked.cols();
  Vector vec(stacked.rows() * n);
  Eigen::Index pos = 0;
  Eigen::Index row = 0;
  for (int d : dims) {
    for (Eigen::Index c = 0; c < n; ++c) {
      vec.segment(pos, d) = stacked.block(row, c, d, 1);
      pos += d;
    }
    row += d;
  }
  return vec;
}

Matrix UnvectorizeBlocks(const Vector& vec, const std::vector<int>& dims,
                         Eigen::Index state_dim) {
  Matrix stacked(TotalDim(dims), state_dim);
  Eigen::Index pos = 0;
  Eigen::Index row = 0;
  for (int d : dims) {
    for (Eigen::Index c = 0; c < state_dim; ++c) {
      stacked.block(row, c, d, 1) = vec.segment(pos, d);
      pos += d;
    }
    row += d;
  }
  return stacked;
}

Matrix AssembleEstimateSystem(const Matrix& coupling,
                              const std::vector<int>& dims,
                              const std::vector<Matrix>& gains) {
  const auto offsets = BlockOffsets(dims);
  const Eigen::Index n = gains.empty() ? 0 : gains.front().rows();
  const Eigen::Index size = n * offsets.back();
  Matrix system = Matrix::Zero(size, size);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const Eigen::Index di = dims[i];
    const Eigen::Index row0 = n * offsets[i];
    for (std::size_t j = 0; j < dims.size(); ++j) {
      const Eigen::Index dj = dims[j];
      const Eigen::Index col0 = n * offsets[j];
      const auto w = coupling.block(offsets[i], offsets[j], di, dj);
      if (i == j) {
        for (Eigen::Index c = 0; c < n; ++c) {
          system.block(row0 + c * di, col0 + c * dj, di, dj) = w;
        }
        continue;
      }
      // Block (c1, c2) of M_j^T (x) W_ij is M_j(c2, c1) * W_ij.
      const Matrix& m = gains[j];
      for (Eigen::Index c1 = 0; c1 < n; ++c1) {
        for (Eigen::Index c2 = 0; c2 < n; ++c2) {
          const double scale = m(c2, c1);
          if (scale == 0.0) continue;
          system.block(row0 + c1 * di, col0 + c2 * dj, di, dj) = scale * w;
        }
      }
    }
  }
  return system;
}

Matrix ApplyEstimateOperator(const Matrix& coupling,
                             const std::vector<int>& dims,
                             const std::vector<Matrix>& gains,
                             const Matrix& coefficients) {
  const auto offsets = BlockOffsets(dims);
  Matrix filtered(coefficients.rows(), coefficients.cols());
  for (std::size_t j = 0; j < dims.size(); ++j) {
    filtered.middleRows(offsets[j], dims[j]) =
        coefficients.middleRows(offsets[j], dims[j]) * gains[j];
  }
  Matrix out = coupling * filtered;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto w = coupling.block(offsets[i], offsets[i], dims[i], dims[i]);
    out.middleRows(offsets[i], dims[i]) +=
        w * (coefficients.middleRows(offsets[i], dims[i]) -
             filtered.middleRows(offsets[i], dims[i]));
  }
  return out;
}

double RelativeResidual(const Matrix& lhs, const Matrix& rhs) {
  const double residual = (lhs - rhs).norm();
  const double scale = rhs.norm();
  return scale > 0.0 ? residual / scale : residual;
}

CheckedSolve SolveEstimateSystem(const Matrix& coupling,
                                 const std::vector<int>& dims,
                                 const std::vector<Matrix>& gains,
                                 const Matrix& rhs, const std::string& what) {
  const Eigen::Index n = rhs.cols();
  CheckedSolve solved =
      SolveChecked(AssembleEstimateSystem(coupling, dims, gains),
                   VectorizeBlocks(rhs, dims), what);
  solved.solution = UnvectorizeBlocks(solved.solution, dims, n);
  return solved;
}

EstimateSystemSolver::EstimateSystemSolver(Matrix coupling,
                                           std::vector<int> dims,
                                           std::vector<Matrix> gains,
                                           Matrix rhs)
    : coupling_(std::move(coupling)),
      dims_(std::move(dims)),
      offsets_(BlockOffsets(dims_)),
      state_dim_(rhs.cols()),
      rhs_(std::move(rhs)),
      gains_(std::move(gains)) {
  rhs_vec_ = VectorizeBlocks(rhs_, dims_);
  Refactor();
}

void EstimateSystemSolver::Refactor() {
  committed_.clear();
  committed_rank_ = 0;
  lu_.compute(AssembleEstimateSystem(coupling_, dims_, gains_));
  condition_estimate_ = ConditionFromLu(lu_);
  if (!(condition_estimate_ <= kMaxConditionEstimate)) {
    std::ostringstream msg;
    msg << "estimate coefficients: linear system has no unique solution "
           "(condition estimate "
        << condition_estimate_ << ")";
    throw Error(ErrorCode::kNoUniqueSolution, msg.str(), condition_estimate_);
  }
  base_solution_ = lu_.solve(rhs_vec_);
  solution_ = UnvectorizeBlocks(base_solution_, dims_, state_dim_);
}

std::optional<EstimateSystemSolver::Update> EstimateSystemSolver::MakeUpdate(
    std::size_t agent, const Matrix& gain) const {
  const Eigen::Index n = state_dim_;
  Matrix left;
  Matrix right;
  if (!LowRankFactor(gain - gains_[agent], std::max<Eigen::Index>(1, n / 2),
                     &left, &right)) {
    return std::nullopt;
  }
  // dM = left * right^T. Block (i, agent) of the system gains
  // sum_s (right_s (x) W_i,agent)(left_s^T (x) I).
  const Eigen::Index da = dims_[agent];
  const Eigen::Index rank = left.cols();
  const Eigen::Index size = rhs_vec_.size();
  Update update;
  update.U = Matrix::Zero(size, rank * da);
  update.V = Matrix::Zero(size, rank * da);
  for (Eigen::Index s = 0; s < rank; ++s) {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i == agent) continue;
      const Eigen::Index di = dims_[i];
      const auto w = coupling_.block(offsets_[i], offsets_[agent], di, da);
      for (Eigen::Index c = 0; c < n; ++c) {
        update.U.block(n * offsets_[i] + c * di, s * da, di, da) =
            right(c, s) * w;
      }
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < da; ++r) {
        update.V(n * offsets_[agent] + c * da + r, s * da + r) = left(c, s);
      }
    }
  }
  update.Z = lu_.solve(update.U);
  return update;
}

std::optional<Matrix> EstimateSystemSolver::SolveWith(
    const std::vector<const Update*>& updates,
    const std::vector<Matrix>& gains) const {
  Eigen::Index rank = 0;
  for (const Update* u : updates) rank += u->U.cols();
  Vector x = base_solution_;
  if (rank > 0) {
    const Eigen::Index size = base_solution_.size();
    Matrix z(size, rank);
    Matrix v(size, rank);
    Eigen::Index col = 0;
    for (const Update* u : updates) {
      z.middleCols(col, u->Z.cols()) = u->Z;
      v.middleCols(col, u->V.cols()) = u->V;
      col += u->U.cols();
    }
    Matrix capacitance = Matrix::Identity(rank, rank);
    capacitance.noalias() += v.transpose() * z;
    Eigen::PartialPivLU<Matrix> small(capacitance);
    if (!(ConditionFromLu(small) <= kMaxConditionEstimate)) return std::nullopt;
    x.noalias() -= z * small.solve(v.transpose() * base_solution_);
  }
  Matrix coefficients = UnvectorizeBlocks(x, dims_, state_dim_);
  const Matrix lhs =
      ApplyEstimateOperator(coupling_, dims_, gains, coefficients);
  if (!(RelativeResidual(lhs, rhs_) <= kUpdateResidualTolerance)) {
    return std::nullopt;
  }
  return coefficients;
}

std::optional<Matrix> EstimateSystemSolver::SolveWithGain(
    std::size_t agent, const Matrix& gain) const {
  const auto update = MakeUpdate(agent, gain);
  if (!update) return std::nullopt;
  std::vector<const Update*> chain;
  for (const auto& u : committed_) chain.push_back(&u);
  chain.push_back(&*update);
  std::vector<Matrix> target = gains_;
  target[agent] = gain;
  return SolveWith(chain, target);
}

void EstimateSystemSolver::CommitGain(std::size_t agent, const Matrix& gain) {
  auto update = MakeUpdate(agent, gain);
  const Eigen::Index limit = std::max<Eigen::Index>(8, rhs_vec_.size() / 8);
  gains_[agent] = gain;
  if (!update || committed_rank_ + update->U.cols() > limit) {
    Refactor();
    return;
  }
  std::vector<const Update*> chain;
  for (const auto& u : committed_) chain.push_back(&u);
  chain.push_back(&*update);
  auto solved = SolveWith(chain, gains_);
  if (!solved) {
    Refactor();
    return;
  }
  committed_rank_ += update->U.cols();
  committed_.push_back(std::move(*update));
  solution_ = std::move(*solved);
}

}  // namespace teamstruct
