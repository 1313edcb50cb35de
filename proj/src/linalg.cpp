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

#include "linalg.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace teamstruct {

Matrix SymmetricPseudoInverse(const Matrix& a, double tolerance) {
  if (a.rows() == 0) return Matrix(0, 0);
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  Vector inverted = Vector::Zero(values.size());
  if (largest > 0.0) {
    const double cutoff = tolerance * largest;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (values(i) > cutoff) inverted(i) = 1.0 / values(i);
    }
  }
  const Matrix& vectors = eig.eigenvectors();
  return vectors * inverted.asDiagonal() * vectors.transpose();
}

double MaxAbs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double MinEigenvalue(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double SymmetricNorm(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

bool IsSymmetric(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  return MaxAbs(a - a.transpose()) <= 1e-10 * (1.0 + MaxAbs(a));
}

bool IsSymmetricPsd(const Matrix& a) {
  if (!IsSymmetric(a)) return false;
  return MinEigenvalue(a) >= -1e-9 * SymmetricNorm(a);
}

void RequireSymmetricPsd(const Matrix& a, const std::string& what) {
  if (a.rows() != a.cols()) ThrowInvalid(what + ": matrix is not square");
  if (!IsSymmetric(a)) ThrowInvalid(what + ": matrix is not symmetric");
  if (!IsSymmetricPsd(a)) {
    ThrowInvalid(what + ": matrix is not positive semidefinite");
  }
}

void RequireSymmetricPd(const Matrix& a, const std::string& what) {
  if (a.rows() != a.cols()) ThrowInvalid(what + ": matrix is not square");
  if (!IsSymmetric(a)) ThrowInvalid(what + ": matrix is not symmetric");
  if (a.rows() > 0 && !(MinEigenvalue(a) > 0.0)) {
    ThrowInvalid(what + ": matrix is not positive definite");
  }
}

Matrix PsdSquareRoot(const Matrix& a) {
  if (a.rows() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()));
  const Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

}  // namespace teamstruct
