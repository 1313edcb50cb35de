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

// Small dense linear-algebra helpers shared by the solvers.

#ifndef TEAMSTRUCT_LINALG_HPP_
#define TEAMSTRUCT_LINALG_HPP_

#include <Eigen/Dense>
#include <string>

namespace teamstruct {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative eigenvalue cutoff used by SymmetricPseudoInverse.
inline constexpr double kPseudoInverseTolerance = 1e-10;

// Systems whose condition estimate exceeds this are reported as singular.
inline constexpr double kMaxConditionEstimate = 1e12;

// Moore-Penrose inverse of a symmetric matrix through its eigendecomposition.
// Eigenvalues below tolerance * max|eigenvalue| are treated as zero.
Matrix SymmetricPseudoInverse(const Matrix& a,
                              double tolerance = kPseudoInverseTolerance);

double MaxAbs(const Matrix& a);

// Smallest eigenvalue of the symmetric part of a.
double MinEigenvalue(const Matrix& a);

// Spectral norm of a symmetric matrix.
double SymmetricNorm(const Matrix& a);

bool IsSymmetric(const Matrix& a);

// Symmetric and smallest eigenvalue >= -1e-9 * ||a||_2.
bool IsSymmetricPsd(const Matrix& a);

// Throws InvalidInput naming `what` unless a is symmetric PSD.
void RequireSymmetricPsd(const Matrix& a, const std::string& what);

// Throws InvalidInput naming `what` unless a is symmetric with a strictly
// positive smallest eigenvalue.
void RequireSymmetricPd(const Matrix& a, const std::string& what);

// Symmetric square root factor L with L * L^T = a for PSD a.
Matrix PsdSquareRoot(const Matrix& a);

}  // namespace teamstruct

#endif  // TEAMSTRUCT_LINALG_HPP_
