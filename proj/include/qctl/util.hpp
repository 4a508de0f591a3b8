// Copyright 2026 The qctl Authors
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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace qctl {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Bad input: a documented precondition or a config schema was violated.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-finite state, missing convergence and the like.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline CMat dagger(const CMat& a) { return a.adjoint(); }

inline CMat comm(const CMat& a, const CMat& b) { return a * b - b * a; }

inline CMat anticomm(const CMat& a, const CMat& b) { return a * b + b * a; }

inline CMat hermitize(const CMat& a) { return 0.5 * (a + a.adjoint()); }

inline double fnorm(const CMat& a) { return a.norm(); }

inline bool is_hermitian(const CMat& a, double tol = 1e-9) {
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

inline bool is_unitary(const CMat& a, double tol = 1e-9) {
  return (a * a.adjoint() - CMat::Identity(a.rows(), a.cols())).norm() <= tol;
}

inline double trace_re(const CMat& a) { return a.trace().real(); }

CMat kron(const CMat& a, const CMat& b);

/// Column-stacking vectorization and its inverse.
CVec vec_stack(const CMat& a);
CMat unvec(const CVec& v, int rows, int cols);

/// exp(-i * h * t) for Hermitian h, via eigendecomposition (exactly unitary
/// up to the accuracy of the eigensolver).
CMat expi(const CMat& h, double t);

/// Dense matrix exponential (scaling-and-squaring Pade), any square matrix.
CMat expm(const CMat& a);

/// Frechet derivative of the matrix exponential: returns (exp(a), d) with
/// d = d/ds exp(a + s e)|_{s=0}, computed from the augmented block matrix.
std::pair<CMat, CMat> expm_frechet(const CMat& a, const CMat& e);

}  // namespace qctl
