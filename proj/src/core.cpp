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

#include "qctl/core.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qctl {

CMat kron(const CMat& a, const CMat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

CVec vec_stack(const CMat& a) {
  CVec v(a.size());
  int k = 0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) v(k++) = a(i, j);
  return v;
}

CMat unvec(const CVec& v, int rows, int cols) {
  CMat a(rows, cols);
  int k = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = v(k++);
  return a;
}

CMat expi(const CMat& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("expi: eigensolver failed");
  const auto& v = es.eigenvectors();
  CVec phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

CMat expm(const CMat& a) { return a.exp(); }

std::pair<CMat, CMat> expm_frechet(const CMat& a, const CMat& e) {
  const int n = static_cast<int>(a.rows());
  CMat aug = CMat::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, n) = e;
  aug.bottomRightCorner(n, n) = a;
  CMat big = aug.exp();
  return {big.topLeftCorner(n, n), big.topRightCorner(n, n)};
}

}  // namespace qctl

namespace qctl::core {

StateVector::StateVector(CVec amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw ValidationError("StateVector: empty");
  if (std::abs(amp_.norm() - 1.0) > kNormTol)
    throw ValidationError("StateVector: norm differs from 1 beyond 1e-9");
}

StateVector StateVector::basis_state(int dim, int j) {
  if (j < 0 || j >= dim) throw ValidationError("basis_state: index out of range");
  CVec v = CVec::Zero(dim);
  v(j) = 1.0;
  return StateVector(v);
}

DensityMatrix::DensityMatrix(CMat rho) : rho_(std::move(rho)) {
  const int n = static_cast<int>(rho_.rows());
  if (n == 0 || rho_.cols() != n) throw ValidationError("DensityMatrix: not square");
  if ((rho_ - rho_.adjoint()).norm() > kNormTol)
    throw ValidationError("DensityMatrix: not Hermitian within 1e-9");
  rho_ = hermitize(rho_);
  if (std::abs(rho_.trace().real() - 1.0) > kNormTol ||
      std::abs(rho_.trace().imag()) > kNormTol)
    throw ValidationError("DensityMatrix: trace differs from 1 beyond 1e-9");

  Eigen::SelfAdjointEigenSolver<CMat> es(rho_);
  const RVec ev = es.eigenvalues();
  if (ev.minCoeff() < -kPsdTol)
    throw ValidationError("DensityMatrix: negative eigenvalue beyond -1e-9");
  if (ev.minCoeff() < 0.0) {
    RVec clipped = ev.cwiseMax(0.0);
    clipped /= clipped.sum();
    rho_ = es.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
           es.eigenvectors().adjoint();
    rho_ = hermitize(rho_);
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::pure(const CVec& psi) {
  CVec n = psi / psi.norm();
  return DensityMatrix(n * n.adjoint());
}

DensityMatrix DensityMatrix::ensemble(const std::vector<double>& fractions,
                                      const std::vector<StateVector>& states) {
  if (fractions.size() != states.size() || states.empty())
    throw ValidationError("ensemble: fractions/states size mismatch");
  double sum = 0;
  for (double f : fractions) {
    if (f < 0) throw ValidationError("ensemble: negative fraction");
    sum += f;
  }
  if (std::abs(sum - 1.0) > kNormTol)
    throw ValidationError("ensemble: fractions do not sum to 1");
  const int n = states.front().dim();
  CMat rho = CMat::Zero(n, n);
  for (size_t j = 0; j < states.size(); ++j) {
    if (states[j].dim() != n) throw ValidationError("ensemble: dimension mismatch");
    rho += fractions[j] * states[j].amplitudes() * states[j].amplitudes().adjoint();
  }
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(CMat::Identity(dim, dim) / static_cast<double>(dim));
}

Observable::Observable(CMat hermitian) : m_(std::move(hermitian)) {
  const int n = static_cast<int>(m_.rows());
  if (n == 0 || m_.cols() != n) throw ValidationError("Observable: not square");
  if ((m_ - m_.adjoint()).norm() > kNormTol * std::max(1.0, m_.norm()))
    throw ValidationError("Observable: not Hermitian within 1e-9");
  m_ = hermitize(m_);

  Eigen::SelfAdjointEigenSolver<CMat> es(m_);
  const RVec ev = es.eigenvalues();
  const CMat& vecs = es.eigenvectors();
  const double scale = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  const double gap = kDegenRel * std::max(scale, 1e-300);

  // Eigenvalues are sorted; sweep and merge near-degenerate groups.
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && ev(j) - ev(j - 1) <= gap) ++j;
    CMat proj = CMat::Zero(n, n);
    double mean = 0;
    for (int k = i; k < j; ++k) {
      proj += vecs.col(k) * vecs.col(k).adjoint();
      mean += ev(k);
    }
    mean /= (j - i);
    spectral_.push_back({mean, hermitize(proj)});
    i = j;
  }
}

Observable pauli(char index) {
  CMat m(2, 2);
  switch (index) {
    case '0': m << 1, 0, 0, 1; break;
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: throw ValidationError("pauli: index must be one of 0,x,y,z");
  }
  return Observable(m);
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ValidationError("bloch_from_density: dimension != 2");
  const CMat& r = rho.matrix();
  BlochVector b;
  b.x = (r * pauli('x').matrix()).trace().real();
  b.y = (r * pauli('y').matrix()).trace().real();
  b.z = (r * pauli('z').matrix()).trace().real();
  return b;
}

DensityMatrix density_from_bloch(const BlochVector& b) {
  if (b.norm() > 1.0 + kNormTol)
    throw ValidationError("density_from_bloch: vector outside the unit ball");
  CMat rho = 0.5 * (CMat::Identity(2, 2) + b.x * pauli('x').matrix() +
                    b.y * pauli('y').matrix() + b.z * pauli('z').matrix());
  return DensityMatrix(rho);
}

std::vector<MeasurementOutcome> measure(const DensityMatrix& rho,
                                        const Observable& y) {
  if (rho.dim() != y.dim()) throw ValidationError("measure: dimension mismatch");
  std::vector<MeasurementOutcome> out;
  for (const auto& line : y.spectral()) {
    const double p = (rho.matrix() * line.projector).trace().real();
    if (p <= kProbFloor) continue;
    CMat cond = line.projector * rho.matrix() * line.projector / p;
    out.push_back({line.eigenvalue, p, DensityMatrix(hermitize(cond))});
  }
  return out;
}

DensityMatrix nonselective(const DensityMatrix& rho, const Observable& y) {
  if (rho.dim() != y.dim()) throw ValidationError("nonselective: dimension mismatch");
  CMat bar = CMat::Zero(rho.dim(), rho.dim());
  for (const auto& line : y.spectral())
    bar += line.projector * rho.matrix() * line.projector;
  return DensityMatrix(hermitize(bar));
}

double expectation(const DensityMatrix& rho, const Observable& y) {
  return expectation(rho, y.matrix());
}

double expectation(const DensityMatrix& rho, const CMat& y) {
  if (rho.dim() != y.rows()) throw ValidationError("expectation: dimension mismatch");
  return (y * rho.matrix()).trace().real();
}

CMat tensor(const CMat& a, const CMat& b) { return kron(a, b); }

StateVector tensor(const StateVector& a, const StateVector& b) {
  CVec v(a.dim() * b.dim());
  int k = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) v(k++) = a.amplitudes()(i) * b.amplitudes()(j);
  return StateVector(v);
}

CMat partial_trace(const CMat& x, int dim1, int dim2, int keep) {
  if (x.rows() != dim1 * dim2 || x.cols() != dim1 * dim2)
    throw ValidationError("partial_trace: dimensions do not factorize as declared");
  if (keep != 1 && keep != 2) throw ValidationError("partial_trace: keep must be 1 or 2");
  if (keep == 1) {
    CMat out = CMat::Zero(dim1, dim1);
    for (int i = 0; i < dim1; ++i)
      for (int j = 0; j < dim1; ++j)
        for (int k = 0; k < dim2; ++k) out(i, j) += x(i * dim2 + k, j * dim2 + k);
    return out;
  }
  CMat out = CMat::Zero(dim2, dim2);
  for (int i = 0; i < dim2; ++i)
    for (int j = 0; j < dim2; ++j)
      for (int k = 0; k < dim1; ++k) out(i, j) += x(k * dim2 + i, k * dim2 + j);
  return out;
}

OperatorBasis gell_mann_basis(int dim) {
  if (dim < 2) throw ValidationError("gell_mann_basis: dim must be >= 2");
  OperatorBasis basis;
  basis.dim = dim;
  const double s = 1.0 / std::sqrt(2.0);
  // Symmetric off-diagonal pairs.
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k) {
      CMat m = CMat::Zero(dim, dim);
      m(j, k) = s;
      m(k, j) = s;
      basis.elements.push_back(m);
    }
  // Antisymmetric off-diagonal pairs.
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k) {
      CMat m = CMat::Zero(dim, dim);
      m(j, k) = Complex(0, -s);
      m(k, j) = Complex(0, s);
      basis.elements.push_back(m);
    }
  // Diagonal matrices, tr(m^2) = 1.
  for (int l = 1; l < dim; ++l) {
    CMat m = CMat::Zero(dim, dim);
    const double f = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = f;
    m(l, l) = -f * l;
    basis.elements.push_back(m);
  }
  return basis;
}

RVec coherence_coords(const CMat& x, const OperatorBasis& basis) {
  if (x.rows() != basis.dim)
    throw ValidationError("coherence_coords: basis/dim mismatch");
  RVec v(static_cast<int>(basis.elements.size()));
  for (size_t k = 0; k < basis.elements.size(); ++k)
    v(static_cast<int>(k)) = (basis.elements[k] * x).trace().real();
  return v;
}

RVec coherence_vector(const DensityMatrix& rho, const OperatorBasis& basis) {
  return coherence_coords(rho.matrix(), basis);
}

DensityMatrix density_from_coherence(const RVec& v, const OperatorBasis& basis) {
  if (v.size() != static_cast<int>(basis.elements.size()))
    throw ValidationError("density_from_coherence: coordinate length mismatch");
  CMat rho = CMat::Identity(basis.dim, basis.dim) / static_cast<double>(basis.dim);
  for (size_t k = 0; k < basis.elements.size(); ++k)
    rho += v(static_cast<int>(k)) * basis.elements[k];
  return DensityMatrix(rho);
}

CMat superop_matrix(const std::function<CMat(const CMat&)>& map, int dim) {
  CMat s(dim * dim, dim * dim);
  CMat unit = CMat::Zero(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      unit(i, j) = 1.0;
      s.col(j * dim + i) = vec_stack(map(unit));
      unit(i, j) = 0.0;
    }
  return s;
}

TruncatedFock fock_operators(int ncut) {
  if (ncut < 2) throw ValidationError("fock_operators: ncut must be >= 2");
  TruncatedFock f;
  f.ncut = ncut;
  f.a = CMat::Zero(ncut, ncut);
  for (int n = 1; n < ncut; ++n) f.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  f.adag = f.a.adjoint();
  f.number = f.adag * f.a;
  return f;
}

CoherentState coherent_state(Complex alpha, int ncut) {
  TruncatedFock f = fock_operators(ncut);
  CVec c(ncut);
  // log-scale recurrence avoids overflow of n! for large ncut
  Complex term = 1.0;
  for (int n = 0; n < ncut; ++n) {
    c(n) = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  c /= c.norm();
  StateVector psi(c);
  const double resid = (f.a * c - alpha * c).norm();
  return {psi, resid};
}

double trace_distance(const CMat& a, const CMat& b) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(a - b));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.matrix());
  RVec ev = es.eigenvalues().cwiseMax(0.0);
  CMat sqrt_a = es.eigenvectors() *
                ev.cwiseSqrt().cast<Complex>().asDiagonal() *
                es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es2(hermitize(sqrt_a * b.matrix() * sqrt_a));
  double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

}  // namespace qctl::core
