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

#include <functional>
#include <vector>

#include "qctl/util.hpp"

namespace qctl::core {

inline constexpr double kNormTol = 1e-9;    // state norm / trace tolerance
inline constexpr double kPsdTol = 1e-9;     // eigenvalue floor for states
inline constexpr double kDegenRel = 1e-8;   // eigenvalue grouping, rel. to spectral norm
inline constexpr double kProbFloor = 1e-12; // measurement branches below are dropped

/// Norm-1 vector of amplitudes in a fixed orthonormal basis.
class StateVector {
 public:
  explicit StateVector(CVec amplitudes);
  static StateVector basis_state(int dim, int j);

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVec& amplitudes() const { return amp_; }

 private:
  CVec amp_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Eigenvalues in
/// [-1e-9, 0) are clipped to zero and the state renormalized; anything more
/// negative is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMat rho);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix pure(const CVec& psi);
  /// Convex mixture sum_j f_j |psi_j><psi_j|.
  static DensityMatrix ensemble(const std::vector<double>& fractions,
                                const std::vector<StateVector>& states);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const CMat& matrix() const { return rho_; }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  CMat rho_;
};

struct SpectralLine {
  double eigenvalue;
  CMat projector;
};

/// Hermitian operator with its spectral resolution. Eigenvalues closer than
/// 1e-8 * spectral norm are merged into one degenerate projector.
class Observable {
 public:
  explicit Observable(CMat hermitian);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMat& matrix() const { return m_; }
  const std::vector<SpectralLine>& spectral() const { return spectral_; }

 private:
  CMat m_;
  std::vector<SpectralLine> spectral_;
};

struct BlochVector {
  double x = 0, y = 0, z = 0;
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Traceless Hermitian operator basis, orthonormal under tr(a^dag b).
struct OperatorBasis {
  int dim = 0;
  std::vector<CMat> elements;
};

struct TruncatedFock {
  int ncut = 0;
  CMat a, adag, number;
};

struct CoherentState {
  StateVector state;
  /// || a|alpha> - alpha|alpha> || after truncation.
  double truncation_residual;
};

struct MeasurementOutcome {
  double outcome;
  double probability;
  DensityMatrix conditional;
};

/// index is one of '0', 'x', 'y', 'z'.
Observable pauli(char index);

BlochVector bloch_from_density(const DensityMatrix& rho);
DensityMatrix density_from_bloch(const BlochVector& b);

std::vector<MeasurementOutcome> measure(const DensityMatrix& rho,
                                        const Observable& y);
DensityMatrix nonselective(const DensityMatrix& rho, const Observable& y);
double expectation(const DensityMatrix& rho, const Observable& y);
double expectation(const DensityMatrix& rho, const CMat& y);

CMat tensor(const CMat& a, const CMat& b);
StateVector tensor(const StateVector& a, const StateVector& b);
/// Partial trace of an operator on H1 (x) H2; keep selects the factor (1|2).
CMat partial_trace(const CMat& x, int dim1, int dim2, int keep);

/// Symmetric pairs, antisymmetric pairs, then diagonal matrices, each in
/// lexicographic index order; generalized Gell-Mann scaled to tr(l_j l_k) =
/// delta_jk (Pauli / sqrt(2) for dim 2).
OperatorBasis gell_mann_basis(int dim);

RVec coherence_vector(const DensityMatrix& rho, const OperatorBasis& basis);
DensityMatrix density_from_coherence(const RVec& v, const OperatorBasis& basis);
/// Unchecked variant for intermediate (not necessarily state) matrices.
RVec coherence_coords(const CMat& x, const OperatorBasis& basis);

/// (dim^2) x (dim^2) matrix of a linear operator map in the column-stacking
/// (Liouville space) convention.
CMat superop_matrix(const std::function<CMat(const CMat&)>& map, int dim);

TruncatedFock fock_operators(int ncut);
CoherentState coherent_state(Complex alpha, int ncut);

/// Uhlmann fidelity of two density matrices.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// Trace distance (1/2)||a - b||_1.
double trace_distance(const CMat& a, const CMat& b);

}  // namespace qctl::core
