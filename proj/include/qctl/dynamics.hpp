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

#include <optional>
#include <vector>

#include "qctl/core.hpp"

namespace qctl::dynamics {

/// Drift + control Hamiltonians on a uniform grid of piecewise-constant
/// amplitudes. The drift is made traceless on construction (subtracting
/// tr/N), which only removes a global phase.
class ControlProblem {
 public:
  ControlProblem(CMat drift, std::vector<CMat> controls, double total_time,
                 int n_slices, RMat amplitudes);

  int dim() const { return static_cast<int>(drift_.rows()); }
  int n_slices() const { return n_slices_; }
  int n_controls() const { return static_cast<int>(controls_.size()); }
  double total_time() const { return total_time_; }
  double dt() const { return total_time_ / n_slices_; }
  const CMat& drift() const { return drift_; }
  const std::vector<CMat>& controls() const { return controls_; }
  const RMat& amplitudes() const { return u_; }
  void set_amplitudes(RMat u);

  /// H0 + sum_j u_j(slice) H_j for one slice.
  CMat slice_hamiltonian(int slice) const;

 private:
  CMat drift_;
  std::vector<CMat> controls_;
  double total_time_;
  int n_slices_;
  RMat u_;  // n_controls x n_slices
};

/// Hamiltonian plus noise operators; optionally remembers the GKS matrix it
/// was constructed from.
class LindbladModel {
 public:
  LindbladModel(CMat hamiltonian, std::vector<CMat> noise_ops);
  static LindbladModel from_gks(CMat hamiltonian, const CMat& gks,
                                const core::OperatorBasis& basis);

  int dim() const { return static_cast<int>(h_.rows()); }
  const CMat& hamiltonian() const { return h_; }
  const std::vector<CMat>& noise_ops() const { return ls_; }
  const std::optional<CMat>& gks_matrix() const { return gks_; }
  const std::optional<core::OperatorBasis>& gks_basis() const { return basis_; }

 private:
  CMat h_;
  std::vector<CMat> ls_;
  std::optional<CMat> gks_;
  std::optional<core::OperatorBasis> basis_;
};

struct AffineBlochForm {
  RMat m;  // 3x3
  RVec g;  // inhomogeneous part; zero for unital models
};

/// D(L, rho) = L rho L^dag - 1/2 {L^dag L, rho}.
CMat dissipator(const CMat& l, const CMat& rho);

/// -i[H, rho] + sum_k D(L_k, rho).
CMat apply_generator(const LindbladModel& model, const CMat& rho);

/// Schroedinger evolution sampled at slice boundaries.
std::vector<core::StateVector> propagate_state(const ControlProblem& cp,
                                               const core::StateVector& psi0);

/// Unitary propagator at slice boundaries, U[0] = I.
std::vector<CMat> propagator(const ControlProblem& cp);

/// rho(t_k) = U(t_k) rho0 U(t_k)^dag at slice boundaries.
std::vector<core::DensityMatrix> evolve_liouville(const ControlProblem& cp,
                                                  const core::DensityMatrix& rho0);

/// tr(U^dag(t) Y U(t) rho0); t anywhere in [0, T].
double heisenberg_expectation(const ControlProblem& cp,
                              const core::DensityMatrix& rho0,
                              const core::Observable& y, double t);

/// Adjoint-representation generator of -i[H, .] on Bloch vectors (N = 2,
/// traceless Hermitian H); skew-symmetric 3x3.
RMat bloch_generator(const CMat& h);

/// Symmetrization of a GKS matrix into noise operators via its
/// eigendecomposition; eigenvalues below the PSD tolerance are dropped.
std::vector<CMat> gks_to_lindblad(const CMat& gks, const core::OperatorBasis& basis);

/// Superoperator matrix of the generator in the column-stacking convention.
/// Built by applying the generator column by column, so it agrees exactly
/// with apply_generator.
CMat lindblad_superop(const LindbladModel& model);

std::vector<core::DensityMatrix> mme_propagate(const LindbladModel& model,
                                               const core::DensityMatrix& rho0,
                                               double total_time, int n_steps);

/// MME trajectory under piecewise-constant Hamiltonian controls; amplitudes
/// is n_controls x n_slices, samples at slice boundaries.
std::vector<core::DensityMatrix> mme_propagate_controlled(
    const LindbladModel& model, const std::vector<CMat>& control_hams,
    const RMat& amplitudes, double total_time,
    const core::DensityMatrix& rho0);

/// Bloch-ball affine form d(bloch)/dt = M bloch + g of a two-level model.
AffineBlochForm bloch_affine(const LindbladModel& model);

/// Stationary Bloch vector, r = -M^{-1} g.
RVec affine_fixed_point(const AffineBlochForm& form);

/// H_S (x) I + I (x) H_E + sum_k S_k (x) E_k.
core::Observable bipartite_hamiltonian(
    const CMat& hs, const CMat& he,
    const std::vector<std::pair<CMat, CMat>>& couplings,
    bool require_hermitian_terms = true);

/// Optional transform: traceless noise operators, trace absorbed into the
/// Hamiltonian. Never applied silently.
LindbladModel canonicalize(const LindbladModel& model);

}  // namespace qctl::dynamics
