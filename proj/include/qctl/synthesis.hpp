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

#include <cstdint>
#include <vector>

#include "qctl/dynamics.hpp"

namespace qctl::synthesis {

// ---------------------------------------------------------------------------
// Lyapunov tracking design

/// Target must commute with the drift ([-iH0, rho_d] = 0 within 1e-8).
struct LyapunovDesign {
  core::DensityMatrix target;
  CMat h0, h1;
  double gain = 1.0;

  LyapunovDesign(core::DensityMatrix target_in, CMat h0_in, CMat h1_in,
                 double gain_in = 1.0);
};

/// V = 1/2 ||rho_d - rho||_F^2.
double lyapunov_value(const core::DensityMatrix& rho,
                      const core::DensityMatrix& target);

/// u = -gain * tr([-iH1, rho_d] rho). Along the closed loop Vdot = -u^2/gain
/// (isospectral rho, rho_d recommended; V then decays to 0 generically).
double lyapunov_control(const CMat& rho, const CMat& target, const CMat& h1,
                        double gain);

struct RankConditionResult {
  bool satisfied = false;
  int achieved_dim = 0;
  int tangent_dim = 0;
};

/// Kalman-like rank condition: dim span(ad^l_{-iH0} [-iH1, rho_d]) against
/// the tangent dimension of the isospectral leaf at rho_d.
RankConditionResult lyapunov_rank_condition(const CMat& h0, const CMat& h1,
                                            const core::DensityMatrix& target,
                                            int l_max);

struct LyapunovTrajectory {
  double dt = 0;
  std::vector<core::DensityMatrix> states;
  std::vector<double> v;  // Lyapunov values, one per sample
  std::vector<double> u;  // control at the start of each step (size n_steps)
};

/// RK4 on the closed-loop vector field, the control recomputed per stage.
LyapunovTrajectory lyapunov_simulate(const LyapunovDesign& design,
                                     const core::DensityMatrix& rho0,
                                     double total_time, int n_steps);

// ---------------------------------------------------------------------------
// GRAPE-style optimal control

enum class GrapeObjective { observable, unitary };

struct GrapeProblem {
  dynamics::ControlProblem cp;
  GrapeObjective objective = GrapeObjective::observable;
  /// Target observable M (Hermitian) or target unitary, by objective.
  CMat target;
  /// Initial state for the observable (state-transfer) objective.
  CVec psi0;
  double fluence_weight = 0.0;  // J includes -weight * sum u^2
  int max_iters = 200;
  double grad_tol = 1e-6;
};

/// J(u): final-time objective minus the fluence penalty.
double grape_cost(const GrapeProblem& problem, const RMat& u);

/// Exact gradient dJ/du (Frechet derivative of the per-slice exponential,
/// assembled from forward states and backward costates).
RMat grape_gradient(const GrapeProblem& problem, const RMat& u);

struct GrapeResult {
  RMat u;
  std::vector<double> j_history;  // non-decreasing by construction
  bool converged = false;         // gradient tolerance met within max_iters
  double final_cost = 0;
  double objective_term = 0;      // <M> or gate fidelity, without the penalty
};

/// Gradient ascent with backtracking Armijo line search (c = 1e-4, shrink
/// 1/2, initial step 1). Returns the best iterate; converged is false when
/// max_iters is exhausted before the gradient tolerance is met.
GrapeResult grape_optimize(const GrapeProblem& problem, const RMat& u0);

/// Random initial amplitudes uniform in [-amplitude, amplitude].
GrapeResult grape_optimize_seeded(const GrapeProblem& problem, std::uint64_t seed,
                                  double amplitude = 0.5);

// ---------------------------------------------------------------------------
// Dynamical decoupling

struct BipartiteModel {
  CMat hs, he;
  std::vector<std::pair<CMat, CMat>> couplings;  // (S_k, E_k)
};

struct DDProtocol {
  std::vector<CMat> group;  // unitaries G_j; dt = cycle_time / group.size()
  double cycle_time = 0;
  int cycles = 0;
  BipartiteModel model;
};

/// {I, sx, sy, sz}.
std::vector<CMat> pauli_group();

/// (1/n_g) sum_j G_j^dag s G_j: projection onto the commutant of the group.
CMat group_average(const std::vector<CMat>& group, const CMat& s);

/// First-order average Hamiltonian on H_S (x) H_E: group-averaged system
/// factors, environment factors untouched.
CMat dd_average_hamiltonian(const DDProtocol& protocol);

struct DDSample {
  double t = 0;
  double fidelity_with_dd = 0;
  double fidelity_without_dd = 0;
};

/// Exact piecewise (toggled-frame) evolution over K cycles; fidelities of the
/// reduced system state against free (coupling-off) evolution, sampled at
/// cycle boundaries. total_time must be a multiple of the cycle time.
std::vector<DDSample> dd_simulate(const DDProtocol& protocol,
                                  const CMat& joint_rho0, double total_time);

}  // namespace qctl::synthesis
