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
#include <optional>
#include <vector>

#include "qctl/dynamics.hpp"

namespace qctl::feedback {

// ---------------------------------------------------------------------------
// Output feedback: the Wiseman-Milburn feedback master equation

/// Closed loop under instantaneous output feedback: noise operator L - iF,
/// Hamiltonian H + Hc + 1/2 (FL + L^dag F).
dynamics::LindbladModel fme_closed_loop(const CMat& h, const CMat& l,
                                        const CMat& f, const CMat& hc);

/// A pure target is stabilizable by output feedback iff [rho_d, L + L^dag]
/// does not vanish.
bool stabilizable(const core::DensityMatrix& target, const CMat& l);

struct FeedbackDesign {
  CMat f;   // feedback Hamiltonian
  CMat hc;  // Hamiltonian compensation
  dynamics::LindbladModel closed_loop;
  /// True when a chain coupling inside the complement had to be added to the
  /// compensation to remove spurious invariant states (only possible for
  /// N > 2).
  bool complement_mixing_added = false;
};

/// Constructive stabilization: rotate the target to e1 (exact Householder
/// unitary), pick F_P = i L_Q^dag so the closed-loop noise operator is upper
/// block triangular, choose Hc to cancel the invariance residual, and verify
/// global asymptotic stability via the generator kernel.
FeedbackDesign synthesize_feedback(const core::DensityMatrix& target,
                                   const CMat& l, const CMat& h);

// ---------------------------------------------------------------------------
// Spin operators and state-feedback laws

struct SpinOperators {
  CMat fx, fy, fz;
};

/// Standard angular-momentum matrices for j = (N-1)/2, F_z = diag(j, .., -j).
SpinOperators spin_operators(int dim);

/// u = -1/2 (1 + z) + 2x on the Bloch ball (N = 2).
double affine_bloch_law(const core::DensityMatrix& rho);

struct PatchedLawConfig {
  core::DensityMatrix target;  // eigenstate of F_z
  double gamma = 0.45;         // switching threshold, 0 < gamma/2 < gamma < 1
  /// Hysteresis memory: which boundary of B = {gamma/2 < tr(rho rho_d) <
  /// gamma} was crossed last. Unknown behaves like the lower boundary.
  enum class Crossing { upper, lower_or_unknown };
  Crossing last_crossing = Crossing::lower_or_unknown;

  PatchedLawConfig(core::DensityMatrix target_in, const CMat& fz,
                   double gamma_in = 0.45);
};

/// Three-branch globally stabilizing law with hysteresis; updates the
/// config's crossing memory.
double patched_law(const core::DensityMatrix& rho, const CMat& fy,
                   PatchedLawConfig& config);

// ---------------------------------------------------------------------------
// Diffusive stochastic master equation

enum class FeedbackLaw { none, affine_bloch, lyapunov, patched };

struct SMEModel {
  CMat h0, h1;  // H(t) = H0 + u H1
  CMat l;       // measurement operator
  double eta = 1.0;
  FeedbackLaw law = FeedbackLaw::none;
  std::optional<core::DensityMatrix> target;  // lyapunov / patched laws
  double gain = 1.0;                          // lyapunov law
  double gamma = 0.45;                        // patched law threshold

  SMEModel(CMat h0_in, CMat h1_in, CMat l_in, double eta_in = 1.0,
           FeedbackLaw law_in = FeedbackLaw::none);

  int dim() const { return static_cast<int>(h0.rows()); }
  /// Drift generator as a Lindblad model (H0, {L}); its superoperator is the
  /// exact averaged (no-feedback) master equation.
  dynamics::LindbladModel drift_model() const;
  /// Largest step size honoring dt <= 1e-2 / max(||H||, ||L||^2).
  double recommended_dt() const;
};

struct SmeStepResult {
  CMat rho;
  double dy = 0;
  bool clipped = false;
  double trace_drift = 0;  // |tr - 1| before renormalization
};

/// One Euler-Maruyama step with post-step projection (Hermitize, clip
/// negative eigenvalues, renormalize). dY = sqrt(eta) tr((L+L^dag) rho) dt +
/// dW.
SmeStepResult sme_step(const SMEModel& model, const CMat& rho, double u,
                       double dw, double dt);

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  double dt = 0;
  std::vector<double> t;       // n_steps + 1 entries
  std::vector<CMat> states;    // n_steps + 1 entries
  std::vector<double> u, dw, dy;  // n_steps entries
  int clip_events = 0;
  double max_trace_drift = 0;
  bool dt_warning = false;  // step-size precondition violated
};

TrajectoryRecord sme_trajectory(const SMEModel& model,
                                const core::DensityMatrix& rho0,
                                double total_time, double dt,
                                std::uint64_t seed);

struct TrajectorySummary {
  std::uint64_t seed = 0;
  CMat final_state;
  int clip_events = 0;
};

struct EnsembleResult {
  std::vector<double> times;
  std::vector<CMat> mean_states;
  /// Ensemble mean of tr(Y^2 rho) - tr(Y rho)^2 for the variance observable.
  std::vector<double> mean_variance;
  std::vector<TrajectorySummary> trajectories;  // in index order
  bool dt_warning = false;
};

struct EnsembleOptions {
  int n_samples = 10;
  int n_threads = 0;  // 0: hardware concurrency
  /// Observable for the variance series; empty: L + L^dag.
  CMat variance_observable;
};

/// Trajectory i uses seed + i; results are merged in index order, so the
/// output is independent of thread scheduling.
EnsembleResult sme_ensemble(const SMEModel& model,
                            const core::DensityMatrix& rho0, double total_time,
                            double dt, int n_traj, std::uint64_t seed,
                            const EnsembleOptions& options = {});

}  // namespace qctl::feedback
