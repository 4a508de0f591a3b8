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
#include <string>
#include <vector>

#include "qctl/dynamics.hpp"

namespace qctl::analysis {

enum class AmbientAlgebra { su, gl_real, affine_real };

struct LieClosureResult {
  int dim = 0;
  /// Orthonormal under the real Hilbert-Schmidt inner product Re tr(a^dag b).
  std::vector<CMat> basis;
  int depth = 0;
  bool saturated = false;
};

/// Iterated commutators of the generators, breadth-first (new basis elements
/// bracketed against the original generators only), orthonormalized by
/// modified Gram-Schmidt with relative rank tolerance tol.
LieClosureResult lie_closure(const std::vector<CMat>& generators,
                             AmbientAlgebra algebra, double tol = 1e-9);

/// Homogeneous (n+1)x(n+1) embedding of x -> m x + v.
CMat affine_embed(const RMat& m, const RVec& v);

struct ControllabilityResult {
  bool controllable = false;
  LieClosureResult closure;
};

/// Lie algebra rank condition: Lie{-iH0, -iH1} = su(N). Traces are removed
/// from the inputs before closure (a global phase).
ControllabilityResult is_operator_controllable(const CMat& h0, const CMat& h1);

struct SpectralStructure {
  RVec energies;                    // sorted ascending
  std::vector<double> bohr;         // all e_j - e_k, j != k
  bool regular = false;             // all energies distinct
  bool strongly_regular = false;    // all transition frequencies distinct
};

SpectralStructure spectral_structure(const CMat& h0, double tol = 1e-8);

struct CouplingGraph {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;  // undirected, j < k
};

struct GraphResult {
  bool connected = false;
  CouplingGraph graph;
};

GraphResult graph_connected(const CMat& h1, double threshold);

enum class SufficientVerdict {
  controllable_by_thm5,
  controllable_by_weakened_test,
  inconclusive,
};

struct SufficientCertificate {
  bool basis_changed = false;          // H0 was diagonalized first
  bool strongly_regular = false;
  bool graph_is_connected = false;
  /// Weakened test, reading (a): the subgraph of edges whose Bohr frequency
  /// is unique among all transitions is connected.
  bool unique_bohr_subgraph_connected = false;
  /// Weakened test, reading (b): Bohr frequencies pairwise distinct on the
  /// edges of the graph, and the graph is connected.
  bool edge_restricted_regular_connected = false;
  std::vector<std::string> checks_passed;
  SufficientVerdict verdict = SufficientVerdict::inconclusive;
};

SufficientCertificate sufficient_controllability(const CMat& h0, const CMat& h1,
                                                 double edge_threshold = 1e-9,
                                                 double tol = 1e-8);

/// Ordered orthonormal basis splitting H = H_S + H_R (first dim_s columns).
struct SubspaceSplit {
  CMat basis;
  int dim_s = 0;
};

struct InvarianceResult {
  bool invariant = false;
  double noise_q_residual = 0;  // max_k ||L_{Q,k}||_F
  double hamiltonian_residual = 0;  // ||i H_P - 1/2 sum L_{S,k}^dag L_{P,k}||_F
};

InvarianceResult invariance_check(const dynamics::LindbladModel& model,
                                  const SubspaceSplit& split);

struct SteadyStates {
  int kernel_dim = 0;  // complex kernel dimension of the superoperator
  std::vector<CMat> hermitian_basis;
  std::optional<core::DensityMatrix> unique_state;  // present iff kernel_dim == 1
};

SteadyStates steady_states(const dynamics::LindbladModel& model);

struct GasResult {
  bool gas = false;
  std::optional<core::DensityMatrix> state;
  int kernel_dim = 0;
};

/// A steady state is GAS iff it is unique.
GasResult gas_check(const dynamics::LindbladModel& model);

enum class AccessVerdict { accessible, inconclusive };

struct AccessibilityResult {
  AccessVerdict verdict = AccessVerdict::inconclusive;
  int closure_dim = 0;
  int required_dim = 0;
  bool unital = false;
  LieClosureResult closure;
  /// Universal negative facts that hold for every MME (reported, not
  /// computed): the system is never STLC, never controllable in finite
  /// time, and never controllable in D(H) when the dissipation is unital.
  std::vector<std::string> static_facts;
};

/// Accessibility of the controlled MME in coherence-vector coordinates:
/// closure of the drift (affine when the model is not unital) and the
/// control rotations, compared against dim gl(n,R) or gl(n,R) (s) R^n.
AccessibilityResult affine_accessibility(const dynamics::LindbladModel& model,
                                         const std::vector<CMat>& control_hams);

/// True iff b is majorized by a (sorted-descending partial sums of a
/// dominate those of b; totals equal within 1e-9).
bool majorizes(const RVec& spec_a, const RVec& spec_b, double tol = 1e-10);

/// Eigenvalues of a Hermitian matrix, sorted descending.
RVec sorted_spectrum(const CMat& a);

}  // namespace qctl::analysis
