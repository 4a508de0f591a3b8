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

#include "qctl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qctl::analysis {

using core::DensityMatrix;
using dynamics::LindbladModel;

namespace {

double re_inner(const CMat& a, const CMat& b) {
  return (a.adjoint() * b).trace().real();
}

int ambient_dim(AmbientAlgebra algebra, int rows) {
  switch (algebra) {
    case AmbientAlgebra::su: return rows * rows - 1;
    case AmbientAlgebra::gl_real: return rows * rows;
    case AmbientAlgebra::affine_real: {
      const int n = rows - 1;  // homogeneous embedding
      return n * n + n;
    }
  }
  return 0;
}

void validate_generator(const CMat& g, AmbientAlgebra algebra, double tol) {
  const double scale = std::max(1.0, g.norm());
  switch (algebra) {
    case AmbientAlgebra::su:
      if ((g + g.adjoint()).norm() > tol * scale * 1e3)
        throw ValidationError("lie_closure: generator not skew-Hermitian");
      if (std::abs(g.trace()) > tol * scale * 1e3)
        throw ValidationError("lie_closure: generator not traceless");
      break;
    case AmbientAlgebra::gl_real:
      if (g.imag().norm() > tol * scale * 1e3)
        throw ValidationError("lie_closure: generator not real");
      break;
    case AmbientAlgebra::affine_real: {
      if (g.imag().norm() > tol * scale * 1e3)
        throw ValidationError("lie_closure: generator not real");
      if (g.row(g.rows() - 1).norm() > tol * scale * 1e3)
        throw ValidationError("lie_closure: generator not in the homogeneous embedding");
      break;
    }
  }
}

// Two-pass modified Gram-Schmidt; returns the residual norm relative to the
// candidate's own norm and appends the normalized residual when independent.
bool absorb(std::vector<CMat>& basis, const CMat& candidate, double tol) {
  const double cn = candidate.norm();
  if (cn < 1e-14) return false;
  CMat r = candidate;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) r -= re_inner(b, r) * b;
  if (r.norm() <= tol * cn) return false;
  basis.push_back(r / r.norm());
  return true;
}

}  // namespace

LieClosureResult lie_closure(const std::vector<CMat>& generators,
                             AmbientAlgebra algebra, double tol) {
  if (generators.empty()) throw ValidationError("lie_closure: no generators");
  const int rows = static_cast<int>(generators.front().rows());
  for (const auto& g : generators) {
    if (g.rows() != rows || g.cols() != rows)
      throw ValidationError("lie_closure: generator shape mismatch");
    validate_generator(g, algebra, tol);
  }

  const int target = ambient_dim(algebra, rows);
  const int depth_cap = 2 * rows * rows;

  LieClosureResult result;
  std::vector<CMat> gen_basis;  // orthonormalized generators, bracket partners
  for (const auto& g : generators) {
    if (absorb(result.basis, g, tol)) gen_basis.push_back(result.basis.back());
  }

  std::deque<CMat> frontier(result.basis.begin(), result.basis.end());
  while (!frontier.empty() && result.depth < depth_cap &&
         static_cast<int>(result.basis.size()) < target) {
    ++result.depth;
    std::deque<CMat> next;
    for (const auto& x : frontier) {
      for (const auto& g : gen_basis) {
        if (absorb(result.basis, comm(x, g), tol)) next.push_back(result.basis.back());
        if (static_cast<int>(result.basis.size()) >= target) break;
      }
      if (static_cast<int>(result.basis.size()) >= target) break;
    }
    frontier = std::move(next);
  }
  result.dim = static_cast<int>(result.basis.size());
  result.saturated = frontier.empty() || result.dim >= target;
  return result;
}

CMat affine_embed(const RMat& m, const RVec& v) {
  const int n = static_cast<int>(m.rows());
  CMat e = CMat::Zero(n + 1, n + 1);
  e.topLeftCorner(n, n) = m.cast<Complex>();
  e.topRightCorner(n, 1) = v.cast<Complex>();
  return e;
}

ControllabilityResult is_operator_controllable(const CMat& h0, const CMat& h1) {
  const int n = static_cast<int>(h0.rows());
  auto traceless = [n](const CMat& h) {
    return h - (h.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
  };
  ControllabilityResult res;
  res.closure = lie_closure({-kI * traceless(h0), -kI * traceless(h1)},
                            AmbientAlgebra::su);
  res.controllable = (res.closure.dim == n * n - 1);
  return res;
}

SpectralStructure spectral_structure(const CMat& h0, double tol) {
  if (!is_hermitian(h0)) throw ValidationError("spectral_structure: not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h0));
  SpectralStructure s;
  s.energies = es.eigenvalues();
  const int n = static_cast<int>(s.energies.size());
  const double scale =
      std::max({std::abs(s.energies.minCoeff()), std::abs(s.energies.maxCoeff()), 1e-300});
  const double gap = tol * scale;

  s.regular = true;
  for (int i = 0; i + 1 < n; ++i)
    if (s.energies(i + 1) - s.energies(i) <= gap) s.regular = false;

  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) s.bohr.push_back(s.energies(j) - s.energies(k));

  std::vector<double> sorted = s.bohr;
  std::sort(sorted.begin(), sorted.end());
  s.strongly_regular = true;
  for (size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1] - sorted[i] <= gap) s.strongly_regular = false;
  return s;
}

namespace {

bool edges_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [j, k] : edges) {
    adj[j].push_back(k);
    adj[k].push_back(j);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        queue.push_back(w);
      }
  }
  return count == n;
}

}  // namespace

GraphResult graph_connected(const CMat& h1, double threshold) {
  const int n = static_cast<int>(h1.rows());
  GraphResult res;
  res.graph.nodes = n;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (std::abs(h1(j, k)) > threshold) res.graph.edges.emplace_back(j, k);
  res.connected = edges_connected(n, res.graph.edges);
  return res;
}

SufficientCertificate sufficient_controllability(const CMat& h0, const CMat& h1,
                                                 double edge_threshold, double tol) {
  const int n = static_cast<int>(h0.rows());
  if (!is_hermitian(h0) || !is_hermitian(h1))
    throw ValidationError("sufficient_controllability: inputs must be Hermitian");

  SufficientCertificate cert;
  CMat h1b = h1;
  RVec energies;
  CMat offdiag = h0;
  offdiag.diagonal().setZero();
  if (offdiag.norm() > 1e-12 * std::max(1.0, h0.norm())) {
    // Work in the eigenbasis of H0.
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h0));
    energies = es.eigenvalues();
    h1b = es.eigenvectors().adjoint() * h1 * es.eigenvectors();
    cert.basis_changed = true;
  } else {
    energies = h0.diagonal().real();
  }

  SpectralStructure spectral = spectral_structure(energies.cast<Complex>().asDiagonal(), tol);
  cert.strongly_regular = spectral.strongly_regular;

  const double thresh = edge_threshold * std::max(1.0, h1b.cwiseAbs().maxCoeff());
  GraphResult graph = graph_connected(h1b, thresh);
  cert.graph_is_connected = graph.connected;

  const double scale =
      std::max({std::abs(energies.minCoeff()), std::abs(energies.maxCoeff()), 1e-300});
  auto bohr = [&](int j, int k) { return std::abs(energies(j) - energies(k)); };

  // Reading (a): keep the edges whose Bohr frequency is unique among all
  // level pairs, and ask that subgraph to stay connected.
  std::vector<std::pair<int, int>> unique_edges;
  for (auto [j, k] : graph.graph.edges) {
    bool unique = true;
    for (int l = 0; l < n && unique; ++l)
      for (int m = l + 1; m < n && unique; ++m) {
        if (l == j && m == k) continue;
        if (std::abs(bohr(j, k) - bohr(l, m)) <= tol * scale) unique = false;
      }
    if (unique) unique_edges.push_back({j, k});
  }
  cert.unique_bohr_subgraph_connected = edges_connected(n, unique_edges);

  // Reading (b): Bohr frequencies pairwise distinct on the graph edges.
  bool edge_regular = true;
  for (size_t a = 0; a < graph.graph.edges.size() && edge_regular; ++a)
    for (size_t b = a + 1; b < graph.graph.edges.size() && edge_regular; ++b) {
      auto [j, k] = graph.graph.edges[a];
      auto [l, m] = graph.graph.edges[b];
      if (std::abs(bohr(j, k) - bohr(l, m)) <= tol * scale) edge_regular = false;
    }
  cert.edge_restricted_regular_connected = edge_regular && graph.connected;

  if (cert.strongly_regular) cert.checks_passed.push_back("h0_strongly_regular");
  if (cert.graph_is_connected) cert.checks_passed.push_back("coupling_graph_connected");
  if (cert.unique_bohr_subgraph_connected)
    cert.checks_passed.push_back("unique_bohr_subgraph_connected");
  if (cert.edge_restricted_regular_connected)
    cert.checks_passed.push_back("edge_restricted_regular_connected");

  if (!graph.connected) {
    // Necessary condition fails; no sufficient test can apply.
    cert.verdict = SufficientVerdict::inconclusive;
  } else if (cert.strongly_regular) {
    cert.verdict = SufficientVerdict::controllable_by_thm5;
  } else if (cert.unique_bohr_subgraph_connected ||
             cert.edge_restricted_regular_connected) {
    cert.verdict = SufficientVerdict::controllable_by_weakened_test;
  }
  return cert;
}

InvarianceResult invariance_check(const LindbladModel& model,
                                  const SubspaceSplit& split) {
  const int n = model.dim();
  const int m = split.dim_s;
  if (split.basis.rows() != n || split.basis.cols() != n || m < 1 || m >= n)
    throw ValidationError("invariance_check: bad split");
  if (!is_unitary(split.basis))
    throw ValidationError("invariance_check: split basis not unitary");

  const CMat h = split.basis.adjoint() * model.hamiltonian() * split.basis;
  InvarianceResult res;
  CMat acc = CMat::Zero(m, n - m);
  for (const auto& l : model.noise_ops()) {
    const CMat lb = split.basis.adjoint() * l * split.basis;
    res.noise_q_residual =
        std::max(res.noise_q_residual, lb.bottomLeftCorner(n - m, m).norm());
    acc += lb.topLeftCorner(m, m).adjoint() * lb.topRightCorner(m, n - m);
  }
  res.hamiltonian_residual = (kI * h.topRightCorner(m, n - m) - 0.5 * acc).norm();
  res.invariant = res.noise_q_residual <= 1e-8 && res.hamiltonian_residual <= 1e-8;
  return res;
}

SteadyStates steady_states(const LindbladModel& model) {
  const CMat s = dynamics::lindblad_superop(model);
  Eigen::JacobiSVD<CMat> svd(s, Eigen::ComputeFullV);
  const RVec sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(sv.maxCoeff(), 1e-300);

  SteadyStates res;
  const int dim = model.dim();
  std::vector<CMat> herm;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) continue;
    ++res.kernel_dim;
    const CMat x = unvec(svd.matrixV().col(i), dim, dim);
    herm.push_back(hermitize(x));
    herm.push_back(hermitize(-kI * (x - x.adjoint()) * 0.5));
  }
  // Orthonormalize the Hermitian parts (real Hilbert-Schmidt inner product).
  for (const auto& x : herm) absorb(res.hermitian_basis, x, 1e-9);

  if (res.kernel_dim == 1 && !res.hermitian_basis.empty()) {
    CMat x = res.hermitian_basis.front();
    const double tr = x.trace().real();
    if (std::abs(tr) > 1e-9) {
      res.unique_state = DensityMatrix(hermitize(x / tr));
    }
  }
  return res;
}

GasResult gas_check(const LindbladModel& model) {
  SteadyStates ss = steady_states(model);
  GasResult res;
  res.kernel_dim = ss.kernel_dim;
  res.gas = (ss.kernel_dim == 1) && ss.unique_state.has_value();
  res.state = ss.unique_state;
  return res;
}

AccessibilityResult affine_accessibility(const LindbladModel& model,
                                         const std::vector<CMat>& control_hams) {
  const int dim = model.dim();
  const core::OperatorBasis basis = core::gell_mann_basis(dim);
  const int n = static_cast<int>(basis.elements.size());

  RMat drift = RMat::Zero(n, n);
  RVec g = RVec::Zero(n);
  for (int j = 0; j < n; ++j) {
    g(j) = (basis.elements[j] *
            dynamics::apply_generator(model, CMat::Identity(dim, dim)))
               .trace().real() / dim;
    for (int k = 0; k < n; ++k)
      drift(j, k) = (basis.elements[j] *
                     dynamics::apply_generator(model, basis.elements[k]))
                        .trace().real();
  }
  std::vector<RMat> rotations;
  for (const auto& hc : control_hams) {
    RMat b = RMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        b(j, k) = (basis.elements[j] * (-kI * comm(hc, basis.elements[k])))
                      .trace().real();
    rotations.push_back(b);
  }

  AccessibilityResult res;
  res.unital = g.norm() <= 1e-9 * std::max(1.0, drift.norm());
  std::vector<CMat> gens;
  if (res.unital) {
    gens.push_back(drift.cast<Complex>());
    for (const auto& b : rotations) gens.push_back(b.cast<Complex>());
    res.closure = lie_closure(gens, AmbientAlgebra::gl_real);
    res.required_dim = n * n;
  } else {
    gens.push_back(affine_embed(drift, g));
    for (const auto& b : rotations) gens.push_back(affine_embed(b, RVec::Zero(n)));
    res.closure = lie_closure(gens, AmbientAlgebra::affine_real);
    res.required_dim = n * n + n;
  }
  res.closure_dim = res.closure.dim;
  res.verdict = (res.closure_dim == res.required_dim) ? AccessVerdict::accessible
                                                      : AccessVerdict::inconclusive;
  res.static_facts = {
      "never small-time locally controllable (dissipation cannot be reversed)",
      "never controllable in finite time",
      "never controllable in D(H) when the dissipation is unital",
  };
  return res;
}

bool majorizes(const RVec& spec_a, const RVec& spec_b, double tol) {
  if (spec_a.size() != spec_b.size())
    throw ValidationError("majorizes: length mismatch");
  auto check = [](const RVec& v) {
    if (v.minCoeff() < -1e-9 || std::abs(v.sum() - 1.0) > 1e-9)
      throw ValidationError("majorizes: spectra must be nonnegative and sum to 1");
  };
  check(spec_a);
  check(spec_b);
  std::vector<double> a(spec_a.data(), spec_a.data() + spec_a.size());
  std::vector<double> b(spec_b.data(), spec_b.data() + spec_b.size());
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  double pa = 0, pb = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    pa += a[k];
    pb += b[k];
    if (pb > pa + tol) return false;
  }
  return true;
}

RVec sorted_spectrum(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(a));
  RVec ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
  return ev;
}

}  // namespace qctl::analysis
