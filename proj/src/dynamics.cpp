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

#include "qctl/dynamics.hpp"

#include <cmath>

namespace qctl::dynamics {

using core::DensityMatrix;
using core::Observable;
using core::StateVector;

ControlProblem::ControlProblem(CMat drift, std::vector<CMat> controls,
                               double total_time, int n_slices, RMat amplitudes)
    : drift_(std::move(drift)),
      controls_(std::move(controls)),
      total_time_(total_time),
      n_slices_(n_slices),
      u_(std::move(amplitudes)) {
  const int n = static_cast<int>(drift_.rows());
  if (n == 0 || drift_.cols() != n) throw ValidationError("ControlProblem: drift not square");
  if (!is_hermitian(drift_)) throw ValidationError("ControlProblem: drift not Hermitian");
  drift_ = hermitize(drift_);
  drift_ -= (drift_.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
  for (const auto& hc : controls_) {
    if (hc.rows() != n || hc.cols() != n)
      throw ValidationError("ControlProblem: control dimension mismatch");
    if (!is_hermitian(hc)) throw ValidationError("ControlProblem: control not Hermitian");
  }
  if (n_slices_ < 1 || !(total_time_ > 0))
    throw ValidationError("ControlProblem: need n_slices >= 1 and T > 0");
  if (u_.rows() != static_cast<int>(controls_.size()) || u_.cols() != n_slices_)
    throw ValidationError("ControlProblem: amplitude grid must be n_controls x n_slices");
  if (!u_.allFinite()) throw ValidationError("ControlProblem: non-finite amplitude");
}

void ControlProblem::set_amplitudes(RMat u) {
  if (u.rows() != u_.rows() || u.cols() != u_.cols())
    throw ValidationError("set_amplitudes: shape mismatch");
  if (!u.allFinite()) throw ValidationError("set_amplitudes: non-finite amplitude");
  u_ = std::move(u);
}

CMat ControlProblem::slice_hamiltonian(int slice) const {
  CMat h = drift_;
  for (int j = 0; j < n_controls(); ++j) h += u_(j, slice) * controls_[j];
  return h;
}

LindbladModel::LindbladModel(CMat hamiltonian, std::vector<CMat> noise_ops)
    : h_(std::move(hamiltonian)), ls_(std::move(noise_ops)) {
  const int n = static_cast<int>(h_.rows());
  if (n == 0 || h_.cols() != n) throw ValidationError("LindbladModel: H not square");
  if (!is_hermitian(h_)) throw ValidationError("LindbladModel: H not Hermitian");
  h_ = hermitize(h_);
  for (const auto& l : ls_)
    if (l.rows() != n || l.cols() != n)
      throw ValidationError("LindbladModel: noise operator dimension mismatch");
}

LindbladModel LindbladModel::from_gks(CMat hamiltonian, const CMat& gks,
                                      const core::OperatorBasis& basis) {
  LindbladModel m(std::move(hamiltonian), gks_to_lindblad(gks, basis));
  m.gks_ = hermitize(gks);
  m.basis_ = basis;
  return m;
}

CMat dissipator(const CMat& l, const CMat& rho) {
  const CMat ldl = l.adjoint() * l;
  return l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

CMat apply_generator(const LindbladModel& model, const CMat& rho) {
  CMat out = -kI * comm(model.hamiltonian(), rho);
  for (const auto& l : model.noise_ops()) out += dissipator(l, rho);
  return out;
}

std::vector<StateVector> propagate_state(const ControlProblem& cp,
                                         const StateVector& psi0) {
  if (psi0.dim() != cp.dim()) throw ValidationError("propagate_state: dimension mismatch");
  std::vector<StateVector> out;
  out.reserve(cp.n_slices() + 1);
  out.push_back(psi0);
  CVec psi = psi0.amplitudes();
  for (int k = 0; k < cp.n_slices(); ++k) {
    psi = expi(cp.slice_hamiltonian(k), cp.dt()) * psi;
    out.emplace_back(psi);
  }
  return out;
}

std::vector<CMat> propagator(const ControlProblem& cp) {
  std::vector<CMat> out;
  out.reserve(cp.n_slices() + 1);
  CMat u = CMat::Identity(cp.dim(), cp.dim());
  out.push_back(u);
  for (int k = 0; k < cp.n_slices(); ++k) {
    u = expi(cp.slice_hamiltonian(k), cp.dt()) * u;
    out.push_back(u);
  }
  return out;
}

std::vector<DensityMatrix> evolve_liouville(const ControlProblem& cp,
                                            const DensityMatrix& rho0) {
  std::vector<DensityMatrix> out;
  out.reserve(cp.n_slices() + 1);
  for (const auto& u : propagator(cp))
    out.push_back(DensityMatrix(u * rho0.matrix() * u.adjoint()));
  return out;
}

double heisenberg_expectation(const ControlProblem& cp, const DensityMatrix& rho0,
                              const Observable& y, double t) {
  if (t < 0 || t > cp.total_time() + 1e-12)
    throw ValidationError("heisenberg_expectation: t outside [0, T]");
  const double dt = cp.dt();
  CMat u = CMat::Identity(cp.dim(), cp.dim());
  int full = static_cast<int>(std::floor(t / dt + 1e-12));
  full = std::min(full, cp.n_slices());
  for (int k = 0; k < full; ++k) u = expi(cp.slice_hamiltonian(k), dt) * u;
  const double rem = t - full * dt;
  if (rem > 1e-12 && full < cp.n_slices())
    u = expi(cp.slice_hamiltonian(full), rem) * u;
  const CMat y_heis = u.adjoint() * y.matrix() * u;
  return (y_heis * rho0.matrix()).trace().real();
}

RMat bloch_generator(const CMat& h) {
  if (h.rows() != 2 || h.cols() != 2) throw ValidationError("bloch_generator: N != 2");
  if (!is_hermitian(h)) throw ValidationError("bloch_generator: not Hermitian");
  if (std::abs(h.trace()) > 1e-9 * std::max(1.0, h.norm()))
    throw ValidationError("bloch_generator: input not traceless");
  const double hx = (h * core::pauli('x').matrix()).trace().real() / 2.0;
  const double hy = (h * core::pauli('y').matrix()).trace().real() / 2.0;
  const double hz = (h * core::pauli('z').matrix()).trace().real() / 2.0;
  // Structure constants of su(2) in the {-i sigma_j} basis.
  RMat bx = RMat::Zero(3, 3), by = RMat::Zero(3, 3), bz = RMat::Zero(3, 3);
  bx(1, 2) = -2; bx(2, 1) = 2;
  by(0, 2) = 2;  by(2, 0) = -2;
  bz(0, 1) = -2; bz(1, 0) = 2;
  return hx * bx + hy * by + hz * bz;
}

std::vector<CMat> gks_to_lindblad(const CMat& gks, const core::OperatorBasis& basis) {
  const int m = static_cast<int>(gks.rows());
  if (m != static_cast<int>(basis.elements.size()))
    throw ValidationError("gks_to_lindblad: GKS size does not match basis");
  if (!is_hermitian(gks)) throw ValidationError("gks_to_lindblad: GKS not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(gks));
  const RVec d = es.eigenvalues();
  const double scale = std::max(std::abs(d.maxCoeff()), 1e-300);
  if (d.minCoeff() < -1e-9 * scale)
    throw ValidationError("gks_to_lindblad: GKS not positive semidefinite");
  std::vector<CMat> ls;
  for (int k = 0; k < m; ++k) {
    if (d(k) <= 1e-12 * scale) continue;
    CMat l = CMat::Zero(basis.dim, basis.dim);
    for (int j = 0; j < m; ++j) l += es.eigenvectors()(j, k) * basis.elements[j];
    ls.push_back(std::sqrt(d(k)) * l);
  }
  return ls;
}

CMat lindblad_superop(const LindbladModel& model) {
  return core::superop_matrix(
      [&model](const CMat& x) { return apply_generator(model, x); }, model.dim());
}

namespace {

std::vector<DensityMatrix> propagate_rk4(const LindbladModel& model,
                                         const DensityMatrix& rho0,
                                         double total_time, int n_steps) {
  std::vector<DensityMatrix> out;
  out.reserve(n_steps + 1);
  out.push_back(rho0);
  const double h = total_time / n_steps;
  CMat rho = rho0.matrix();
  for (int k = 0; k < n_steps; ++k) {
    const CMat k1 = apply_generator(model, rho);
    const CMat k2 = apply_generator(model, rho + 0.5 * h * k1);
    const CMat k3 = apply_generator(model, rho + 0.5 * h * k2);
    const CMat k4 = apply_generator(model, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = hermitize(rho);
    out.push_back(DensityMatrix(rho / rho.trace().real()));
  }
  return out;
}

}  // namespace

std::vector<DensityMatrix> mme_propagate(const LindbladModel& model,
                                         const DensityMatrix& rho0,
                                         double total_time, int n_steps) {
  if (rho0.dim() != model.dim()) throw ValidationError("mme_propagate: dimension mismatch");
  if (n_steps < 1 || !(total_time >= 0)) throw ValidationError("mme_propagate: bad grid");
  if (model.dim() > 8) return propagate_rk4(model, rho0, total_time, n_steps);

  const CMat step = expm(lindblad_superop(model) * (total_time / n_steps));
  std::vector<DensityMatrix> out;
  out.reserve(n_steps + 1);
  out.push_back(rho0);
  CVec v = vec_stack(rho0.matrix());
  for (int k = 0; k < n_steps; ++k) {
    v = step * v;
    CMat rho = hermitize(unvec(v, model.dim(), model.dim()));
    out.push_back(DensityMatrix(rho / rho.trace().real()));
  }
  return out;
}

std::vector<DensityMatrix> mme_propagate_controlled(
    const LindbladModel& model, const std::vector<CMat>& control_hams,
    const RMat& amplitudes, double total_time, const DensityMatrix& rho0) {
  const int n_slices = static_cast<int>(amplitudes.cols());
  if (static_cast<int>(control_hams.size()) != amplitudes.rows())
    throw ValidationError("mme_propagate_controlled: control/amplitude mismatch");
  if (n_slices < 1 || !(total_time > 0))
    throw ValidationError("mme_propagate_controlled: bad grid");
  const double dt = total_time / n_slices;
  std::vector<DensityMatrix> out;
  out.reserve(n_slices + 1);
  out.push_back(rho0);
  CVec v = vec_stack(rho0.matrix());
  for (int k = 0; k < n_slices; ++k) {
    CMat h = model.hamiltonian();
    for (size_t j = 0; j < control_hams.size(); ++j)
      h += amplitudes(static_cast<int>(j), k) * control_hams[j];
    LindbladModel slice(h, model.noise_ops());
    v = expm(lindblad_superop(slice) * dt) * v;
    CMat rho = hermitize(unvec(v, model.dim(), model.dim()));
    out.push_back(DensityMatrix(rho / rho.trace().real()));
  }
  return out;
}

AffineBlochForm bloch_affine(const LindbladModel& model) {
  if (model.dim() != 2) throw ValidationError("bloch_affine: N != 2");
  const CMat sig[3] = {core::pauli('x').matrix(), core::pauli('y').matrix(),
                       core::pauli('z').matrix()};
  AffineBlochForm form;
  form.m = RMat::Zero(3, 3);
  form.g = RVec::Zero(3);
  for (int j = 0; j < 3; ++j) {
    form.g(j) = 0.5 * (sig[j] * apply_generator(model, CMat::Identity(2, 2))).trace().real();
    for (int k = 0; k < 3; ++k)
      form.m(j, k) = 0.5 * (sig[j] * apply_generator(model, sig[k])).trace().real();
  }
  return form;
}

RVec affine_fixed_point(const AffineBlochForm& form) {
  return form.m.fullPivLu().solve(-form.g);
}

core::Observable bipartite_hamiltonian(
    const CMat& hs, const CMat& he,
    const std::vector<std::pair<CMat, CMat>>& couplings,
    bool require_hermitian_terms) {
  const int ns = static_cast<int>(hs.rows());
  const int ne = static_cast<int>(he.rows());
  CMat h = kron(hs, CMat::Identity(ne, ne)) + kron(CMat::Identity(ns, ns), he);
  for (const auto& [s, e] : couplings) {
    if (s.rows() != ns || e.rows() != ne)
      throw ValidationError("bipartite_hamiltonian: coupling dimension mismatch");
    if (require_hermitian_terms && (!is_hermitian(s) || !is_hermitian(e)))
      throw ValidationError("bipartite_hamiltonian: non-Hermitian coupling term");
    h += kron(s, e);
  }
  return core::Observable(h);  // validates Hermiticity of the total
}

LindbladModel canonicalize(const LindbladModel& model) {
  const int n = model.dim();
  CMat h = model.hamiltonian();
  std::vector<CMat> ls;
  for (const auto& l : model.noise_ops()) {
    const Complex c = l.trace() / static_cast<double>(n);
    const CMat a = l - c * CMat::Identity(n, n);
    h += 0.5 * kI * (std::conj(c) * a - c * a.adjoint());
    ls.push_back(a);
  }
  return LindbladModel(hermitize(h), ls);
}

}  // namespace qctl::dynamics
