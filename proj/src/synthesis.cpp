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

#include "qctl/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "qctl/rng.hpp"

namespace qctl::synthesis {

using core::DensityMatrix;

LyapunovDesign::LyapunovDesign(DensityMatrix target_in, CMat h0_in, CMat h1_in,
                               double gain_in)
    : target(std::move(target_in)),
      h0(std::move(h0_in)),
      h1(std::move(h1_in)),
      gain(gain_in) {
  if (!(gain > 0)) throw ValidationError("LyapunovDesign: gain must be positive");
  if (!is_hermitian(h0) || !is_hermitian(h1))
    throw ValidationError("LyapunovDesign: Hamiltonians must be Hermitian");
  if (comm(-kI * h0, target.matrix()).norm() > 1e-8)
    throw ValidationError("LyapunovDesign: target is not a fixed point of the drift");
}

double lyapunov_value(const DensityMatrix& rho, const DensityMatrix& target) {
  return 0.5 * (target.matrix() - rho.matrix()).squaredNorm();
}

double lyapunov_control(const CMat& rho, const CMat& target, const CMat& h1,
                        double gain) {
  return -gain * (comm(-kI * h1, target) * rho).trace().real();
}

RankConditionResult lyapunov_rank_condition(const CMat& h0, const CMat& h1,
                                            const DensityMatrix& target,
                                            int l_max) {
  if (comm(-kI * h0, target.matrix()).norm() > 1e-8)
    throw ValidationError("lyapunov_rank_condition: target must commute with H0");
  const int n = target.dim();

  // Tangent dimension of the isospectral leaf: N^2 - sum_i j_i^2 with j_i
  // the eigenvalue multiplicities of the target.
  Eigen::SelfAdjointEigenSolver<CMat> es(target.matrix());
  const RVec ev = es.eigenvalues();
  int tangent = n * n;
  {
    int i = 0;
    while (i < n) {
      int j = i + 1;
      while (j < n && ev(j) - ev(j - 1) <= 1e-8) ++j;
      tangent -= (j - i) * (j - i);
      i = j;
    }
  }

  std::vector<CMat> span;
  CMat x = comm(-kI * h1, target.matrix());
  for (int l = 0; l <= l_max; ++l) {
    const double xn = x.norm();
    if (xn > 1e-14) {
      CMat r = x / xn;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : span) r -= (b.adjoint() * r).trace().real() * b;
      if (r.norm() > 1e-9) span.push_back(r / r.norm());
    }
    x = comm(-kI * h0, x);
  }

  RankConditionResult res;
  res.achieved_dim = static_cast<int>(span.size());
  res.tangent_dim = tangent;
  res.satisfied = res.achieved_dim >= tangent;
  return res;
}

LyapunovTrajectory lyapunov_simulate(const LyapunovDesign& design,
                                     const DensityMatrix& rho0,
                                     double total_time, int n_steps) {
  if (n_steps < 1 || !(total_time > 0))
    throw ValidationError("lyapunov_simulate: bad grid");
  const double h = total_time / n_steps;
  const CMat& rd = design.target.matrix();

  auto field = [&](const CMat& rho) {
    const double u = lyapunov_control(rho, rd, design.h1, design.gain);
    return (-kI * comm(design.h0 + u * design.h1, rho)).eval();
  };

  LyapunovTrajectory out;
  out.dt = h;
  out.states.push_back(rho0);
  out.v.push_back(lyapunov_value(rho0, design.target));
  CMat rho = rho0.matrix();
  for (int k = 0; k < n_steps; ++k) {
    out.u.push_back(lyapunov_control(rho, rd, design.h1, design.gain));
    const CMat k1 = field(rho);
    const CMat k2 = field(rho + 0.5 * h * k1);
    const CMat k3 = field(rho + 0.5 * h * k2);
    const CMat k4 = field(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = hermitize(rho);
    rho /= rho.trace().real();
    DensityMatrix state(rho);
    out.states.push_back(state);
    out.v.push_back(lyapunov_value(state, design.target));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double fluence(const RMat& u) { return u.squaredNorm(); }

std::vector<CMat> slice_hamiltonians(const dynamics::ControlProblem& cp,
                                     const RMat& u) {
  std::vector<CMat> hs(cp.n_slices());
  for (int k = 0; k < cp.n_slices(); ++k) {
    CMat h = cp.drift();
    for (int j = 0; j < cp.n_controls(); ++j) h += u(j, k) * cp.controls()[j];
    hs[k] = h;
  }
  return hs;
}

void check_problem(const GrapeProblem& p, const RMat& u) {
  if (u.rows() != p.cp.n_controls() || u.cols() != p.cp.n_slices())
    throw ValidationError("grape: amplitude grid shape mismatch");
  if (p.objective == GrapeObjective::observable) {
    if (p.psi0.size() != p.cp.dim())
      throw ValidationError("grape: psi0 dimension mismatch");
    if (!is_hermitian(p.target))
      throw ValidationError("grape: target observable not Hermitian");
  } else if (!is_unitary(p.target)) {
    throw ValidationError("grape: target unitary is not unitary");
  }
}

double objective_term(const GrapeProblem& p, const RMat& u) {
  const auto hs = slice_hamiltonians(p.cp, u);
  const double dt = p.cp.dt();
  if (p.objective == GrapeObjective::observable) {
    CVec psi = p.psi0;
    for (const auto& h : hs) psi = expi(h, dt) * psi;
    return (psi.adjoint() * p.target * psi)(0).real();
  }
  CMat uprop = CMat::Identity(p.cp.dim(), p.cp.dim());
  for (const auto& h : hs) uprop = expi(h, dt) * uprop;
  const Complex phi = (p.target.adjoint() * uprop).trace();
  const double n = p.cp.dim();
  return std::norm(phi) / (n * n);
}

}  // namespace

double grape_cost(const GrapeProblem& p, const RMat& u) {
  check_problem(p, u);
  return objective_term(p, u) - p.fluence_weight * fluence(u);
}

RMat grape_gradient(const GrapeProblem& p, const RMat& u) {
  check_problem(p, u);
  const int ns = p.cp.n_slices();
  const int nc = p.cp.n_controls();
  const double dt = p.cp.dt();
  const auto hs = slice_hamiltonians(p.cp, u);

  std::vector<CMat> us(ns);
  // Frechet derivatives of each slice exponential in each control direction.
  std::vector<std::vector<CMat>> dus(ns, std::vector<CMat>(nc));
  for (int k = 0; k < ns; ++k) {
    const CMat a = -kI * dt * hs[k];
    for (int j = 0; j < nc; ++j) {
      auto [e, d] = expm_frechet(a, -kI * dt * p.cp.controls()[j]);
      us[k] = e;
      dus[k][j] = d;
    }
    if (nc == 0) us[k] = expm(a);
  }

  RMat grad = RMat::Zero(nc, ns);
  if (p.objective == GrapeObjective::observable) {
    std::vector<CVec> fwd(ns + 1);
    fwd[0] = p.psi0;
    for (int k = 0; k < ns; ++k) fwd[k + 1] = us[k] * fwd[k];
    // Costate: chi(T) = M psi(T), propagated backward with U^dag.
    CVec chi = p.target * fwd[ns];
    for (int k = ns - 1; k >= 0; --k) {
      for (int j = 0; j < nc; ++j)
        grad(j, k) = 2.0 * (chi.adjoint() * dus[k][j] * fwd[k])(0).real();
      chi = us[k].adjoint() * chi;
    }
  } else {
    const int n = p.cp.dim();
    std::vector<CMat> fwd(ns + 1);
    fwd[0] = CMat::Identity(n, n);
    for (int k = 0; k < ns; ++k) fwd[k + 1] = us[k] * fwd[k];
    std::vector<CMat> bwd(ns + 1);
    bwd[ns] = CMat::Identity(n, n);
    for (int k = ns - 1; k >= 0; --k) bwd[k] = bwd[k + 1] * us[k];
    const Complex phi = (p.target.adjoint() * fwd[ns]).trace();
    for (int k = 0; k < ns; ++k)
      for (int j = 0; j < nc; ++j) {
        const Complex dphi =
            (p.target.adjoint() * bwd[k + 1] * dus[k][j] * fwd[k]).trace();
        grad(j, k) = 2.0 * (std::conj(phi) * dphi).real() / (n * n);
      }
  }
  grad -= 2.0 * p.fluence_weight * u;
  return grad;
}

GrapeResult grape_optimize(const GrapeProblem& p, const RMat& u0) {
  check_problem(p, u0);
  GrapeResult res;
  res.u = u0;
  double j = grape_cost(p, res.u);
  res.j_history.push_back(j);

  bool grad_small = false;
  for (int iter = 0; iter < p.max_iters; ++iter) {
    const RMat g = grape_gradient(p, res.u);
    const double gnorm2 = g.squaredNorm();
    if (std::sqrt(gnorm2) < p.grad_tol) {
      grad_small = true;
      break;
    }
    // Backtracking Armijo line search, monotone ascent enforced.
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-14) {
      const RMat trial = res.u + step * g;
      const double jt = grape_cost(p, trial);
      if (jt >= j + 1e-4 * step * gnorm2) {
        res.u = trial;
        j = jt;
        res.j_history.push_back(j);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at numerical precision
  }
  res.converged = grad_small ||
                  std::sqrt(grape_gradient(p, res.u).squaredNorm()) < p.grad_tol;
  res.final_cost = j;
  res.objective_term = objective_term(p, res.u);
  return res;
}

GrapeResult grape_optimize_seeded(const GrapeProblem& p, std::uint64_t seed,
                                  double amplitude) {
  CounterRng rng(seed);
  RMat u0(p.cp.n_controls(), p.cp.n_slices());
  for (int j = 0; j < u0.rows(); ++j)
    for (int k = 0; k < u0.cols(); ++k)
      u0(j, k) = amplitude * (2.0 * rng.uniform() - 1.0);
  return grape_optimize(p, u0);
}

// ---------------------------------------------------------------------------

std::vector<CMat> pauli_group() {
  return {CMat::Identity(2, 2), core::pauli('x').matrix(),
          core::pauli('y').matrix(), core::pauli('z').matrix()};
}

CMat group_average(const std::vector<CMat>& group, const CMat& s) {
  if (group.empty()) throw ValidationError("group_average: empty group");
  CMat acc = CMat::Zero(s.rows(), s.cols());
  for (const auto& g : group) {
    if (!is_unitary(g)) throw ValidationError("group_average: non-unitary element");
    acc += g.adjoint() * s * g;
  }
  return acc / static_cast<double>(group.size());
}

CMat dd_average_hamiltonian(const DDProtocol& protocol) {
  const auto& m = protocol.model;
  const int ns = static_cast<int>(m.hs.rows());
  const int ne = static_cast<int>(m.he.rows());
  CMat h = kron(group_average(protocol.group, m.hs), CMat::Identity(ne, ne)) +
           kron(CMat::Identity(ns, ns), m.he);
  for (const auto& [s, e] : m.couplings)
    h += kron(group_average(protocol.group, s), e);
  return h;
}

std::vector<DDSample> dd_simulate(const DDProtocol& protocol,
                                  const CMat& joint_rho0, double total_time) {
  const auto& m = protocol.model;
  const int ns = static_cast<int>(m.hs.rows());
  const int ne = static_cast<int>(m.he.rows());
  if (joint_rho0.rows() != ns * ne)
    throw ValidationError("dd_simulate: joint state dimension mismatch");
  if (protocol.group.empty() || !(protocol.cycle_time > 0))
    throw ValidationError("dd_simulate: empty group or bad cycle time");
  const double cycles_frac = total_time / protocol.cycle_time;
  const int n_cycles = static_cast<int>(std::llround(cycles_frac));
  if (std::abs(cycles_frac - n_cycles) > 1e-9 || n_cycles < 1)
    throw ValidationError("dd_simulate: total_time is not a multiple of the cycle time");

  const CMat h_tot =
      dynamics::bipartite_hamiltonian(m.hs, m.he, m.couplings, false).matrix();
  const CMat h_free = kron(m.hs, CMat::Identity(ne, ne)) +
                      kron(CMat::Identity(ns, ns), m.he);
  const int ng = static_cast<int>(protocol.group.size());
  const double dt = protocol.cycle_time / ng;

  // Toggled-frame slice propagators (exact, no Magnus truncation).
  CMat cycle = CMat::Identity(ns * ne, ns * ne);
  for (int j = 0; j < ng; ++j) {
    if (!is_unitary(protocol.group[j]))
      throw ValidationError("dd_simulate: non-unitary group element");
    const CMat gj = kron(protocol.group[j], CMat::Identity(ne, ne));
    cycle = expi(gj.adjoint() * h_tot * gj, dt) * cycle;
  }

  std::vector<DDSample> out;
  CMat u_dd = CMat::Identity(ns * ne, ns * ne);
  for (int k = 1; k <= n_cycles; ++k) {
    u_dd = cycle * u_dd;
    const double t = k * protocol.cycle_time;
    const CMat u_plain = expi(h_tot, t);
    const CMat u_free = expi(h_free, t);
    const CMat ref = core::partial_trace(u_free * joint_rho0 * u_free.adjoint(),
                                         ns, ne, 1);
    const CMat with_dd =
        core::partial_trace(u_dd * joint_rho0 * u_dd.adjoint(), ns, ne, 1);
    const CMat without =
        core::partial_trace(u_plain * joint_rho0 * u_plain.adjoint(), ns, ne, 1);
    DDSample sample;
    sample.t = t;
    sample.fidelity_with_dd = core::fidelity(core::DensityMatrix(with_dd),
                                             core::DensityMatrix(ref));
    sample.fidelity_without_dd = core::fidelity(core::DensityMatrix(without),
                                                core::DensityMatrix(ref));
    out.push_back(sample);
  }
  return out;
}

}  // namespace qctl::synthesis
