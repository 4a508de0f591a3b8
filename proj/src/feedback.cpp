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

#include "qctl/feedback.hpp"

#include <cmath>
#include <thread>

#include "qctl/analysis.hpp"
#include "qctl/rng.hpp"
#include "qctl/synthesis.hpp"

namespace qctl::feedback {

using core::DensityMatrix;
using dynamics::LindbladModel;

LindbladModel fme_closed_loop(const CMat& h, const CMat& l, const CMat& f,
                              const CMat& hc) {
  if (!is_hermitian(f) || !is_hermitian(hc))
    throw ValidationError("fme_closed_loop: F and Hc must be Hermitian");
  const CMat h_tot = h + hc + 0.5 * (f * l + l.adjoint() * f);
  return LindbladModel(hermitize(h_tot), {l - kI * f});
}

bool stabilizable(const DensityMatrix& target, const CMat& l) {
  if (std::abs(target.purity() - 1.0) > 1e-9)
    throw ValidationError("stabilizable: target must be pure");
  return comm(target.matrix(), l + l.adjoint()).norm() > 1e-8;
}

namespace {

/// Unitary whose first column is psi (Householder reflector times a phase).
CMat householder_from_e1(const CVec& psi) {
  const int n = static_cast<int>(psi.size());
  Complex phase(1, 0);
  if (std::abs(psi(0)) > 1e-300) phase = psi(0) / std::abs(psi(0));
  const Complex eta = -phase;
  CVec v = psi;
  v(0) -= eta;
  const double vn2 = v.squaredNorm();
  CMat w = CMat::Identity(n, n);
  if (vn2 > 1e-30) w -= (2.0 / vn2) * (v * v.adjoint());
  w.col(0) *= eta;  // now w * e1 = psi exactly, and w is unitary
  return w;
}

}  // namespace

FeedbackDesign synthesize_feedback(const DensityMatrix& target, const CMat& l,
                                   const CMat& h) {
  const int n = target.dim();
  if (l.rows() != n || h.rows() != n)
    throw ValidationError("synthesize_feedback: dimension mismatch");
  if (!stabilizable(target, l))
    throw ValidationError("synthesize_feedback: not stabilizable, [rho_d, L+L^dag] = 0");

  Eigen::SelfAdjointEigenSolver<CMat> es(target.matrix());
  CVec psi = es.eigenvectors().col(n - 1);  // eigenvalue ~1
  const CMat w = householder_from_e1(psi);

  const CMat lb = w.adjoint() * l * w;
  const CMat hb = w.adjoint() * h * w;

  auto build = [&](double chain_coupling) {
    CMat f = CMat::Zero(n, n);
    // F_P = i L_Q^dag kills the Q block of L - iF.
    f.block(0, 1, 1, n - 1) = kI * lb.block(1, 0, n - 1, 1).adjoint();
    f.block(1, 0, n - 1, 1) = f.block(0, 1, 1, n - 1).adjoint();

    const CMat lhat = lb - kI * f;
    const CMat corr = 0.5 * (f * lb + lb.adjoint() * f);
    CMat hc = CMat::Zero(n, n);
    // Invariance: i (H_tot)_P = 1/2 lhat_S^* lhat_P in the target basis.
    const CMat want = -kI * 0.5 * std::conj(lhat(0, 0)) * lhat.block(0, 1, 1, n - 1);
    hc.block(0, 1, 1, n - 1) = want - (hb + corr).block(0, 1, 1, n - 1);
    hc.block(1, 0, n - 1, 1) = hc.block(0, 1, 1, n - 1).adjoint();
    // Optional mixing chain inside H_R so no invariant state survives there.
    for (int i = 1; i + 1 < n; ++i) {
      hc(i, i + 1) += chain_coupling;
      hc(i + 1, i) += chain_coupling;
    }
    return std::pair<CMat, CMat>(w * f * w.adjoint(), w * hermitize(hc) * w.adjoint());
  };

  auto verify = [&](const CMat& f, const CMat& hc)
      -> std::optional<FeedbackDesign> {
    LindbladModel closed = fme_closed_loop(h, l, f, hc);
    analysis::GasResult gas = analysis::gas_check(closed);
    if (!gas.gas) return std::nullopt;
    if (core::trace_distance(gas.state->matrix(), target.matrix()) > 1e-6)
      return std::nullopt;
    return FeedbackDesign{f, hc, closed, false};
  };

  auto [f0, hc0] = build(0.0);
  if (auto d = verify(f0, hc0)) return *d;

  const double kappa = std::max(1.0, l.norm());
  auto [f1, hc1] = build(kappa);
  if (auto d = verify(f1, hc1)) {
    d->complement_mixing_added = true;
    return *d;
  }
  throw NumericalError(
      "synthesize_feedback: verification failed, closed loop does not have "
      "the target as its unique steady state");
}

SpinOperators spin_operators(int dim) {
  if (dim < 2) throw ValidationError("spin_operators: dim must be >= 2");
  const double j = 0.5 * (dim - 1);
  SpinOperators ops;
  ops.fz = CMat::Zero(dim, dim);
  CMat fplus = CMat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = j - i;  // basis ordered |j>, |j-1>, ..., |-j>
    ops.fz(i, i) = m;
    if (i > 0) fplus(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMat fminus = fplus.adjoint();
  ops.fx = 0.5 * (fplus + fminus);
  ops.fy = -0.5 * kI * (fplus - fminus);
  return ops;
}

double affine_bloch_law(const DensityMatrix& rho) {
  const core::BlochVector b = core::bloch_from_density(rho);
  return -0.5 * (1.0 + b.z) + 2.0 * b.x;
}

PatchedLawConfig::PatchedLawConfig(DensityMatrix target_in, const CMat& fz,
                                   double gamma_in)
    : target(std::move(target_in)), gamma(gamma_in) {
  if (!(gamma > 0 && gamma < 1))
    throw ValidationError("PatchedLawConfig: gamma must be in (0,1)");
  if (std::abs(target.purity() - 1.0) > 1e-8)
    throw ValidationError("PatchedLawConfig: target must be pure");
  if (comm(target.matrix(), fz).norm() > 1e-8)
    throw ValidationError("PatchedLawConfig: target is not an eigenstate of F_z");
}

double patched_law(const DensityMatrix& rho, const CMat& fy,
                   PatchedLawConfig& config) {
  const double overlap = (rho.matrix() * config.target.matrix()).trace().real();
  const double lyap = -(kI * comm(fy, rho.matrix()) * config.target.matrix())
                           .trace().real();
  if (overlap >= config.gamma) {
    config.last_crossing = PatchedLawConfig::Crossing::upper;
    return lyap;
  }
  if (overlap <= 0.5 * config.gamma) {
    config.last_crossing = PatchedLawConfig::Crossing::lower_or_unknown;
    return 1.0;
  }
  return config.last_crossing == PatchedLawConfig::Crossing::upper ? lyap : 1.0;
}

SMEModel::SMEModel(CMat h0_in, CMat h1_in, CMat l_in, double eta_in,
                   FeedbackLaw law_in)
    : h0(std::move(h0_in)), h1(std::move(h1_in)), l(std::move(l_in)),
      eta(eta_in), law(law_in) {
  const int n = static_cast<int>(h0.rows());
  if (h1.rows() != n || l.rows() != n || h0.cols() != n)
    throw ValidationError("SMEModel: dimension mismatch");
  if (!is_hermitian(h0) || !is_hermitian(h1))
    throw ValidationError("SMEModel: Hamiltonians must be Hermitian");
  if (!(eta > 0.0 && eta <= 1.0))
    throw ValidationError("SMEModel: eta must be in (0, 1]");
}

LindbladModel SMEModel::drift_model() const { return LindbladModel(h0, {l}); }

double SMEModel::recommended_dt() const {
  Eigen::SelfAdjointEigenSolver<CMat> eh(h0);
  Eigen::SelfAdjointEigenSolver<CMat> eh1(h1);
  const double hn = eh.eigenvalues().cwiseAbs().maxCoeff() +
                    eh1.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<CMat> svd(l);
  const double l2 = svd.singularValues()(0) * svd.singularValues()(0);
  return 1e-2 / std::max({hn, l2, 1e-12});
}

SmeStepResult sme_step(const SMEModel& model, const CMat& rho, double u,
                       double dw, double dt) {
  const CMat h = model.h0 + u * model.h1;
  const CMat drift = -kI * comm(h, rho) + dynamics::dissipator(model.l, rho);
  const double output = ((model.l + model.l.adjoint()) * rho).trace().real();
  const CMat diffusion =
      model.l * rho + rho * model.l.adjoint() - output * rho;

  SmeStepResult res;
  res.dy = std::sqrt(model.eta) * output * dt + dw;
  CMat next = rho + drift * dt + std::sqrt(model.eta) * dw * diffusion;
  if (!next.allFinite())
    throw NumericalError("sme_step: non-finite state");
  next = hermitize(next);
  res.trace_drift = std::abs(next.trace().real() - 1.0);

  Eigen::SelfAdjointEigenSolver<CMat> es(next);
  RVec ev = es.eigenvalues();
  if (ev.minCoeff() < 0.0) {
    res.clipped = true;
    ev = ev.cwiseMax(0.0);
    next = es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
           es.eigenvectors().adjoint();
  }
  res.rho = next / next.trace().real();
  return res;
}

namespace {

double law_value(const SMEModel& model, const DensityMatrix& rho,
                 PatchedLawConfig* patched_state) {
  switch (model.law) {
    case FeedbackLaw::none:
      return 0.0;
    case FeedbackLaw::affine_bloch:
      return affine_bloch_law(rho);
    case FeedbackLaw::lyapunov:
      if (!model.target) throw ValidationError("sme: lyapunov law needs a target");
      return synthesis::lyapunov_control(rho.matrix(), model.target->matrix(),
                                         model.h1, model.gain);
    case FeedbackLaw::patched:
      if (!patched_state) throw ValidationError("sme: patched law needs config");
      return patched_law(rho, model.h1, *patched_state);
  }
  return 0.0;
}

}  // namespace

TrajectoryRecord sme_trajectory(const SMEModel& model, const DensityMatrix& rho0,
                                double total_time, double dt,
                                std::uint64_t seed) {
  if (rho0.dim() != model.dim())
    throw ValidationError("sme_trajectory: dimension mismatch");
  if (!(dt > 0) || !(total_time > 0))
    throw ValidationError("sme_trajectory: bad grid");
  const int n_steps = static_cast<int>(std::llround(total_time / dt));

  TrajectoryRecord rec;
  rec.seed = seed;
  rec.dt = dt;
  rec.dt_warning = dt > model.recommended_dt();

  std::optional<PatchedLawConfig> patched;
  if (model.law == FeedbackLaw::patched) {
    if (!model.target) throw ValidationError("sme: patched law needs a target");
    // F_z is the measurement operator direction; use L + L^dag (self-adjoint
    // part) for the eigenstate validation.
    patched.emplace(*model.target, hermitize(model.l + model.l.adjoint()),
                    model.gamma);
  }

  CounterRng rng(seed);
  DensityMatrix rho = rho0;
  rec.t.push_back(0.0);
  rec.states.push_back(rho.matrix());
  const double sqdt = std::sqrt(dt);
  for (int k = 0; k < n_steps; ++k) {
    const double u = law_value(model, rho, patched ? &*patched : nullptr);
    const double dw = sqdt * rng.normal();
    SmeStepResult step;
    try {
      step = sme_step(model, rho.matrix(), u, dw, dt);
    } catch (const NumericalError&) {
      throw NumericalError("sme_trajectory: non-finite state at step " +
                           std::to_string(k));
    }
    rec.u.push_back(u);
    rec.dw.push_back(dw);
    rec.dy.push_back(step.dy);
    if (step.clipped) ++rec.clip_events;
    rec.max_trace_drift = std::max(rec.max_trace_drift, step.trace_drift);
    rho = DensityMatrix(step.rho);
    rec.t.push_back((k + 1) * dt);
    rec.states.push_back(rho.matrix());
  }
  return rec;
}

EnsembleResult sme_ensemble(const SMEModel& model, const DensityMatrix& rho0,
                            double total_time, double dt, int n_traj,
                            std::uint64_t seed, const EnsembleOptions& options) {
  if (n_traj < 1) throw ValidationError("sme_ensemble: n_traj must be >= 1");
  const int n_steps = static_cast<int>(std::llround(total_time / dt));
  const int n_samples = std::max(1, options.n_samples);

  std::vector<int> sample_steps(n_samples + 1);
  for (int s = 0; s <= n_samples; ++s)
    sample_steps[s] = static_cast<int>(std::llround(
        static_cast<double>(s) * n_steps / n_samples));

  const CMat var_obs = options.variance_observable.size() > 0
                           ? options.variance_observable
                           : hermitize(model.l + model.l.adjoint());

  const int dim = model.dim();
  struct PerTraj {
    std::vector<CMat> samples;
    std::vector<double> variance;
    int clip_events = 0;
    bool dt_warning = false;
  };
  std::vector<PerTraj> results(n_traj);

  auto run_one = [&](int i) {
    CounterRng rng(seed + static_cast<std::uint64_t>(i));
    std::optional<PatchedLawConfig> patched;
    if (model.law == FeedbackLaw::patched)
      patched.emplace(*model.target, hermitize(model.l + model.l.adjoint()),
                      model.gamma);
    PerTraj& out = results[i];
    out.dt_warning = dt > model.recommended_dt();
    DensityMatrix rho = rho0;
    const double sqdt = std::sqrt(dt);
    int next_sample = 0;
    for (int k = 0; k <= n_steps; ++k) {
      while (next_sample <= n_samples && sample_steps[next_sample] == k) {
        out.samples.push_back(rho.matrix());
        const double m1 = (var_obs * rho.matrix()).trace().real();
        const double m2 = (var_obs * var_obs * rho.matrix()).trace().real();
        out.variance.push_back(m2 - m1 * m1);
        ++next_sample;
      }
      if (k == n_steps) break;
      const double u = law_value(model, rho, patched ? &*patched : nullptr);
      const double dw = sqdt * rng.normal();
      SmeStepResult step = sme_step(model, rho.matrix(), u, dw, dt);
      if (step.clipped) ++out.clip_events;
      rho = DensityMatrix(step.rho);
    }
  };

  int n_threads = options.n_threads > 0
                      ? options.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, n_traj));
  if (n_threads == 1) {
    for (int i = 0; i < n_traj; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w)
      pool.emplace_back([&, w]() {
        for (int i = w; i < n_traj; i += n_threads) run_one(i);
      });
    for (auto& th : pool) th.join();
  }

  EnsembleResult res;
  for (int s = 0; s <= n_samples; ++s)
    res.times.push_back(sample_steps[s] * dt);
  res.mean_states.assign(res.times.size(), CMat::Zero(dim, dim));
  res.mean_variance.assign(res.times.size(), 0.0);
  for (int i = 0; i < n_traj; ++i) {
    for (size_t s = 0; s < res.times.size(); ++s) {
      res.mean_states[s] += results[i].samples[s];
      res.mean_variance[s] += results[i].variance[s];
    }
    TrajectorySummary summary;
    summary.seed = seed + static_cast<std::uint64_t>(i);
    summary.final_state = results[i].samples.back();
    summary.clip_events = results[i].clip_events;
    res.trajectories.push_back(std::move(summary));
    res.dt_warning = res.dt_warning || results[i].dt_warning;
  }
  for (size_t s = 0; s < res.times.size(); ++s) {
    res.mean_states[s] /= static_cast<double>(n_traj);
    res.mean_variance[s] /= static_cast<double>(n_traj);
  }
  return res;
}

}  // namespace qctl::feedback
