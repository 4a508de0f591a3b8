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

#include "qctl/rng.hpp"
#include "qctl/util.hpp"

namespace qctl {

/// Ginibre matrix: i.i.d. standard complex normal entries.
inline CMat random_ginibre(CounterRng& rng, int n) {
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

inline CMat random_hermitian(CounterRng& rng, int n) {
  return hermitize(random_ginibre(rng, n));
}

inline CMat random_traceless_hermitian(CounterRng& rng, int n) {
  CMat h = random_hermitian(rng, n);
  h -= (h.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
  return h;
}

/// Haar-ish unitary from the QR of a Ginibre matrix with phase fixing.
inline CMat random_unitary(CounterRng& rng, int n) {
  CMat g = random_ginibre(rng, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

inline CVec random_pure_state(CounterRng& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

/// Full-rank random density matrix (Hilbert-Schmidt ensemble).
inline CMat random_density(CounterRng& rng, int n) {
  CMat g = random_ginibre(rng, n);
  CMat w = g * g.adjoint();
  return w / w.trace().real();
}

}  // namespace qctl
