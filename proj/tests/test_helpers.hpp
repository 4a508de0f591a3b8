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

#include "qctl/core.hpp"
#include "qctl/random_ops.hpp"

namespace qctl::test {

inline CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline CMat sx() { return core::pauli('x').matrix(); }
inline CMat sy() { return core::pauli('y').matrix(); }
inline CMat sz() { return core::pauli('z').matrix(); }
inline CMat id2() { return CMat::Identity(2, 2); }

inline CMat sigma_plus() { return 0.5 * (sx() + kI * sy()); }   // |0><1|
inline CMat sigma_minus() { return 0.5 * (sx() - kI * sy()); }  // |1><0|

inline CVec ket(int dim, int j) {
  CVec v = CVec::Zero(dim);
  v(j) = 1.0;
  return v;
}

}  // namespace qctl::test
