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

#include <map>
#include <string>
#include <vector>

#include "qctl/dynamics.hpp"

namespace qctl::networks {

/// Component parameters (S, L, H). The scattering matrix carries scalar
/// entries (beam-splitter phases); L and H are full operators on a common
/// system space.
struct SLHTriple {
  CMat s;               // ports x ports, unitary
  std::vector<CMat> l;  // one operator per port
  CMat h;               // Hermitian

  SLHTriple(CMat s_in, std::vector<CMat> l_in, CMat h_in);
  static SLHTriple identity(int ports, int dim);

  int ports() const { return static_cast<int>(s.rows()); }
  int dim() const { return static_cast<int>(h.rows()); }
};

/// Series product G2 <| G1 (the output of G1 feeds G2): S = S2 S1,
/// L = L2 + S2 L1, H = H1 + H2 + (X - X^dag)/(2i) with X = L2^dag S2 L1.
SLHTriple slh_series(const SLHTriple& g2, const SLHTriple& g1);

/// Concatenation G1 [+] G2: block-diagonal S, stacked L, H1 + H2.
SLHTriple slh_concat(const SLHTriple& g1, const SLHTriple& g2);

/// Composition tree: `A ; B` is series (signal flows left to right, i.e.
/// B <| A), `A + B` is concatenation, parentheses group.
struct NetworkExpression {
  enum class Kind { leaf, series, concat };
  Kind kind = Kind::leaf;
  std::string name;  // leaves only
  std::vector<NetworkExpression> children;
  int line = 0, column = 0;

  bool same_tree(const NetworkExpression& other) const;
};

/// expr := term (';' term)* ; term := atom ('+' atom)* ;
/// atom := NAME | '(' expr ')'. Throws ValidationError with line/column on
/// malformed input.
NetworkExpression parse_network(const std::string& text);

/// Inverse of parse_network: parse(print(expr)) reproduces the same tree.
std::string print_network(const NetworkExpression& expr);

using ComponentTable = std::map<std::string, SLHTriple>;

/// Bottom-up reduction of a composition tree to a single triple.
SLHTriple reduce(const NetworkExpression& expr, const ComponentTable& table);

/// Vacuum-input unconditional master equation: Hamiltonian H, one noise
/// operator per port. The scattering matrix does not enter.
dynamics::LindbladModel slh_to_mme(const SLHTriple& g);

}  // namespace qctl::networks
