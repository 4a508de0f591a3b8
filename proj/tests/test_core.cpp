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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

using namespace qctl;
using namespace qctl::core;
using namespace qctl::test;

TEST_CASE("pauli matrices as displayed") {
  CHECK(max_abs_diff(pauli('x').matrix(), mat2(0, 1, 1, 0)) == 0.0);
  CHECK(max_abs_diff(pauli('z').matrix(), mat2(1, 0, 0, -1)) == 0.0);
  CHECK(max_abs_diff(pauli('y').matrix(),
                     mat2(0, Complex(0, -1), Complex(0, 1), 0)) == 0.0);
  CHECK(max_abs_diff(pauli('0').matrix(), id2()) == 0.0);
  CHECK_THROWS_AS(pauli('q'), ValidationError);
}

TEST_CASE("pauli commutator table") {
  const double delta = 0.7;
  CMat lhs = comm(-kI * delta * sz(), -kI * sx());
  CMat rhs = -kI * 2.0 * delta * sy();
  CHECK(max_abs_diff(lhs, rhs) < 1e-14);
}

TEST_CASE("bloch vector round trips and fixed points") {
  CHECK(bloch_from_density(DensityMatrix::maximally_mixed(2)).norm() < 1e-14);

  BlochVector ground = bloch_from_density(DensityMatrix::pure(ket(2, 0)));
  CHECK(ground.z == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ground.x) < 1e-14);

  BlochVector xplus = bloch_from_density(DensityMatrix(0.5 * (id2() + sx())));
  CHECK(xplus.x == doctest::Approx(1.0).epsilon(1e-12));

  CounterRng rng(7);
  for (int i = 0; i < 10; ++i) {
    DensityMatrix rho(random_density(rng, 2));
    DensityMatrix back = density_from_bloch(bloch_from_density(rho));
    CHECK(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);
  }

  CHECK_THROWS_AS(bloch_from_density(DensityMatrix::maximally_mixed(3)),
                  ValidationError);
}

TEST_CASE("measurement rules") {
  SUBCASE("eigenstate is certain") {
    auto outcomes = measure(DensityMatrix::pure(ket(2, 0)), pauli('z'));
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].outcome == doctest::Approx(1.0));
    CHECK(outcomes[0].probability == doctest::Approx(1.0));
    CHECK(max_abs_diff(outcomes[0].conditional.matrix(),
                       DensityMatrix::pure(ket(2, 0)).matrix()) < 1e-12);
  }
  SUBCASE("completely mixed state is symmetric") {
    auto outcomes = measure(DensityMatrix::maximally_mixed(2), pauli('z'));
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].probability == doctest::Approx(0.5));
    CHECK(outcomes[1].probability == doctest::Approx(0.5));
  }
  SUBCASE("conditioning collapses x-polarized state onto the z eigenspace") {
    DensityMatrix rho(0.5 * (id2() + sx()));
    auto outcomes = measure(rho, pauli('z'));
    REQUIRE(outcomes.size() == 2);
    // Spectral lines are sorted ascending; outcome +1 is the last entry.
    const auto& plus = outcomes.back();
    CHECK(plus.outcome == doctest::Approx(1.0));
    CHECK(plus.probability == doctest::Approx(0.5));
    CHECK(max_abs_diff(plus.conditional.matrix(),
                       DensityMatrix::pure(ket(2, 0)).matrix()) < 1e-12);
  }
  SUBCASE("probabilities sum to one") {
    CounterRng rng(11);
    for (int i = 0; i < 5; ++i) {
      DensityMatrix rho(random_density(rng, 3));
      Observable y(random_hermitian(rng, 3));
      double total = 0;
      for (const auto& o : measure(rho, y)) {
        CHECK(o.probability >= 0.0);
        total += o.probability;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("nonselective measurement") {
  DensityMatrix rho(0.5 * (id2() + sx()));
  CHECK(max_abs_diff(nonselective(rho, pauli('z')).matrix(), 0.5 * id2()) < 1e-12);

  // Diagonal in the observable eigenbasis: unchanged.
  DensityMatrix diag(CMat(mat2(0.7, 0, 0, 0.3)));
  CHECK(max_abs_diff(nonselective(diag, pauli('z')).matrix(), diag.matrix()) < 1e-12);

  // Identity observable has a single projector.
  CHECK(max_abs_diff(nonselective(rho, pauli('0')).matrix(), rho.matrix()) < 1e-12);

  // Idempotence.
  CounterRng rng(3);
  DensityMatrix r(random_density(rng, 2));
  DensityMatrix once = nonselective(r, pauli('y'));
  DensityMatrix twice = nonselective(once, pauli('y'));
  CHECK(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
}

TEST_CASE("expectation values") {
  CHECK(expectation(DensityMatrix::pure(ket(2, 0)), pauli('z')) ==
        doctest::Approx(1.0));
  CHECK(std::abs(expectation(DensityMatrix::maximally_mixed(2), pauli('x'))) < 1e-14);

  CounterRng rng(5);
  for (int i = 0; i < 10; ++i) {
    DensityMatrix rho(random_density(rng, 2));
    BlochVector b = bloch_from_density(rho);
    CHECK(expectation(rho, pauli('y')) == doctest::Approx(b.y).epsilon(1e-12));
  }

  // E(Y) = sum y_j tr(Pi_j rho).
  DensityMatrix rho(random_density(rng, 3));
  Observable y(random_hermitian(rng, 3));
  double via_spectral = 0;
  for (const auto& line : y.spectral())
    via_spectral += line.eigenvalue * (rho.matrix() * line.projector).trace().real();
  CHECK(expectation(rho, y) == doctest::Approx(via_spectral).epsilon(1e-9));
}

TEST_CASE("observable spectral resolution") {
  CounterRng rng(13);
  CMat h = random_hermitian(rng, 4);
  Observable y(h);
  CMat recon = CMat::Zero(4, 4);
  CMat psum = CMat::Zero(4, 4);
  for (const auto& a : y.spectral()) {
    recon += a.eigenvalue * a.projector;
    psum += a.projector;
    for (const auto& b : y.spectral()) {
      CMat prod = a.projector * b.projector;
      if (&a == &b)
        CHECK(max_abs_diff(prod, a.projector) < 1e-9);
      else
        CHECK(prod.norm() < 1e-9);
    }
  }
  CHECK(max_abs_diff(recon, y.matrix()) < 1e-9);
  CHECK(max_abs_diff(psum, CMat::Identity(4, 4)) < 1e-9);

  // Degenerate eigenvalues merge into one projector.
  CHECK(Observable(id2()).spectral().size() == 1);
  CHECK(Observable(sz()).spectral().size() == 2);
}

TEST_CASE("tensor products and partial trace") {
  CHECK(max_abs_diff(tensor(id2(), id2()), CMat::Identity(4, 4)) == 0.0);

  // Bell state reduces to the completely mixed state.
  CVec bell = (kron(id2(), id2()) * CVec::Zero(4)).eval();
  bell = CVec::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  CMat bell_rho = bell * bell.adjoint();
  CHECK(max_abs_diff(partial_trace(bell_rho, 2, 2, 1), 0.5 * id2()) < 1e-12);
  CHECK(max_abs_diff(partial_trace(bell_rho, 2, 2, 2), 0.5 * id2()) < 1e-12);

  CounterRng rng(17);
  CMat ra = random_density(rng, 2), rb = random_density(rng, 3);
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), 2, 3, 1), ra) < 1e-12);
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), 2, 3, 2), rb) < 1e-12);

  // Linearity: tr_2 distributes over sums.
  CMat x = random_ginibre(rng, 6), y = random_ginibre(rng, 6);
  CHECK(max_abs_diff(partial_trace(x + y, 2, 3, 1),
                     partial_trace(x, 2, 3, 1) + partial_trace(y, 2, 3, 1)) < 1e-12);

  CHECK_THROWS_AS(partial_trace(CMat::Identity(5, 5), 2, 2, 1), ValidationError);
}

TEST_CASE("gell-mann basis") {
  for (int n : {2, 3, 4}) {
    OperatorBasis basis = gell_mann_basis(n);
    REQUIRE(static_cast<int>(basis.elements.size()) == n * n - 1);
    for (size_t j = 0; j < basis.elements.size(); ++j) {
      CHECK(std::abs(basis.elements[j].trace()) < 1e-12);
      CHECK((basis.elements[j] - basis.elements[j].adjoint()).norm() < 1e-12);
      for (size_t k = 0; k < basis.elements.size(); ++k) {
        const double ip = (basis.elements[j].adjoint() * basis.elements[k])
                              .trace().real();
        CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) < 1e-9);
      }
    }
  }
  // Pauli scaling for n = 2.
  OperatorBasis b2 = gell_mann_basis(2);
  CHECK(max_abs_diff(b2.elements[0], sx() / std::sqrt(2.0)) < 1e-14);
  CHECK(max_abs_diff(b2.elements[1], sy() / std::sqrt(2.0)) < 1e-14);
  CHECK(max_abs_diff(b2.elements[2], sz() / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("coherence vector") {
  OperatorBasis basis = gell_mann_basis(3);
  CHECK(coherence_vector(DensityMatrix::maximally_mixed(3), basis).norm() < 1e-12);

  OperatorBasis b2 = gell_mann_basis(2);
  RVec v = coherence_vector(DensityMatrix::pure(ket(2, 0)), b2);
  CHECK(v(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v(2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  CounterRng rng(23);
  for (int i = 0; i < 10; ++i) {
    DensityMatrix rho(random_density(rng, 3));
    DensityMatrix back = density_from_coherence(coherence_vector(rho, basis), basis);
    CHECK(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);
  }
}

TEST_CASE("superoperator matrices") {
  SUBCASE("identity map") {
    CMat s = superop_matrix([](const CMat& x) { return x; }, 3);
    CHECK(max_abs_diff(s, CMat::Identity(9, 9)) == 0.0);
  }
  SUBCASE("sandwich map matches the Kronecker formula") {
    CounterRng rng(29);
    CMat a = random_ginibre(rng, 3), b = random_ginibre(rng, 3);
    CMat s = superop_matrix(
        [&](const CMat& x) { return (a * x * b.adjoint()).eval(); }, 3);
    CMat kron_form = kron(b.conjugate(), a);
    CHECK(max_abs_diff(s, kron_form) < 1e-12);
    for (int i = 0; i < 10; ++i) {
      CMat rho = random_density(rng, 3);
      CHECK((s * vec_stack(rho) - vec_stack(a * rho * b.adjoint())).norm() < 1e-9);
    }
  }
  SUBCASE("commutator with sigma_z has an imaginary-pair spectrum") {
    CMat s = superop_matrix(
        [](const CMat& x) { return (-kI * comm(pauli('z').matrix(), x)).eval(); }, 2);
    Eigen::ComplexEigenSolver<CMat> es(s);
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(es.eigenvalues()(i).real()) < 1e-12);
    std::vector<double> imag;
    for (int i = 0; i < 4; ++i) imag.push_back(es.eigenvalues()(i).imag());
    std::sort(imag.begin(), imag.end());
    CHECK(imag[0] == doctest::Approx(-2.0));
    CHECK(imag[1] == doctest::Approx(0.0));
    CHECK(imag[2] == doctest::Approx(0.0));
    CHECK(imag[3] == doctest::Approx(2.0));
  }
}

TEST_CASE("truncated harmonic oscillator") {
  TruncatedFock f = fock_operators(8);
  // a |n> = sqrt(n) |n-1> exactly.
  for (int n = 1; n < 8; ++n) {
    CVec e = ket(8, n);
    CHECK((f.a * e - std::sqrt(static_cast<double>(n)) * ket(8, n - 1)).norm() == 0.0);
  }
  CHECK(max_abs_diff(f.number, f.adag * f.a) == 0.0);

  // [a, a^dag] = I except the last diagonal entry (truncation artifact).
  CMat c = comm(f.a, f.adag);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(c(i, i) - 1.0) < 1e-12);
  CHECK(c(7, 7).real() == doctest::Approx(-7.0));

  CHECK_THROWS_AS(fock_operators(1), ValidationError);
}

TEST_CASE("coherent states") {
  SUBCASE("vacuum") {
    CoherentState c = coherent_state(0.0, 10);
    CHECK(max_abs_diff(c.state.amplitudes(), ket(10, 0)) == 0.0);
    CHECK(c.truncation_residual == 0.0);
  }
  SUBCASE("photon number expectation") {
    CoherentState c = coherent_state(1.0, 30);
    TruncatedFock f = fock_operators(30);
    const double n = (c.state.amplitudes().adjoint() * f.number *
                      c.state.amplitudes())(0).real();
    CHECK(std::abs(n - 1.0) < 1e-6);
    CHECK(c.truncation_residual < 1e-6);
  }
  SUBCASE("truncation residual is reported") {
    CoherentState tight = coherent_state(2.0, 8);
    CoherentState loose = coherent_state(2.0, 40);
    CHECK(tight.truncation_residual > loose.truncation_residual);
  }
}

TEST_CASE("classical reduction for commuting operators") {
  // Everything diagonal in one basis: quantum rules reduce to classical ones.
  RVec mu(3);
  mu << 0.5, 0.3, 0.2;
  CMat rho = mu.cast<Complex>().asDiagonal();
  RVec xs(3);
  xs << 2.0, -1.0, 7.0;
  CMat x = xs.cast<Complex>().asDiagonal();
  DensityMatrix state(rho);
  Observable obs(x);
  double classical = 0;
  for (int i = 0; i < 3; ++i) classical += xs(i) * mu(i);
  CHECK(expectation(state, obs) == doctest::Approx(classical).epsilon(1e-12));

  for (const auto& o : measure(state, obs)) {
    // Each outcome's probability equals the matching classical weight.
    for (int i = 0; i < 3; ++i)
      if (std::abs(o.outcome - xs(i)) < 1e-12)
        CHECK(o.probability == doctest::Approx(mu(i)).epsilon(1e-12));
  }
}

TEST_CASE("global phase carries no information") {
  CounterRng rng(31);
  CVec psi = random_pure_state(rng, 3);
  Observable y(random_hermitian(rng, 3));
  auto reference = measure(DensityMatrix::pure(psi), y);
  for (int i = 0; i < 10; ++i) {
    const double phase = 6.283185307 * rng.uniform();
    CVec shifted = std::exp(Complex(0, phase)) * psi;
    auto outcomes = measure(DensityMatrix::pure(shifted), y);
    REQUIRE(outcomes.size() == reference.size());
    for (size_t k = 0; k < outcomes.size(); ++k) {
      CHECK(std::abs(outcomes[k].probability - reference[k].probability) < 1e-12);
      CHECK(max_abs_diff(outcomes[k].conditional.matrix(),
                         reference[k].conditional.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("density matrix invariants") {
  SUBCASE("ensemble construction") {
    std::vector<StateVector> states{StateVector(ket(2, 0)), StateVector(ket(2, 1))};
    DensityMatrix rho = DensityMatrix::ensemble({0.25, 0.75}, states);
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.25));
    CHECK(rho.purity() <= 1.0 + 1e-12);
    CHECK(rho.purity() >= 0.5 - 1e-12);
    CHECK_THROWS_AS(DensityMatrix::ensemble({0.5, 0.4}, states), ValidationError);
  }
  SUBCASE("rejects invalid matrices") {
    CHECK_THROWS_AS(DensityMatrix(mat2(1, 1, 0, 0)), ValidationError);
    CHECK_THROWS_AS(DensityMatrix(mat2(0.8, 0, 0, 0.8)), ValidationError);
    CHECK_THROWS_AS(DensityMatrix(mat2(1.2, 0, 0, -0.2)), ValidationError);
  }
  SUBCASE("clips tiny negative eigenvalues") {
    DensityMatrix rho(mat2(1.0 + 5e-10, 0, 0, -5e-10));
    Eigen::SelfAdjointEigenSolver<CMat> es(rho.matrix());
    CHECK(es.eigenvalues().minCoeff() >= 0.0);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("state vector norm check") {
    CVec bad = CVec::Zero(2);
    bad(0) = 1.1;
    CHECK_THROWS_AS(StateVector{bad}, ValidationError);
  }
}

TEST_CASE("fidelity and trace distance") {
  DensityMatrix a = DensityMatrix::pure(ket(2, 0));
  DensityMatrix b = DensityMatrix::pure(ket(2, 1));
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  CHECK(fidelity(a, b) == doctest::Approx(0.0));
  CHECK(trace_distance(a.matrix(), b.matrix()) == doctest::Approx(1.0));
  CHECK(trace_distance(a.matrix(), a.matrix()) == doctest::Approx(0.0));
}
