// Copyright 2026 The qcavity Authors
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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qcavity/hilbert.hpp"
#include "test_support.hpp"

using namespace qcavity;
using qcavity::testing::max_abs;
using Catch::Approx;

TEST_CASE("build_space rejects tiny truncations", "[hilbert]") {
  CHECK_THROWS_AS(build_space(1), std::invalid_argument);
  CHECK_THROWS_AS(build_space(0), std::invalid_argument);
  CHECK_NOTHROW(build_space(2));
}

TEST_CASE("cavity ladder on the cavity factor", "[hilbert]") {
  const ComplexMatrix a2 = cavity_lowering(2);
  CHECK(a2(0, 1) == Complex(1.0, 0.0));

  const int nc = 5;
  const ComplexMatrix a = cavity_lowering(nc);
  for (int n = 1; n < nc; ++n) CHECK(std::abs(a(n - 1, n) - std::sqrt(static_cast<double>(n))) == 0.0);
  CHECK(a.col(0).norm() == 0.0);                // a|0> = 0
  CHECK(a.adjoint().col(nc - 1).norm() == 0.0);  // a^dagger|nc-1> = 0

  // truncated commutator: I - nc |nc-1><nc-1|
  ComplexMatrix expected = ComplexMatrix::Identity(nc, nc);
  expected(nc - 1, nc - 1) -= static_cast<double>(nc);
  CHECK(max_abs(a * a.adjoint() - a.adjoint() * a - expected) <= 1e-14);
}

TEST_CASE("embedded operator shapes and spectra", "[hilbert]") {
  const OperatorSet ops = build_space(4);
  CHECK(ops.space.dim == 16);
  for (const ComplexMatrix* m : {&ops.a, &ops.adag, &ops.number, &ops.s1m, &ops.s1p, &ops.s1z, &ops.s2m, &ops.s2p,
                                 &ops.s2z, &ops.identity}) {
    CHECK(m->rows() == 16);
    CHECK(m->cols() == 16);
  }

  const RealVector n = eig_herm(ops.number).values;
  for (int level = 0; level < 4; ++level) {
    int count = 0;
    for (Eigen::Index k = 0; k < n.size(); ++k) count += std::abs(n(k) - level) < 1e-12 ? 1 : 0;
    CHECK(count == 4);
  }
}

TEST_CASE("qubit conventions", "[hilbert]") {
  const OperatorSet ops = build_space(3);
  const ComplexVector excited2 = basis_state(ops.space, 0, 1, 1);
  CHECK((excited2.adjoint() * ops.s2z * excited2)(0).real() == Approx(0.5));
  CHECK((excited2.adjoint() * ops.s1z * excited2)(0).real() == Approx(-0.5));

  // s^- maps excited to ground
  const ComplexVector lowered = ops.s2m * excited2;
  CHECK((lowered - basis_state(ops.space, 0, 1, 0)).norm() == 0.0);
  CHECK((ops.s1m * basis_state(ops.space, 1, 2, 0) - basis_state(ops.space, 0, 2, 0)).norm() == 0.0);
}

TEST_CASE("operator algebra invariants", "[hilbert][property]") {
  for (int nc : {2, 3, 6}) {
    const OperatorSet ops = build_space(nc);
    for (int q = 1; q <= 2; ++q) {
      CHECK(max_abs(ops.sm(q).adjoint() - ops.sp(q)) == 0.0);
      CHECK(max_abs(ops.sp(q) * ops.sm(q) + ops.sm(q) * ops.sp(q) - ops.identity) <= 1e-15);
      CHECK(hermitian_error(ops.sz(q)) == 0.0);
    }
    CHECK(hermitian_error(ops.number) == 0.0);

    const std::vector<const ComplexMatrix*> q1{&ops.s1m, &ops.s1p, &ops.s1z};
    const std::vector<const ComplexMatrix*> q2{&ops.s2m, &ops.s2p, &ops.s2z};
    for (const ComplexMatrix* x : q1)
      for (const ComplexMatrix* y : q2) CHECK(max_abs(*x * *y - *y * *x) <= 1e-12);
  }
}

TEST_CASE("basis_state indexing", "[hilbert]") {
  const HilbertSpace space = build_space(4).space;
  CHECK(space.index(0, 1, 1) == 3);
  CHECK(space.index(1, 0, 0) == 8);

  const ComplexVector psi = basis_state(space, 0, 1, 1);
  CHECK(psi.norm() == 1.0);
  CHECK(psi(3) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(basis_state(space, 0, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(basis_state(space, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("basis states are orthonormal", "[hilbert][property]") {
  const HilbertSpace space = build_space(5).space;
  ComplexMatrix gram = ComplexMatrix::Zero(space.dim, space.dim);
  std::vector<ComplexVector> states;
  for (int q1 = 0; q1 < 2; ++q1)
    for (int n = 0; n < space.nc; ++n)
      for (int q2 = 0; q2 < 2; ++q2) states.push_back(basis_state(space, q1, n, q2));
  REQUIRE(static_cast<int>(states.size()) == space.dim);
  for (int i = 0; i < space.dim; ++i)
    for (int j = 0; j < space.dim; ++j) gram(i, j) = states[i].dot(states[j]);
  CHECK(max_abs(gram - ComplexMatrix::Identity(space.dim, space.dim)) == 0.0);
}
