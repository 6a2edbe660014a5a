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

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcavity/numerics.hpp"

namespace qcavity {

/// Basis |q1, n, q2> of qubit 1 ⊗ truncated cavity ⊗ qubit 2.
/// q = 1 is the excited qubit state; n runs over Fock levels 0..nc-1.
struct HilbertSpace {
  int nc = 0;   ///< cavity Fock levels kept
  int dim = 0;  ///< 2 * nc * 2

  [[nodiscard]] int index(int q1, int n, int q2) const { return q1 * (nc * 2) + n * 2 + q2; }
};

/// Operators embedded in the full tripartite space. Immutable after build_space.
struct OperatorSet {
  HilbertSpace space;
  ComplexMatrix a;
  ComplexMatrix adag;
  ComplexMatrix number;  ///< a^dagger a
  ComplexMatrix s1m, s1p, s1z;
  ComplexMatrix s2m, s2p, s2z;
  ComplexMatrix identity;

  [[nodiscard]] const ComplexMatrix& sm(int qubit) const { return qubit == 1 ? s1m : s2m; }
  [[nodiscard]] const ComplexMatrix& sp(int qubit) const { return qubit == 1 ? s1p : s2p; }
  [[nodiscard]] const ComplexMatrix& sz(int qubit) const { return qubit == 1 ? s1z : s2z; }
};

/// Single-qubit factors in the {ground, excited} basis.
namespace qubit {

/// Lowering operator, <ground|s^-|excited> = 1.
inline ComplexMatrix lowering() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

/// Spin-1/2 convention: s^z = diag(-1/2, +1/2) over (ground, excited).
inline ComplexMatrix sz() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = -0.5;
  m(1, 1) = 0.5;
  return m;
}

}  // namespace qubit

/// Truncated annihilation operator on nc Fock levels: a|n> = sqrt(n)|n-1>.
inline ComplexMatrix cavity_lowering(int nc) {
  ComplexMatrix m = ComplexMatrix::Zero(nc, nc);
  for (int n = 1; n < nc; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}

inline OperatorSet build_space(int nc) {
  if (nc < 2) throw std::invalid_argument("build_space: cavity truncation must be >= 2, got " + std::to_string(nc));

  OperatorSet ops;
  ops.space = HilbertSpace{nc, 4 * nc};

  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix ic = ComplexMatrix::Identity(nc, nc);
  const auto embed = [](const ComplexMatrix& q1, const ComplexMatrix& cav, const ComplexMatrix& q2) {
    return kron(kron(q1, cav), q2);
  };

  ops.a = embed(i2, cavity_lowering(nc), i2);
  ops.adag = ops.a.adjoint();
  ops.number = ops.adag * ops.a;
  ops.s1m = embed(qubit::lowering(), ic, i2);
  ops.s2m = embed(i2, ic, qubit::lowering());
  ops.s1p = ops.s1m.adjoint();
  ops.s2p = ops.s2m.adjoint();
  ops.s1z = embed(qubit::sz(), ic, i2);
  ops.s2z = embed(i2, ic, qubit::sz());
  ops.identity = ComplexMatrix::Identity(ops.space.dim, ops.space.dim);
  return ops;
}

inline ComplexVector basis_state(const HilbertSpace& space, int q1, int n, int q2) {
  if (q1 < 0 || q1 > 1 || q2 < 0 || q2 > 1) throw std::invalid_argument("basis_state: qubit labels must be 0 or 1");
  if (n < 0 || n >= space.nc) {
    throw std::invalid_argument("basis_state: photon number " + std::to_string(n) + " outside truncation " +
                                std::to_string(space.nc));
  }
  ComplexVector psi = ComplexVector::Zero(space.dim);
  psi(space.index(q1, n, q2)) = 1.0;
  return psi;
}

}  // namespace qcavity
