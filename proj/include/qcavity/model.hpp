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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcavity/hilbert.hpp"
#include "qcavity/numerics.hpp"

namespace qcavity {

/// Physical rates in units of g1, hbar = 1. Defaults are the driven
/// steady-state working point: omega = 50, epsilon = 10, omega_d = 9.99,
/// kappa = 1, gamma = 0.005, g1 = g2 = 1, d = 0.01.
struct ModelParams {
  double omega = 50.0;     ///< cavity frequency
  double epsilon = 10.0;   ///< qubit frequency
  double g1 = 1.0;         ///< qubit 1 - cavity coupling
  double g2 = 1.0;         ///< qubit 2 - cavity coupling
  double omega_d = 9.99;   ///< drive frequency (rotating frame)
  double drive = 0.01;     ///< drive strength on qubit 2
  double kappa = 1.0;      ///< cavity decay rate
  double gamma = 0.005;    ///< qubit decay rate

  [[nodiscard]] double delta() const { return epsilon - omega; }
};

inline void validate(const ModelParams& p) {
  const auto fail = [](const std::string& what) { throw std::invalid_argument("ModelParams: " + what); };
  if (!(p.g1 > 0.0)) fail("g1 must be > 0");
  if (!(p.g2 >= 0.0)) fail("g2 must be >= 0");
  if (!(p.kappa >= 0.0)) fail("kappa must be >= 0");
  if (!(p.gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(p.drive >= 0.0)) fail("drive must be >= 0");
  for (double v : {p.omega, p.epsilon, p.omega_d}) {
    if (!std::isfinite(v)) fail("frequencies must be finite");
  }
}

/// Photon-number-renormalized quantities of the dispersive effective model.
struct EffectiveParams {
  int nph = 0;
  double c = 1.0;  ///< 2 nph + 1
  double g1 = 0.0;
  double g2 = 0.0;
  double g1t = 0.0;  ///< g1 sqrt(c)
  double g2t = 0.0;  ///< g2 sqrt(c)
  double delta = 0.0;    ///< epsilon - omega
  double delta_t = 0.0;  ///< delta c

  /// Flip-flop amplitude g~1 g~2 / delta~ = g1 g2 / delta.
  [[nodiscard]] double exchange() const { return g1t * g2t / delta_t; }
  /// Half the Stark-shift splitting between |10> and |01>.
  [[nodiscard]] double half_splitting() const { return (g1t * g1t - g2t * g2t) / (2.0 * delta); }
};

inline EffectiveParams effective_params(int nph, double g1, double g2, double delta) {
  if (nph < 0) throw std::invalid_argument("effective_params: photon number must be >= 0");
  if (delta == 0.0) throw std::invalid_argument("effective_params: dispersive model undefined at delta = 0");
  EffectiveParams e;
  e.nph = nph;
  e.c = 2.0 * nph + 1.0;
  e.g1 = g1;
  e.g2 = g2;
  e.g1t = g1 * std::sqrt(e.c);
  e.g2t = g2 * std::sqrt(e.c);
  e.delta = delta;
  e.delta_t = delta * e.c;
  return e;
}

inline EffectiveParams effective_params(int nph, const ModelParams& p) {
  return effective_params(nph, p.g1, p.g2, p.delta());
}

/// True when |delta| >= 10 max(g~1, g~2); outside this the effective model is
/// only qualitative. A warning condition, never an error.
inline bool is_dispersive(const EffectiveParams& e) {
  return std::abs(e.delta) >= tol::dispersive_ratio * std::max(e.g1t, e.g2t);
}

/// H = omega a^dagger a + epsilon sum s_i^z + sum g_i (a^dagger s_i^- + h.c.)
inline ComplexMatrix h_model(const ModelParams& p, const OperatorSet& ops) {
  ComplexMatrix h = p.omega * ops.number + p.epsilon * (ops.s1z + ops.s2z);
  h += p.g1 * (ops.adag * ops.s1m + ops.s1p * ops.a);
  h += p.g2 * (ops.adag * ops.s2m + ops.s2p * ops.a);
  return h;
}

/// Dispersive two-level block on {|10>_q, |01>_q}:
/// diagonal +-(g~1^2 - g~2^2)/(2 delta), off-diagonal g1 g2 / delta.
inline ComplexMatrix h_effective(const EffectiveParams& e) {
  ComplexMatrix h(2, 2);
  h(0, 0) = e.half_splitting();
  h(1, 1) = -e.half_splitting();
  h(0, 1) = e.exchange();
  h(1, 0) = e.exchange();
  return h;
}

/// Same effective Hamiltonian on the full two-qubit space (index q1 * 2 + q2):
/// sum (g~i^2 / delta) s_i^z + J (s1^+ s2^- + s1^- s2^+).
inline ComplexMatrix h_effective_qubits(const EffectiveParams& e) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix sm = qubit::lowering();
  const ComplexMatrix sp = sm.adjoint();
  const ComplexMatrix sz = qubit::sz();
  ComplexMatrix h = (e.g1t * e.g1t / e.delta) * kron(sz, i2) + (e.g2t * e.g2t / e.delta) * kron(i2, sz);
  h += e.exchange() * (kron(sp, sm) + kron(sm, sp));
  return h;
}

/// Drive-frame Hamiltonian with the coherent drive on qubit 2 only.
inline ComplexMatrix h_rotating(const ModelParams& p, const OperatorSet& ops) {
  ComplexMatrix h = (p.omega - p.omega_d) * ops.number + (p.epsilon - p.omega_d) * (ops.s1z + ops.s2z);
  h += p.g1 * (ops.adag * ops.s1m + ops.s1p * ops.a);
  h += p.g2 * (ops.adag * ops.s2m + ops.s2p * ops.a);
  h += p.drive * (ops.s2p + ops.s2m);
  return h;
}

struct Channel {
  double rate = 0.0;
  ComplexMatrix op;
};

/// Superoperator on column-stacked rho for
/// d rho/dt = -i[H, rho] + sum rate (c rho c^dagger - {c^dagger c, rho}/2).
/// With vec(A X B) = (B^T ⊗ A) vec(X).
inline ComplexMatrix lindblad_liouvillian(const ComplexMatrix& h, const std::vector<Channel>& channels) {
  detail::require_square(h, "lindblad_liouvillian");
  const Eigen::Index dim = h.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const Channel& ch : channels) {
    if (ch.rate == 0.0) continue;
    const ComplexMatrix cdc = ch.op.adjoint() * ch.op;
    l += ch.rate * (kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id));
  }
  return l;
}

/// Driven-dissipative generator: rotating-frame Hamiltonian, cavity decay
/// kappa on a, qubit decay gamma on each s_j^-.
inline ComplexMatrix liouvillian(const ModelParams& p, const OperatorSet& ops) {
  return lindblad_liouvillian(h_rotating(p, ops),
                              {{p.kappa, ops.a}, {p.gamma, ops.s1m}, {p.gamma, ops.s2m}});
}

}  // namespace qcavity
