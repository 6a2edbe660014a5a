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
#include <span>
#include <stdexcept>
#include <string>

#include "qcavity/hilbert.hpp"
#include "qcavity/numerics.hpp"

namespace qcavity {

struct DensityDiagnostics {
  double hermitian_error = 0.0;
  Complex trace{0.0, 0.0};
  double min_eigenvalue = 0.0;
};

inline DensityDiagnostics diagnose(const ComplexMatrix& rho) {
  detail::require_square(rho, "diagnose");
  DensityDiagnostics d;
  d.hermitian_error = hermitian_error(rho);
  d.trace = rho.trace();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  d.min_eigenvalue = rho.size() == 0 ? 0.0 : solver.eigenvalues()(0);
  return d;
}

/// Throws std::invalid_argument unless rho is Hermitian, unit-trace and
/// positive within the library tolerances.
inline void require_density(const ComplexMatrix& rho, const char* what, double trace_tolerance = tol::density_trace) {
  if (rho.rows() != rho.cols() || rho.size() == 0) {
    throw std::invalid_argument(std::string(what) + ": density matrix must be square and non-empty");
  }
  const DensityDiagnostics d = diagnose(rho);
  if (d.hermitian_error > tol::density_hermitian) {
    throw std::invalid_argument(std::string(what) + ": density matrix not Hermitian (" +
                                std::to_string(d.hermitian_error) + ")");
  }
  if (std::abs(d.trace - 1.0) > trace_tolerance) {
    throw std::invalid_argument(std::string(what) + ": density matrix trace " + std::to_string(d.trace.real()) +
                                " != 1");
  }
  if (d.min_eigenvalue < tol::density_min_eigenvalue) {
    throw std::invalid_argument(std::string(what) + ": density matrix has eigenvalue " +
                                std::to_string(d.min_eigenvalue));
  }
}

/// Partial trace over the cavity; output index q1 * 2 + q2.
inline ComplexMatrix reduce_to_qubits(const ComplexMatrix& rho, const HilbertSpace& space) {
  if (rho.rows() != space.dim || rho.cols() != space.dim) {
    throw std::invalid_argument("reduce_to_qubits: rho is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", space dimension is " + std::to_string(space.dim));
  }
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int r1 = 0; r1 < 2; ++r1)
        for (int r2 = 0; r2 < 2; ++r2) {
          Complex sum = 0.0;
          for (int n = 0; n < space.nc; ++n) sum += rho(space.index(q1, n, q2), space.index(r1, n, r2));
          out(q1 * 2 + q2, r1 * 2 + r2) = sum;
        }
  return out;
}

/// Wootters concurrence of a two-qubit state: max(0, l1 - l2 - l3 - l4) with
/// l_i the descending square roots of the spectrum of rho (sy⊗sy) rho* (sy⊗sy).
/// The l_i are taken as singular values of sqrt(rho) (sy⊗sy) sqrt(rho)*, which
/// keeps near-zero l_i at rounding level instead of its square root.
inline double concurrence(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("concurrence: expected a 4x4 two-qubit state");
  require_density(rho, "concurrence", tol::trace_drift);

  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  const EigenSystem es = eig_herm(h);
  const RealVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_rho = es.vectors * roots.cast<Complex>().asDiagonal() * es.vectors.adjoint();

  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix m = sqrt_rho * yy * sqrt_rho.conjugate();
  const RealVector mu = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  return std::max(0.0, mu(0) - mu(1) - mu(2) - mu(3));
}

/// tr(rho op) for Hermitian op.
inline double expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
  if (rho.rows() != op.rows() || rho.cols() != op.cols()) throw std::invalid_argument("expectation: shape mismatch");
  if (!is_hermitian(op)) throw std::invalid_argument("expectation: operator is not Hermitian");
  const Complex value = rho.cwiseProduct(op.transpose()).sum();
  if (std::abs(value.imag()) > tol::expectation_imag) {
    throw NumericalError("expectation: imaginary part " + std::to_string(value.imag()) + " above tolerance");
  }
  return value.real();
}

/// Cross-correlation witness averaged over both qubits:
/// (1/2) sum_i <s_i^z a^dagger a> / (<s_i^z> <a^dagger a>), signs kept.
inline double cross_correlation(const ComplexMatrix& rho, const OperatorSet& ops) {
  const double n = expectation(rho, ops.number);
  if (std::abs(n) <= tol::correlation_floor) {
    throw NumericalError("undefined correlation: <a^dagger a> vanishes (vacuum cavity)");
  }
  double total = 0.0;
  for (int q = 1; q <= 2; ++q) {
    const double sz = expectation(rho, ops.sz(q));
    if (std::abs(sz) <= tol::correlation_floor) {
      throw NumericalError("undefined correlation: <s^z> of qubit " + std::to_string(q) + " vanishes");
    }
    // s_i^z and a^dagger a act on different factors and commute.
    const ComplexMatrix joint = ops.sz(q) * ops.number;
    total += expectation(rho, joint) / (sz * n);
  }
  return 0.5 * total;
}

struct ObservableRecord {
  double time = 0.0;
  double entanglement = 0.0;  ///< concurrence of the reduced qubit pair
  double sz1 = 0.0;
  double sz2 = 0.0;
  double nphot = 0.0;
};

inline ObservableRecord observe(const ComplexMatrix& rho, const OperatorSet& ops, double time = 0.0) {
  ObservableRecord r;
  r.time = time;
  r.entanglement = concurrence(reduce_to_qubits(rho, ops.space));
  r.sz1 = expectation(rho, ops.s1z);
  r.sz2 = expectation(rho, ops.s2z);
  r.nphot = expectation(rho, ops.number);
  return r;
}

struct Peak {
  double value = 0.0;
  double time = 0.0;
};

/// Largest sample (earliest on ties) refined by the vertex of the parabola
/// through it and its two neighbours. Boundary maxima are returned unrefined.
inline Peak peak_entanglement(std::span<const double> times, std::span<const double> values) {
  if (times.empty() || times.size() != values.size()) {
    throw std::invalid_argument("peak_entanglement: empty trajectory or mismatched lengths");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  Peak peak{values[best], times[best]};
  if (best == 0 || best + 1 == values.size()) return peak;

  const double x0 = times[best - 1], x1 = times[best], x2 = times[best + 1];
  const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
  // Newton form: y = y0 + d1 (x - x0) + d2 (x - x0)(x - x1)
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double d2 = (d12 - d01) / (x2 - x0);
  if (!(d2 < 0.0)) return peak;
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * d2);
  if (xv < x0 || xv > x2) return peak;
  const double yv = y0 + d01 * (xv - x0) + d2 * (xv - x0) * (xv - x1);
  if (yv > peak.value) peak = {yv, xv};
  return peak;
}

}  // namespace qcavity
