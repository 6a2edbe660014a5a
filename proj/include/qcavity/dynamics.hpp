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
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcavity/hilbert.hpp"
#include "qcavity/measures.hpp"
#include "qcavity/model.hpp"
#include "qcavity/numerics.hpp"

namespace qcavity {

/// States sampled on a strictly increasing time grid (units of 1/g1).
template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

using ClosedTrajectory = Trajectory<ComplexVector>;
using OpenTrajectory = Trajectory<ComplexMatrix>;

/// Raised when the trace drifts beyond tol::trace_drift; retry with a smaller step.
class StepRejected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline void require_time_grid(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw std::invalid_argument("time grid entries must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }
}

/// psi(t) = exp(-i h t) psi0 via one eigendecomposition of h.
inline ClosedTrajectory evolve_closed(const ComplexMatrix& h, const ComplexVector& psi0, std::span<const double> times) {
  if (!is_hermitian(h)) throw std::invalid_argument("evolve_closed: Hamiltonian is not Hermitian");
  if (psi0.size() != h.rows()) throw std::invalid_argument("evolve_closed: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > tol::state_norm) throw std::invalid_argument("evolve_closed: initial state not normalized");
  require_time_grid(times);

  const EigenSystem es = eig_herm(h);
  const ComplexVector coeffs = es.vectors.adjoint() * psi0;

  ClosedTrajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  for (double t : times) {
    const ComplexVector phases = (-kI * t * es.values.cast<Complex>()).array().exp();
    ComplexVector psi = es.vectors * phases.cwiseProduct(coeffs);
    if (std::abs(psi.norm() - 1.0) > tol::state_norm) {
      throw NumericalError("evolve_closed: norm drift at t = " + std::to_string(t));
    }
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

/// Integration step 0.01 / max(spectral-radius estimate of H', kappa, gamma, d),
/// the estimate being the largest absolute row sum of H'.
inline double default_step(const ComplexMatrix& h_rot, const ModelParams& p) {
  const double radius = h_rot.size() == 0 ? 0.0 : h_rot.cwiseAbs().rowwise().sum().maxCoeff();
  const double scale = std::max({radius, p.kappa, p.gamma, p.drive});
  return scale > 0.0 ? 0.01 / scale : std::numeric_limits<double>::infinity();
}

namespace detail {

/// One classical RK4 step of the linear system v' = L v is exactly
/// v <- (1 + z + z^2/2 + z^3/6 + z^4/24) v with z = h L.
inline ComplexMatrix rk4_step_map(const ComplexMatrix& l, double h) {
  const Eigen::Index n = l.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix z = h * l;
  ComplexMatrix t = id + z / 4.0;
  ComplexMatrix tmp(n, n);
  tmp.noalias() = z * t;
  t = id + tmp / 3.0;
  tmp.noalias() = z * t;
  t = id + tmp / 2.0;
  tmp.noalias() = z * t;
  return id + tmp;
}

/// base^k by binary powering.
inline ComplexMatrix matrix_power(ComplexMatrix base, long long k) {
  ComplexMatrix result;
  bool have = false;
  ComplexMatrix tmp(base.rows(), base.cols());
  while (k > 0) {
    if (k & 1) {
      if (have) {
        tmp.noalias() = result * base;
        result.swap(tmp);
      } else {
        result = base;
        have = true;
      }
    }
    k >>= 1;
    if (k > 0) {
      tmp.noalias() = base * base;
      base.swap(tmp);
    }
  }
  return have ? result : ComplexMatrix::Identity(base.rows(), base.cols());
}

inline OpenTrajectory evolve_open_fixed(const ComplexMatrix& l, const ComplexMatrix& rho0, std::span<const double> times,
                                        double step) {
  const Eigen::Index dim = rho0.rows();
  const Complex trace0 = rho0.trace();

  // Between consecutive outputs the interval is split into n equal RK4 steps
  // no longer than `step`; the n-step map is formed once per distinct (n, h).
  ComplexVector v = vec(rho0);
  ComplexMatrix propagator;
  long long cached_steps = -1;
  double cached_h = 0.0;

  OpenTrajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  double previous = 0.0;
  for (double t : times) {
    const double interval = t - previous;
    previous = t;
    if (interval > 0.0) {
      const long long steps =
          std::isfinite(step) ? std::max<long long>(1, static_cast<long long>(std::ceil(interval / step - 1e-9))) : 1;
      const double h = interval / static_cast<double>(steps);
      if (steps != cached_steps || std::abs(h - cached_h) > 1e-12 * h) {
        propagator = matrix_power(rk4_step_map(l, h), steps);
        cached_steps = steps;
        cached_h = h;
      }
      v = propagator * v;
    }

    ComplexMatrix rho = unvec(v, dim);
    const double drift = std::abs(rho.trace() - trace0);
    if (!(drift <= tol::trace_drift)) {
      throw StepRejected("evolve_open: trace drift " + std::to_string(drift) + " at t = " + std::to_string(t));
    }
    const double herm = hermitian_error(rho);
    if (!(herm <= tol::density_hermitian)) {
      throw NumericalError("evolve_open: Hermiticity lost (" + std::to_string(herm) + ") at t = " + std::to_string(t));
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double min_eig = diagnose(rho).min_eigenvalue;
    if (!(min_eig >= tol::density_min_eigenvalue)) {
      throw NumericalError("evolve_open: negative eigenvalue " + std::to_string(min_eig) + " at t = " + std::to_string(t));
    }
    traj.states.push_back(std::move(rho));
  }
  return traj;
}

}  // namespace detail

/// Fixed-step classical RK4 on vec(rho) from t = 0, sampled at `times`.
/// Output states are symmetrized; trace drift beyond tol::trace_drift halves
/// the step (up to max_halvings times) before StepRejected propagates.
inline OpenTrajectory evolve_open(const ComplexMatrix& l, const ComplexMatrix& rho0, std::span<const double> times,
                                  double step, int max_halvings = 4) {
  detail::require_square(l, "evolve_open");
  if (rho0.rows() * rho0.rows() != l.rows()) throw std::invalid_argument("evolve_open: Liouvillian/state dimension mismatch");
  require_density(rho0, "evolve_open");
  require_time_grid(times);
  if (!(step > 0.0)) throw std::invalid_argument("evolve_open: step must be > 0");

  for (int attempt = 0;; ++attempt) {
    try {
      return detail::evolve_open_fixed(l, rho0, times, step);
    } catch (const StepRejected&) {
      if (attempt >= max_halvings) throw;
      step *= 0.5;
    }
  }
}

struct SteadyState {
  ComplexMatrix rho;
  double residual = 0.0;  ///< ||L vec(rho)||
};

namespace detail {

/// Solves L x = 0 with tr(x) = 1 by replacing the first (diagonal-index)
/// equation, which is redundant because tr(L rho) = 0, with the trace row.
/// Empty when the constrained system is too close to singular to trust.
/// PartialPivLU::rcond() is blind to some exactly singular Liouvillians, so
/// the condition number is bounded from below with a fixed random solve.
inline std::optional<ComplexMatrix> trace_constrained_solve(const ComplexMatrix& l, Eigen::Index dim) {
  ComplexMatrix a = l;
  a.row(0).setZero();
  for (Eigen::Index k = 0; k < dim; ++k) a(0, k * dim + k) = 1.0;
  const Eigen::PartialPivLU<ComplexMatrix> lu(a);

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  ComplexVector probe(a.rows());
  for (Eigen::Index i = 0; i < probe.size(); ++i) probe(i) = Complex(normal(rng), normal(rng));
  const double cond_lower =
      a.cwiseAbs().colwise().sum().maxCoeff() * lu.solve(probe).lpNorm<1>() / probe.lpNorm<1>();
  if (!(cond_lower * tol::rank_deficiency < 1.0)) return std::nullopt;

  ComplexVector rhs = ComplexVector::Zero(l.rows());
  rhs(0) = 1.0;
  const ComplexVector x = lu.solve(rhs);
  if (!x.allFinite()) return std::nullopt;
  return unvec(x, dim);
}

/// Null-space route: rank-revealing and able to tell a degenerate null space
/// from a missing one.
inline ComplexMatrix steady_from_null_space(const ComplexMatrix& l, Eigen::Index dim) {
  ComplexMatrix basis;
  try {
    basis = null_vector(l);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("steady_state: no null vector found: ") + e.what());
  }
  if (basis.cols() > 1) {
    throw NumericalError("steady_state: degenerate null space of dimension " + std::to_string(basis.cols()));
  }
  ComplexMatrix rho = unvec(basis.col(0), dim);
  const Complex trace = rho.trace();
  if (std::abs(trace) < 1e-12) throw NumericalError("steady_state: null vector is traceless");
  return rho / trace;
}

}  // namespace detail

/// Unique trace-one fixed point of L. A trace-constrained LU solve is tried
/// first; ill-conditioned or inaccurate cases go through null_vector.
inline SteadyState steady_state(const ComplexMatrix& l) {
  detail::require_square(l, "steady_state");
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(l.rows()))));
  if (dim * dim != l.rows()) throw std::invalid_argument("steady_state: Liouvillian size is not a square");

  ComplexMatrix rho;
  double residual = std::numeric_limits<double>::infinity();
  if (auto fast = detail::trace_constrained_solve(l, dim)) {
    rho = std::move(*fast);
    residual = (l * vec(rho)).norm();
  }
  if (!(residual <= tol::steady_residual)) {
    rho = detail::steady_from_null_space(l, dim);
    residual = (l * vec(rho)).norm();
  }

  SteadyState ss;
  ss.residual = residual;
  if (!(ss.residual <= tol::steady_residual)) {
    throw NumericalError("steady_state: residual " + std::to_string(ss.residual) + " above bound");
  }
  const double herm = hermitian_error(rho);
  if (!(herm <= tol::density_hermitian)) {
    throw NumericalError("steady_state: not Hermitian (" + std::to_string(herm) + ")");
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double min_eig = diagnose(rho).min_eigenvalue;
  if (!(min_eig >= tol::density_min_eigenvalue)) {
    throw NumericalError("steady_state: negative eigenvalue " + std::to_string(min_eig));
  }
  ss.rho = std::move(rho);
  return ss;
}

/// Steady-state concurrence of the qubit pair at truncation nc.
inline double steady_entanglement(const ModelParams& p, int nc) {
  const OperatorSet ops = build_space(nc);
  const SteadyState ss = steady_state(liouvillian(p, ops));
  return concurrence(reduce_to_qubits(ss.rho, ops.space));
}

/// True iff E_ss at nc and nc + 2 agree to tol::truncation.
inline bool truncation_converged(const ModelParams& p, int nc) {
  if (nc < 4) throw std::invalid_argument("truncation_converged: nc must be >= 4");
  return std::abs(steady_entanglement(p, nc) - steady_entanglement(p, nc + 2)) <= tol::truncation;
}

}  // namespace qcavity
