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
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qcavity/dynamics.hpp"
#include "qcavity/hilbert.hpp"
#include "qcavity/measures.hpp"
#include "qcavity/model.hpp"
#include "qcavity/numerics.hpp"

namespace qcavity {

// ---------------------------------------------------------------------------
// Closed-system results on the dispersive two-qubit model
// ---------------------------------------------------------------------------

struct EigenPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// lambda_pm = (g~1^2 + g~2^2)/delta
///           +- sqrt((g~1^2 + g~2^2)^2/delta^2 - 4 g~1^2 g~2^2 (1 - 1/c^2)/delta^2).
///
/// These are twice the eigenvalues of the Stark-shifted block
/// [[g~1^2/delta, J], [J, g~2^2/delta]], J = g~1 g~2 / (c delta).
inline EigenPair lambda_pm(const EffectiveParams& e) {
  const double a = e.g1t * e.g1t;
  const double b = e.g2t * e.g2t;
  const double d2 = e.delta * e.delta;
  const double disc = (a + b) * (a + b) / d2 - 4.0 * a * b * (1.0 - 1.0 / (e.c * e.c)) / d2;
  if (disc < 0.0) throw std::logic_error("lambda_pm: negative discriminant");
  const double centre = (a + b) / e.delta;
  return {centre + std::sqrt(disc), centre - std::sqrt(disc)};
}

/// The Stark-shifted effective block on {|10>_q, |01>_q} whose eigenvalues are
/// lambda_pm / 2. Differs from h_effective by the constant (g~1^2+g~2^2)/(2 delta).
inline ComplexMatrix stark_block(const EffectiveParams& e) {
  ComplexMatrix h(2, 2);
  h(0, 0) = e.g1t * e.g1t / e.delta;
  h(1, 1) = e.g2t * e.g2t / e.delta;
  h(0, 1) = h(1, 0) = e.g1t * e.g2t / (e.c * e.delta);
  return h;
}

struct MesCheck {
  double lhs = 0.0;
  bool satisfied = false;
};

/// x + 1/x <= 6 with x = (g~2^2/delta - lambda_-)^2 / (g~1 g~2 / (c delta))^2,
/// lambda_- being the lower eigenvalue of stark_block (i.e. lambda_pm().minus / 2).
/// x is the squared amplitude ratio of the block's eigenvector, and the
/// inequality is equivalent to a transfer probability of at least 1/2.
inline MesCheck mes_inequality(const EffectiveParams& e) {
  const double coupling = e.g1t * e.g2t / (e.c * e.delta);
  if (coupling == 0.0) throw std::invalid_argument("mes_inequality: zero coupling (g2 = 0)");
  const double lower = 0.5 * lambda_pm(e).minus;
  const double gap = e.g2t * e.g2t / e.delta - lower;
  if (gap == 0.0) throw std::invalid_argument("mes_inequality: zero denominator");
  const double x = (gap * gap) / (coupling * coupling);
  MesCheck out;
  out.lhs = x + 1.0 / x;
  out.satisfied = out.lhs <= 6.0;
  return out;
}

/// Smallest g2/g1 giving a maximally entangled peak: c / (1 + sqrt(1 + c^2)).
inline double threshold_analytic(int nph) {
  if (nph < 0) throw std::invalid_argument("threshold_analytic: nph must be >= 0");
  const double c = 2.0 * nph + 1.0;
  return c / (1.0 + std::sqrt(1.0 + c * c));
}

struct RabiPeak {
  double p_max = 0.0;
  double e_peak = 0.0;
};

/// Closed-form Rabi transfer |01> -> |10>: p_max = J^2 / (J^2 + Delta^2) and the
/// peak concurrence 2 sqrt(p (1 - p)) maximised over p in [0, p_max].
inline RabiPeak rabi_peak(const EffectiveParams& e) {
  const double j = e.g1 * e.g2 / e.delta;
  const double half = e.c * (e.g1 * e.g1 - e.g2 * e.g2) / (2.0 * e.delta);
  if (j == 0.0 && half == 0.0) return {0.0, 0.0};
  RabiPeak r;
  r.p_max = j * j / (j * j + half * half);
  r.e_peak = r.p_max >= 0.5 ? 1.0 : 2.0 * std::sqrt(r.p_max * (1.0 - r.p_max));
  return r;
}

/// Rabi frequency sqrt(J^2 + Delta^2) of the effective model.
inline double rabi_frequency(const EffectiveParams& e) {
  return std::hypot(e.exchange(), e.half_splitting());
}

/// Pure pair state a|10> + b|01> written on the two-qubit basis q1 * 2 + q2.
inline ComplexVector embed_pair(const ComplexVector& pair) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(2) = pair(0);
  psi(1) = pair(1);
  return psi;
}

struct ClosedSample {
  double t = 0.0;
  double entanglement = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
};

/// Effective-model dynamics from |01>_q sampled on `times`.
inline std::vector<ClosedSample> closed_dynamics(const EffectiveParams& e, std::span<const double> times) {
  ComplexVector start = ComplexVector::Zero(2);
  start(1) = 1.0;
  const ClosedTrajectory traj = evolve_closed(h_effective(e), start, times);
  std::vector<ClosedSample> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ComplexVector psi = embed_pair(traj.states[i]);
    const ComplexMatrix rho = psi * psi.adjoint();
    out.push_back({traj.times[i], concurrence(rho), std::norm(traj.states[i](0)), std::norm(traj.states[i](1))});
  }
  return out;
}

/// Default closed-dynamics window 4 pi / Omega (two full transfer cycles of the amplitude).
inline double closed_horizon(const EffectiveParams& e) {
  const double omega = rabi_frequency(e);
  if (omega == 0.0) throw std::invalid_argument("closed_horizon: no dynamics (J = Delta = 0)");
  return 4.0 * std::numbers::pi / omega;
}

inline constexpr int kClosedSamples = 2000;

/// Peak concurrence of the numerically evolved effective model over
/// [0, 4 pi / Omega] sampled at kClosedSamples points.
inline Peak numeric_peak(const EffectiveParams& e, int samples = kClosedSamples) {
  const std::vector<double> times = linspace(0.0, closed_horizon(e), samples);
  const std::vector<ClosedSample> dyn = closed_dynamics(e, times);
  std::vector<double> values(dyn.size());
  std::transform(dyn.begin(), dyn.end(), values.begin(), [](const ClosedSample& s) { return s.entanglement; });
  return peak_entanglement(times, values);
}

/// Smallest g2/g1 whose numerically evolved peak is maximally entangled
/// (E_p >= 1 - tol::mes): scan a grid of spacing grid_step on (0, 1], then
/// bisect the bracketing cell to tol::threshold_bisection.
inline double threshold_numeric(int nph, double grid_step, double delta = 40.0) {
  if (!(grid_step > 0.0) || grid_step > 0.01) throw std::invalid_argument("threshold_numeric: grid_step must be in (0, 0.01]");
  const auto is_mes = [&](double ratio) {
    return numeric_peak(effective_params(nph, 1.0, ratio, delta)).value >= 1.0 - tol::mes;
  };

  const int cells = static_cast<int>(std::ceil(1.0 / grid_step - 1e-9));
  double below = 0.0;
  for (int k = 1; k <= cells; ++k) {
    const double ratio = std::min(1.0, k * grid_step);
    if (!is_mes(ratio)) {
      below = ratio;
      continue;
    }
    if (k == 1) return ratio;
    double lo = below;
    double hi = ratio;
    while (hi - lo > tol::threshold_bisection) {
      const double mid = 0.5 * (lo + hi);
      (is_mes(mid) ? hi : lo) = mid;
    }
    return hi;
  }
  throw NumericalError("threshold_numeric: no maximally entangled peak on (0, 1]");
}

/// Concurrence trace of the full cavity model started in |0, nph, 1>.
inline std::vector<double> full_closed_entanglement(const ModelParams& p, int nph, int nc, std::span<const double> times) {
  const OperatorSet ops = build_space(nc);
  const ClosedTrajectory traj = evolve_closed(h_model(p, ops), basis_state(ops.space, 0, nph, 1), times);
  std::vector<double> out;
  out.reserve(traj.size());
  for (const ComplexVector& psi : traj.states) {
    out.push_back(concurrence(reduce_to_qubits(psi * psi.adjoint(), ops.space)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Steady-state sweeps
// ---------------------------------------------------------------------------

enum class SweepAxis { omega, epsilon, g1, g2, omega_d, drive, kappa, gamma, ratio };

inline std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::omega: return "omega";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::g1: return "g1";
    case SweepAxis::g2: return "g2";
    case SweepAxis::omega_d: return "omega_d";
    case SweepAxis::drive: return "d";
    case SweepAxis::kappa: return "kappa";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::ratio: return "ratio";
  }
  return "?";
}

inline std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::omega, SweepAxis::epsilon, SweepAxis::g1, SweepAxis::g2, SweepAxis::omega_d,
                      SweepAxis::drive, SweepAxis::kappa, SweepAxis::gamma, SweepAxis::ratio}) {
    if (axis_name(a) == name) return a;
  }
  return std::nullopt;
}

/// base with one parameter replaced; `ratio` sets g2 = value * g1.
inline ModelParams with_axis(ModelParams p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::omega: p.omega = value; break;
    case SweepAxis::epsilon: p.epsilon = value; break;
    case SweepAxis::g1: p.g1 = value; break;
    case SweepAxis::g2: p.g2 = value; break;
    case SweepAxis::omega_d: p.omega_d = value; break;
    case SweepAxis::drive: p.drive = value; break;
    case SweepAxis::kappa: p.kappa = value; break;
    case SweepAxis::gamma: p.gamma = value; break;
    case SweepAxis::ratio: p.g2 = value * p.g1; break;
  }
  return p;
}

struct SweepOptions {
  int nc = 6;
  bool cross_correlation = false;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

struct SweepRow {
  double value = 0.0;
  double entanglement = 0.0;
  double sz1 = 0.0;
  double sz2 = 0.0;
  double nphot = 0.0;
  double residual = 0.0;
  std::optional<double> correlation;  ///< empty when not requested or undefined
  std::string error;                  ///< non-empty marks a failed point

  [[nodiscard]] bool ok() const { return error.empty(); }
};

struct SweepTable {
  SweepAxis axis = SweepAxis::drive;
  ModelParams base;
  int nc = 0;
  std::vector<SweepRow> rows;

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> v;
    for (const SweepRow& r : rows) v.push_back(r.value);
    return v;
  }
  [[nodiscard]] bool all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok(); });
  }
};

inline SweepRow steady_point(const ModelParams& p, const OperatorSet& ops, bool with_correlation) {
  SweepRow row;
  try {
    validate(p);
    const SteadyState ss = steady_state(liouvillian(p, ops));
    const ObservableRecord obs = observe(ss.rho, ops);
    row.entanglement = obs.entanglement;
    row.sz1 = obs.sz1;
    row.sz2 = obs.sz2;
    row.nphot = obs.nphot;
    row.residual = ss.residual;
    if (with_correlation) {
      try {
        row.correlation = cross_correlation(ss.rho, ops);
      } catch (const NumericalError&) {
        row.correlation.reset();
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Steady-state observables at each grid value. Points are independent and may
/// be evaluated concurrently; rows come back in input order, failed points carry
/// their error message instead of aborting the sweep.
inline SweepTable sweep(SweepAxis axis, std::span<const double> values, const ModelParams& base,
                        const SweepOptions& options = {}) {
  if (values.empty()) throw std::invalid_argument("sweep: no grid values");
  validate(base);

  SweepTable table;
  table.axis = axis;
  table.base = base;
  table.nc = options.nc;
  table.rows.resize(values.size());
  const OperatorSet ops = build_space(options.nc);

  const auto evaluate = [&](std::size_t i) {
    table.rows[i] = steady_point(with_axis(base, axis, values[i]), ops, options.cross_correlation);
    table.rows[i].value = values[i];
  };

  unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(values.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < values.size(); ++i) evaluate(i);
    return table;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < values.size(); i = next++) evaluate(i);
      });
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Feature extraction over g2/g1 sweeps
// ---------------------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

struct FeatureSet {
  double drive = 0.0;
  double g2r = 0.0;  ///< width of the E_ss = 0 valley in g2/g1
  double g2p = 0.0;  ///< g2/g1 at the E_ss maximum
  bool peak_at_boundary = false;
  std::optional<Interval> valley;
};

inline constexpr std::size_t kMinFeaturePoints = 50;

namespace detail {

inline void require_ratio_table(const SweepTable& table, const char* what) {
  if (table.rows.empty()) throw std::invalid_argument(std::string(what) + ": empty table");
  if (table.axis != SweepAxis::ratio) throw std::invalid_argument(std::string(what) + ": table axis must be g2/g1");
  if (!table.all_ok()) throw std::invalid_argument(std::string(what) + ": table contains failed points");
}

}  // namespace detail

/// Widest contiguous run of rows with E_ss <= zero_tol, as an axis interval.
inline std::optional<Interval> zero_valley(const SweepTable& table, double zero_tol) {
  std::optional<Interval> best;
  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t i = 0; i <= table.rows.size(); ++i) {
    const bool zero = i < table.rows.size() && table.rows[i].entanglement <= zero_tol;
    if (zero && !in_run) {
      run_start = i;
      in_run = true;
    } else if (!zero && in_run) {
      const Interval run{table.rows[run_start].value, table.rows[i - 1].value};
      if (!best || run.width() > best->width()) best = run;
      in_run = false;
    }
  }
  return best;
}

inline FeatureSet extract_features(const SweepTable& table, double zero_tol = tol::zero_entanglement) {
  detail::require_ratio_table(table, "extract_features");
  if (table.rows.size() < kMinFeaturePoints) {
    throw std::invalid_argument("extract_features: need at least " + std::to_string(kMinFeaturePoints) + " points");
  }
  FeatureSet f;
  f.drive = table.base.drive;
  f.valley = zero_valley(table, zero_tol);
  f.g2r = f.valley ? f.valley->width() : 0.0;

  const std::vector<double> xs = table.values();
  std::vector<double> es;
  for (const SweepRow& r : table.rows) es.push_back(r.entanglement);
  const Peak peak = peak_entanglement(xs, es);
  f.g2p = peak.time;
  f.peak_at_boundary = peak.time == xs.front() || peak.time == xs.back();
  return f;
}

/// Region of suppressed E_ss: the zero valley when there is one, otherwise the
/// half-depth neighbourhood of the deepest interior local minimum (points whose
/// E_ss lies below the midpoint between that minimum and the lower of the two
/// flanking maxima). Empty when E_ss has no interior minimum.
inline std::optional<Interval> dip_region(const SweepTable& table, double zero_tol = tol::zero_entanglement) {
  detail::require_ratio_table(table, "dip_region");
  if (auto valley = zero_valley(table, zero_tol)) return valley;

  const auto& rows = table.rows;
  const std::size_t n = rows.size();
  std::optional<std::size_t> deepest;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double e = rows[i].entanglement;
    if (e <= rows[i - 1].entanglement && e <= rows[i + 1].entanglement &&
        (e < rows[i - 1].entanglement || e < rows[i + 1].entanglement)) {
      if (!deepest || e < rows[*deepest].entanglement) deepest = i;
    }
  }
  if (!deepest) return std::nullopt;

  const std::size_t m = *deepest;
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < m; ++i) left = std::max(left, rows[i].entanglement);
  for (std::size_t i = m + 1; i < n; ++i) right = std::max(right, rows[i].entanglement);
  const double floor = rows[m].entanglement;
  const double level = floor + 0.5 * (std::min(left, right) - floor);

  std::size_t lo = m;
  std::size_t hi = m;
  while (lo > 0 && rows[lo - 1].entanglement <= level) --lo;
  while (hi + 1 < n && rows[hi + 1].entanglement <= level) ++hi;
  return Interval{rows[lo].value, rows[hi].value};
}

}  // namespace qcavity
