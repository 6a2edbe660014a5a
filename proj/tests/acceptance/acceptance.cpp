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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcavity/qcavity.hpp"

using namespace qcavity;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr int kNc = 6;

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

Outcome start() { return {true, ""}; }

/// Records one sub-check; failed ones are marked with [x].
void check(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "[x] ") + what;
}

// Steady-state sweeps are shared between criteria.
const SweepTable& ratio_table(double drive) {
  static std::map<double, SweepTable> cache;
  auto it = cache.find(drive);
  if (it != cache.end()) return it->second;
  ModelParams p;
  p.drive = drive;
  SweepOptions options;
  options.nc = kNc;
  options.cross_correlation = true;
  const std::vector<double> ratios = linspace(0.05, 1.0, 96);
  return cache.emplace(drive, sweep(SweepAxis::ratio, ratios, p, options)).first->second;
}

const SweepTable& drive_table() {
  static const SweepTable table = [] {
    SweepOptions options;
    options.nc = kNc;
    return sweep(SweepAxis::drive, linspace(0.002, 0.1, 50), ModelParams{}, options);
  }();
  return table;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix diff = a - b;
  return 0.5 * eig_herm(0.5 * (diff + diff.adjoint())).values.cwiseAbs().sum();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome threshold_reproduction() {
  Outcome o = start();
  const auto t0 = std::chrono::steady_clock::now();
  for (int nph = 0; nph <= 3; ++nph) {
    const double numeric = threshold_numeric(nph, 0.01);
    const double analytic = threshold_analytic(nph);
    check(o, std::abs(numeric - analytic) <= 0.01,
          "N_ph=" + std::to_string(nph) + " numeric " + num(numeric) + " vs " + num(analytic));
  }
  const double elapsed = seconds_since(t0);
  check(o, elapsed < 10.0, "runtime " + num(elapsed) + " s");
  return o;
}

Outcome monotone_threshold() {
  Outcome o = start();
  bool increasing = true;
  for (int n = 0; n < 1000; ++n) increasing = increasing && threshold_analytic(n + 1) > threshold_analytic(n);
  check(o, increasing, "strictly increasing over N_ph 0..1000");
  check(o, threshold_analytic(20) >= 0.975, "N_ph=20 -> " + num(threshold_analytic(20)));
  return o;
}

Outcome symmetric_mes() {
  Outcome o = start();
  for (int nph = 0; nph <= 2; ++nph) {
    const double e = numeric_peak(effective_params(nph, 1.0, 1.0, 40.0)).value;
    check(o, std::abs(e - 1.0) <= 1e-3, "N_ph=" + std::to_string(nph) + " E_p " + num(e));
  }
  return o;
}

Outcome sub_threshold_peak() {
  Outcome o = start();
  const double e1 = numeric_peak(effective_params(1, 1.0, 0.6, 40.0)).value;
  const double e0 = numeric_peak(effective_params(0, 1.0, 0.6, 40.0)).value;
  check(o, std::abs(e1 - 0.899) <= 0.005, "ratio 0.6 N_ph=1 E_p " + num(e1));
  check(o, std::abs(e0 - 1.0) <= 1e-3, "ratio 0.6 N_ph=0 E_p " + num(e0));
  return o;
}

Outcome effective_vs_full() {
  Outcome o = start();
  const auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.omega = 10.0;
  p.epsilon = 50.0;  // delta = +40
  p.g2 = 0.8;
  const int nph = 1;
  const EffectiveParams e = effective_params(nph, p);
  const std::vector<double> times = linspace(0.0, 2.0 * std::numbers::pi / rabi_frequency(e), 1000);
  const std::vector<double> full = full_closed_entanglement(p, nph, kNc, times);
  const std::vector<ClosedSample> eff = closed_dynamics(e, times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(full[i] - eff[i].entanglement));
  const double elapsed = seconds_since(t0);
  check(o, worst <= 0.05, "max |E_full - E_eff| " + num(worst));
  check(o, elapsed < 30.0, "runtime " + num(elapsed) + " s");
  return o;
}

Outcome undriven_steady_state() {
  Outcome o = start();
  ModelParams p;
  p.drive = 0.0;
  const OperatorSet ops = build_space(kNc);
  const SteadyState ss = steady_state(liouvillian(p, ops));
  const ComplexVector ground = basis_state(ops.space, 0, 0, 0);
  const double fidelity = (ground.adjoint() * ss.rho * ground)(0).real();
  const ObservableRecord r = observe(ss.rho, ops);
  check(o, fidelity >= 0.999, "fidelity " + num(fidelity));
  check(o, r.entanglement <= 1e-6, "E_ss " + num(r.entanglement));
  check(o, std::abs(r.sz1 + 0.5) <= 1e-3 && std::abs(r.sz2 + 0.5) <= 1e-3,
        "<s1z> " + num(r.sz1) + ", <s2z> " + num(r.sz2));
  return o;
}

Outcome driven_steady_state() {
  Outcome o = start();
  const ModelParams p;  // d = 0.01, omega_d = 9.99, g1 = g2
  const OperatorSet ops = build_space(kNc);
  const ObservableRecord r = observe(steady_state(liouvillian(p, ops)).rho, ops);
  check(o, r.entanglement >= 1e-3, "E_ss " + num(r.entanglement));
  check(o, r.sz1 > -0.5 && r.sz2 > -0.5, "<s1z> " + num(r.sz1) + ", <s2z> " + num(r.sz2));
  return o;
}

Outcome drive_optimum() {
  Outcome o = start();
  const SweepTable& t = drive_table();
  check(o, t.all_ok(), "all points solved");
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (t.rows[i].entanglement > t.rows[best].entanglement) best = i;
  }
  const double peak = t.rows[best].entanglement;
  check(o, best != 0 && best + 1 != t.rows.size(), "peak " + num(peak) + " at d = " + num(t.rows[best].value));
  check(o, t.rows.front().entanglement < 0.5 * peak && t.rows.back().entanglement < 0.5 * peak,
        "endpoints " + num(t.rows.front().entanglement) + ", " + num(t.rows.back().entanglement));
  return o;
}

Outcome valley_and_hump() {
  Outcome o = start();
  const SweepTable& strong = ratio_table(0.016);
  const FeatureSet f = extract_features(strong);
  check(o, f.valley.has_value() && f.g2r > 0.0,
        "d=0.016 valley " + (f.valley ? "[" + num(f.valley->lo) + ", " + num(f.valley->hi) + "]" : std::string("none")));
  bool hump = false;
  double hump_at = 0.0;
  if (f.valley) {
    const auto& rows = strong.rows;
    for (std::size_t i = 1; i + 1 < rows.size() && rows[i].value < f.valley->lo; ++i) {
      if (rows[i].entanglement > rows[i - 1].entanglement && rows[i].entanglement >= rows[i + 1].entanglement &&
          rows[i].entanglement > tol::zero_entanglement) {
        hump = true;
        hump_at = rows[i].value;
      }
    }
  }
  check(o, hump, "local maximum below the valley at " + num(hump_at));
  const FeatureSet weak = extract_features(ratio_table(0.006));
  check(o, weak.g2r == 0.0, "d=0.006 g2r " + num(weak.g2r));
  return o;
}

Outcome correlation_alignment() {
  Outcome o = start();
  const SweepTable& t = ratio_table(0.01);
  const auto dip = dip_region(t);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (!t.rows[i].correlation) continue;
    if (!best || *t.rows[i].correlation > *t.rows[*best].correlation) best = i;
  }
  check(o, dip.has_value(), dip ? "dip [" + num(dip->lo) + ", " + num(dip->hi) + "]" : std::string("no dip"));
  check(o, best.has_value(), best ? "C_ss max at " + num(t.rows[*best].value) : std::string("C_ss undefined"));
  if (dip && best) {
    const double resolution = t.rows[1].value - t.rows[0].value;
    check(o, dip->contains(t.rows[*best].value, resolution), "C_ss peak inside the dip region");
  }
  return o;
}

Outcome feature_trends() {
  Outcome o = start();
  const std::vector<double> drives{0.002, 0.004, 0.006, 0.008, 0.010, 0.012, 0.014, 0.016,
                                   0.018, 0.020, 0.025, 0.030, 0.040, 0.050, 0.060};
  std::vector<double> valley_d, valley_w;
  std::map<double, FeatureSet> features;
  for (double d : drives) {
    const FeatureSet f = extract_features(ratio_table(d));
    features[d] = f;
    if (f.g2r > 0.0) {
      valley_d.push_back(d);
      valley_w.push_back(f.g2r);
    }
  }

  bool monotone = valley_w.size() >= 2;
  for (std::size_t i = 1; i < valley_w.size(); ++i) monotone = monotone && valley_w[i] >= valley_w[i - 1] - 1e-12;
  check(o, monotone, "g2r non-decreasing over " + std::to_string(valley_w.size()) + " drives with valleys");
  if (valley_w.size() >= 2) {
    const LineFit fit = line_fit(valley_d, valley_w);
    check(o, fit.slope > 0.0, "g2r fit slope " + num(fit.slope));
  }

  for (double d : {0.04, 0.05, 0.06}) {
    const FeatureSet& f = features.at(d);
    check(o, std::abs(f.g2p - 1.0) <= 0.05,
          "d=" + num(d) + " g2p " + num(f.g2p) + (f.peak_at_boundary ? " (boundary)" : ""));
  }
  const double low = features.at(0.004).g2p;
  check(o, low >= 0.3 && low <= 0.7, "d=0.004 g2p " + num(low));
  return o;
}

Outcome physical_validity() {
  Outcome o = start();
  const OperatorSet ops = build_space(kNc);
  double drift = 0.0, herm = 0.0, min_eig = 1.0;
  for (double d : {0.0, 0.01, 0.016}) {
    ModelParams p;
    p.drive = d;
    const ComplexVector psi0 = basis_state(ops.space, 0, 1, 1);
    const OpenTrajectory traj = evolve_open(liouvillian(p, ops), psi0 * psi0.adjoint(), linspace(0.0, 2000.0, 41),
                                            default_step(h_rotating(p, ops), p));
    for (const ComplexMatrix& rho : traj.states) {
      const DensityDiagnostics diag = diagnose(rho);
      drift = std::max(drift, std::abs(diag.trace - 1.0));
      herm = std::max(herm, diag.hermitian_error);
      min_eig = std::min(min_eig, diag.min_eigenvalue);
    }
  }
  check(o, drift <= 1e-8, "trace drift " + num(drift));
  check(o, herm <= 1e-9, "Hermiticity " + num(herm));
  check(o, min_eig >= -1e-8, "min eigenvalue " + num(min_eig));

  double residual = 0.0;
  std::size_t points = 0;
  bool solved = true;
  for (const SweepTable* t : {&drive_table(), &ratio_table(0.006), &ratio_table(0.01), &ratio_table(0.016)}) {
    solved = solved && t->all_ok();
    for (const SweepRow& r : t->rows) {
      residual = std::max(residual, r.residual);
      ++points;
    }
  }
  check(o, solved && residual <= 1e-10, "steady residual " + num(residual) + " over " + std::to_string(points) + " points");

  bool converged = true;
  for (double d : {0.0, 0.006, 0.01, 0.016}) {
    for (double ratio : {0.3, 1.0}) {
      ModelParams p;
      p.drive = d;
      p.g2 = ratio;
      converged = converged && truncation_converged(p, kNc);
    }
  }
  check(o, converged, "truncation converged at N_c=" + std::to_string(kNc));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o = start();
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const OperatorSet ops = build_space(kNc);
  double worst = 0.0;
  for (int draw = 0; draw < 3; ++draw) {
    ModelParams p;
    p.drive = 0.004 + 0.016 * u(rng);
    p.g2 = 0.3 + 0.7 * u(rng);
    p.gamma = 0.005 + 0.005 * u(rng);
    const ComplexMatrix l = liouvillian(p, ops);
    const SteadyState ss = steady_state(l);
    const ComplexVector psi0 = basis_state(ops.space, 0, 1, 1);
    const OpenTrajectory traj = evolve_open(l, psi0 * psi0.adjoint(), std::vector<double>{20.0 / p.gamma},
                                            default_step(h_rotating(p, ops), p));
    worst = std::max(worst, trace_distance(traj.states.back(), ss.rho));
  }
  check(o, worst <= 1e-4, "steady vs long-time trace distance " + num(worst));

  double gap = 0.0;
  int points = 0;
  for (double ratio : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    for (int nph = 0; nph <= 3; ++nph) {
      const EffectiveParams e = effective_params(nph, 1.0, ratio, -40.0);
      gap = std::max(gap, std::abs(numeric_peak(e).value - rabi_peak(e).e_peak));
      ++points;
    }
  }
  check(o, gap <= 1e-6, "numeric vs closed-form E_p " + num(gap) + " over " + std::to_string(points) + " points");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"threshold reproduction", threshold_reproduction},
      {"monotone approach to unity", monotone_threshold},
      {"symmetric-coupling MES", symmetric_mes},
      {"sub-threshold peak value", sub_threshold_peak},
      {"effective vs full model", effective_vs_full},
      {"undriven steady state", undriven_steady_state},
      {"driven steady state", driven_steady_state},
      {"non-monotonic drive dependence", drive_optimum},
      {"valley-hump structure", valley_and_hump},
      {"cross-correlation alignment", correlation_alignment},
      {"feature trends", feature_trends},
      {"physical validity", physical_validity},
      {"oracle equivalence", oracle_equivalence},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << ". " << criteria[i].first << " ("
              << std::fixed << std::setprecision(1) << seconds_since(t0) << " s): " << std::defaultfloat << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
