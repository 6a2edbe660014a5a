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
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcavity/analysis.hpp"
#include "qcavity/config.hpp"
#include "qcavity/dynamics.hpp"
#include "qcavity/measures.hpp"
#include "qcavity/model.hpp"

namespace qcavity {

inline constexpr std::array<std::string_view, 7> kCommands{"threshold", "closed",      "open",    "steady",
                                                            "sweep-drive", "sweep-ratio", "features"};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Horizon of the `open` command when t_max is unset (units of 1/g1).
inline constexpr double kOpenHorizon = 2000.0;

inline bool is_command(std::string_view name) {
  return std::find(kCommands.begin(), kCommands.end(), name) != kCommands.end();
}

struct CommandResult {
  std::string csv;
  int status = kExitOk;
};

namespace detail {

inline constexpr std::string_view kNA = "NA";
inline constexpr std::string_view kErr = "ERR";

class CsvWriter {
 public:
  CsvWriter(std::string_view command, const RunConfig& cfg) {
    out_ << "# qcavity " << command << '\n';
    for (const auto& [key, value] : resolved_settings(cfg)) out_ << "# " << key << " = " << value << '\n';
  }

  void comment(std::string_view text) { out_ << "# " << text << '\n'; }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  [[nodiscard]] std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const char* v) { return v; }

  std::ostringstream out_;
};

inline std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(kNA); }

inline CommandResult run_threshold(const RunConfig& cfg) {
  CsvWriter csv("threshold", cfg);
  csv.row("nph", "c", "th_analytic", "th_numeric");
  const double delta = cfg.params.delta();
  for (int nph = 0; nph <= cfg.nph_max; ++nph) {
    csv.row(nph, 2 * nph + 1, threshold_analytic(nph), threshold_numeric(nph, cfg.threshold_step, delta));
  }
  return {csv.str(), kExitOk};
}

inline CommandResult run_closed(const RunConfig& cfg) {
  const EffectiveParams e = effective_params(cfg.nph, cfg.params);
  const double horizon = cfg.t_max.value_or(closed_horizon(e));
  CsvWriter csv("closed", cfg);
  if (!is_dispersive(e)) csv.comment("warning: |delta| < 10 max(g~1, g~2), outside the dispersive regime");
  csv.row("t", "E", "p10", "p01");
  for (const ClosedSample& s : closed_dynamics(e, linspace(0.0, horizon, cfg.n_steps))) {
    csv.row(s.t, s.entanglement, s.p10, s.p01);
  }
  return {csv.str(), kExitOk};
}

inline CommandResult run_open(const RunConfig& cfg) {
  const OperatorSet ops = build_space(cfg.nc);
  const ComplexMatrix h = h_rotating(cfg.params, ops);
  const ComplexMatrix l = liouvillian(cfg.params, ops);
  const ComplexVector psi0 = basis_state(ops.space, 0, cfg.nph, 1);
  const std::vector<double> times = linspace(0.0, cfg.t_max.value_or(kOpenHorizon), cfg.n_steps);
  const OpenTrajectory traj = evolve_open(l, psi0 * psi0.adjoint(), times, default_step(h, cfg.params));

  CsvWriter csv("open", cfg);
  csv.row("t", "sz1", "sz2", "nphot", "E");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ObservableRecord r = observe(traj.states[i], ops, traj.times[i]);
    csv.row(r.time, r.sz1, r.sz2, r.nphot, r.entanglement);
  }
  return {csv.str(), kExitOk};
}

inline CommandResult run_steady(const RunConfig& cfg) {
  const OperatorSet ops = build_space(cfg.nc);
  const SteadyState ss = steady_state(liouvillian(cfg.params, ops));
  const double e = concurrence(reduce_to_qubits(ss.rho, ops.space));
  std::optional<double> c;
  try {
    c = cross_correlation(ss.rho, ops);
  } catch (const NumericalError&) {
  }
  CsvWriter csv("steady", cfg);
  csv.comment(std::string("truncation_converged = ") + (truncation_converged(cfg.params, cfg.nc) ? "true" : "false"));
  csv.row("E_ss", "C_ss", "residual");
  csv.row(e, optional_cell(c), ss.residual);
  return {csv.str(), kExitOk};
}

inline CommandResult run_sweep(const RunConfig& cfg, bool ratio_axis) {
  const std::vector<double> values = ratio_axis ? linspace(cfg.ratio_min, cfg.ratio_max, cfg.ratio_steps)
                                                : linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_steps);
  SweepOptions options;
  options.nc = cfg.nc;
  options.cross_correlation = ratio_axis;
  const SweepTable table = sweep(ratio_axis ? SweepAxis::ratio : SweepAxis::drive, values, cfg.params, options);

  CsvWriter csv(ratio_axis ? "sweep-ratio" : "sweep-drive", cfg);
  if (ratio_axis) {
    csv.row("ratio", "E_ss", "C_ss");
  } else {
    csv.row("d", "E_ss");
  }
  for (const SweepRow& r : table.rows) {
    if (!r.ok()) {
      csv.comment("error at " + format_number(r.value) + ": " + r.error);
      if (ratio_axis) {
        csv.row(r.value, kErr, kErr);
      } else {
        csv.row(r.value, kErr);
      }
      continue;
    }
    if (ratio_axis) {
      csv.row(r.value, r.entanglement, optional_cell(r.correlation));
    } else {
      csv.row(r.value, r.entanglement);
    }
  }
  return {csv.str(), table.all_ok() ? kExitOk : kExitNumerical};
}

inline std::string fit_comment(std::string_view label, const std::vector<double>& xs, const std::vector<double>& ys) {
  std::string text = "fit " + std::string(label) + ": ";
  try {
    const LineFit fit = line_fit(xs, ys);
    return text + "slope = " + format_number(fit.slope) + ", intercept = " + format_number(fit.intercept) +
           ", rms = " + format_number(fit.rms_residual);
  } catch (const std::invalid_argument&) {
    return text + std::string(kNA);
  }
}

inline CommandResult run_features(const RunConfig& cfg) {
  if (static_cast<std::size_t>(cfg.ratio_steps) < kMinFeaturePoints) {
    const auto it = cfg.source_line.find("ratio_steps");
    throw ConfigError(it == cfg.source_line.end() ? 0 : it->second,
                      "ratio_steps: features need at least " + std::to_string(kMinFeaturePoints) + " points");
  }
  const std::vector<double> drives = linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_steps);
  const std::vector<double> ratios = linspace(cfg.ratio_min, cfg.ratio_max, cfg.ratio_steps);
  const double lo = cfg.fit_min.value_or(cfg.sweep_min);
  const double hi = cfg.fit_max.value_or(cfg.sweep_max);

  CsvWriter csv("features", cfg);
  csv.row("d", "g2r", "g2p");
  std::vector<double> fit_d, fit_g2r, fit_g2p;
  bool ok = true;
  for (double d : drives) {
    RunConfig point = cfg;
    point.params.drive = d;
    SweepOptions options;
    options.nc = cfg.nc;
    const SweepTable table = sweep(SweepAxis::ratio, ratios, point.params, options);
    if (!table.all_ok()) {
      ok = false;
      csv.comment("error at d = " + format_number(d) + ": steady state failed for part of the ratio grid");
      csv.row(d, kErr, kErr);
      continue;
    }
    const FeatureSet f = extract_features(table);
    csv.row(d, f.g2r, f.g2p);
    if (d >= lo && d <= hi) {
      fit_d.push_back(d);
      fit_g2r.push_back(f.g2r);
      fit_g2p.push_back(f.g2p);
    }
  }
  csv.comment(fit_comment("g2r", fit_d, fit_g2r));
  csv.comment(fit_comment("g2p", fit_d, fit_g2p));
  return {csv.str(), ok ? kExitOk : kExitNumerical};
}

}  // namespace detail

/// Runs one command on a validated config. Throws ConfigError for bad input
/// and NumericalError / std::exception for numerical failures; partial sweeps
/// return their rows with status kExitNumerical.
inline CommandResult run_command(std::string_view name, const RunConfig& cfg) {
  if (!is_command(name)) throw ConfigError(0, "unknown command '" + std::string(name) + "'");
  validate(cfg);
  if ((name == "threshold" || name == "closed") && cfg.params.delta() == 0.0) {
    const auto it = cfg.source_line.find("epsilon");
    throw ConfigError(it == cfg.source_line.end() ? 0 : it->second,
                      "epsilon: dispersive model needs epsilon != omega");
  }
  if (name == "threshold") return detail::run_threshold(cfg);
  if (name == "closed") return detail::run_closed(cfg);
  if (name == "open") return detail::run_open(cfg);
  if (name == "steady") return detail::run_steady(cfg);
  if (name == "sweep-drive") return detail::run_sweep(cfg, false);
  if (name == "sweep-ratio") return detail::run_sweep(cfg, true);
  return detail::run_features(cfg);
}

}  // namespace qcavity
