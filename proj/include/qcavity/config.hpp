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

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "qcavity/model.hpp"

namespace qcavity {

/// Bad configuration input. line() is the 1-based source line, 0 for
/// command-line overrides and defaults.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  ModelParams params;
  int nph = 1;
  int nc = 6;

  std::optional<double> t_max;  ///< unset: command-specific horizon
  int n_steps = 2000;           ///< time-grid points

  double sweep_min = 0.002;  ///< drive-axis grid
  double sweep_max = 0.1;
  int sweep_steps = 50;

  double ratio_min = 0.05;  ///< g2/g1-axis grid
  double ratio_max = 1.0;
  int ratio_steps = 96;

  std::optional<double> fit_min;  ///< drive window for feature line fits
  std::optional<double> fit_max;

  int nph_max = 3;
  double threshold_step = 0.01;

  std::string out;

  std::map<std::string, int, std::less<>> source_line;  ///< key -> line it was set on
};

/// Number formatting shared by config echo and CSV output: 12 significant
/// digits, locale independent.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a real number, got '" + std::string(text) + "'");
  }
  return v;
}

inline int parse_count(std::string_view text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

struct KeySpec {
  std::string_view name;
  void (*set)(RunConfig&, std::string_view);
  std::string (*get)(const RunConfig&);
};

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "auto"; }

// clang-format off
inline const std::array<KeySpec, 23> kKeys{{
    {"omega",   [](RunConfig& c, std::string_view v) { c.params.omega = parse_real(v); },   [](const RunConfig& c) { return format_number(c.params.omega); }},
    {"epsilon", [](RunConfig& c, std::string_view v) { c.params.epsilon = parse_real(v); }, [](const RunConfig& c) { return format_number(c.params.epsilon); }},
    {"g1",      [](RunConfig& c, std::string_view v) { c.params.g1 = parse_real(v); },      [](const RunConfig& c) { return format_number(c.params.g1); }},
    {"g2",      [](RunConfig& c, std::string_view v) { c.params.g2 = parse_real(v); },      [](const RunConfig& c) { return format_number(c.params.g2); }},
    {"omega_d", [](RunConfig& c, std::string_view v) { c.params.omega_d = parse_real(v); }, [](const RunConfig& c) { return format_number(c.params.omega_d); }},
    {"d",       [](RunConfig& c, std::string_view v) { c.params.drive = parse_real(v); },   [](const RunConfig& c) { return format_number(c.params.drive); }},
    {"kappa",   [](RunConfig& c, std::string_view v) { c.params.kappa = parse_real(v); },   [](const RunConfig& c) { return format_number(c.params.kappa); }},
    {"gamma",   [](RunConfig& c, std::string_view v) { c.params.gamma = parse_real(v); },   [](const RunConfig& c) { return format_number(c.params.gamma); }},
    {"nph",     [](RunConfig& c, std::string_view v) { c.nph = parse_count(v); },           [](const RunConfig& c) { return std::to_string(c.nph); }},
    {"nc",      [](RunConfig& c, std::string_view v) { c.nc = parse_count(v); },            [](const RunConfig& c) { return std::to_string(c.nc); }},
    {"t_max",   [](RunConfig& c, std::string_view v) { c.t_max = parse_real(v); },          [](const RunConfig& c) { return format_optional(c.t_max); }},
    {"n_steps", [](RunConfig& c, std::string_view v) { c.n_steps = parse_count(v); },       [](const RunConfig& c) { return std::to_string(c.n_steps); }},
    {"sweep_min",   [](RunConfig& c, std::string_view v) { c.sweep_min = parse_real(v); },    [](const RunConfig& c) { return format_number(c.sweep_min); }},
    {"sweep_max",   [](RunConfig& c, std::string_view v) { c.sweep_max = parse_real(v); },    [](const RunConfig& c) { return format_number(c.sweep_max); }},
    {"sweep_steps", [](RunConfig& c, std::string_view v) { c.sweep_steps = parse_count(v); }, [](const RunConfig& c) { return std::to_string(c.sweep_steps); }},
    {"ratio_min",   [](RunConfig& c, std::string_view v) { c.ratio_min = parse_real(v); },    [](const RunConfig& c) { return format_number(c.ratio_min); }},
    {"ratio_max",   [](RunConfig& c, std::string_view v) { c.ratio_max = parse_real(v); },    [](const RunConfig& c) { return format_number(c.ratio_max); }},
    {"ratio_steps", [](RunConfig& c, std::string_view v) { c.ratio_steps = parse_count(v); }, [](const RunConfig& c) { return std::to_string(c.ratio_steps); }},
    {"fit_min",     [](RunConfig& c, std::string_view v) { c.fit_min = parse_real(v); },      [](const RunConfig& c) { return format_optional(c.fit_min); }},
    {"fit_max",     [](RunConfig& c, std::string_view v) { c.fit_max = parse_real(v); },      [](const RunConfig& c) { return format_optional(c.fit_max); }},
    {"nph_max",     [](RunConfig& c, std::string_view v) { c.nph_max = parse_count(v); },     [](const RunConfig& c) { return std::to_string(c.nph_max); }},
    {"threshold_step", [](RunConfig& c, std::string_view v) { c.threshold_step = parse_real(v); }, [](const RunConfig& c) { return format_number(c.threshold_step); }},
    {"out",     [](RunConfig& c, std::string_view v) { c.out = std::string(v); },           [](const RunConfig& c) { return c.out.empty() ? std::string("-") : c.out; }},
}};
// clang-format on

/// Keys accept '-' in place of '_' (nph-max == nph_max).
inline std::string normalize_key(std::string_view key) {
  std::string k(key);
  for (char& ch : k) {
    if (ch == '-') ch = '_';
  }
  return k;
}

}  // namespace detail

/// Sets one key; `line` is reported with any error.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, int line) {
  const std::string k = detail::normalize_key(detail::trim(key));
  value = detail::trim(value);
  for (const detail::KeySpec& spec : detail::kKeys) {
    if (spec.name != k) continue;
    if (value.empty()) throw ConfigError(line, "missing value for '" + k + "'");
    try {
      spec.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, "key '" + k + "': " + e.what());
    }
    cfg.source_line[k] = line;
    return;
  }
  throw ConfigError(line, "unknown key '" + k + "'");
}

/// Applies a `key=value` command-line override.
inline void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(0, "override '" + std::string(assignment) + "' is not of the form key=value");
  }
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1), 0);
}

/// Checks every invariant; the error names the line of the offending key.
inline void validate(const RunConfig& cfg) {
  const auto line_of = [&](std::string_view key) {
    const auto it = cfg.source_line.find(key);
    return it == cfg.source_line.end() ? 0 : it->second;
  };
  const auto require = [&](bool ok, std::string_view key, const std::string& message) {
    if (!ok) throw ConfigError(line_of(key), std::string(key) + ": " + message);
  };

  const ModelParams& p = cfg.params;
  require(p.g1 > 0.0, "g1", "must be > 0");
  for (const auto& [key, value] : std::initializer_list<std::pair<std::string_view, double>>{
           {"omega", p.omega}, {"epsilon", p.epsilon}, {"g2", p.g2}, {"omega_d", p.omega_d},
           {"d", p.drive}, {"kappa", p.kappa}, {"gamma", p.gamma}}) {
    require(value >= 0.0, key, "rate must be >= 0");
  }
  require(cfg.nph >= 0, "nph", "must be >= 0");
  require(cfg.nc >= cfg.nph + 3, cfg.source_line.contains("nc") ? "nc" : "nph",
          "truncation nc = " + std::to_string(cfg.nc) + " needs nc >= nph + 3");
  require(!cfg.t_max || *cfg.t_max > 0.0, "t_max", "must be > 0");
  require(cfg.n_steps >= 2, "n_steps", "must be >= 2");
  require(cfg.sweep_steps >= 2, "sweep_steps", "must be >= 2");
  require(cfg.ratio_steps >= 2, "ratio_steps", "must be >= 2");
  require(cfg.sweep_min >= 0.0 && cfg.sweep_min < cfg.sweep_max, "sweep_min", "need 0 <= sweep_min < sweep_max");
  require(cfg.ratio_min >= 0.0 && cfg.ratio_min < cfg.ratio_max, "ratio_min", "need 0 <= ratio_min < ratio_max");
  require(!cfg.fit_min || !cfg.fit_max || *cfg.fit_min <= *cfg.fit_max, "fit_min", "must be <= fit_max");
  require(cfg.nph_max >= 0, "nph_max", "must be >= 0");
  require(cfg.threshold_step > 0.0 && cfg.threshold_step <= 0.01, "threshold_step", "must be in (0, 0.01]");
}

/// Parses `key = value` lines; `#` starts a comment. Missing keys keep their
/// defaults. The result is validated.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1), line_no);
  }
  validate(cfg);
  return cfg;
}

/// Resolved settings in canonical key order, for provenance output.
inline std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const detail::KeySpec& spec : detail::kKeys) out.emplace_back(std::string(spec.name), spec.get(cfg));
  return out;
}

}  // namespace qcavity
