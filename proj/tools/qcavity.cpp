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

// qcavity <command> [--config FILE] [--set key=value ...] [--out PATH]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qcavity/commands.hpp"
#include "qcavity/config.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qcavity::ConfigError(0, "cannot open config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two qubits in a common cavity: entanglement thresholds, dynamics and steady states"};
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;

  std::string commands;
  for (std::string_view c : qcavity::kCommands) commands += (commands.empty() ? "" : ", ") + std::string(c);
  app.add_option("command", command, "One of: " + commands)
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(qcavity::kCommands.begin(), qcavity::kCommands.end())));
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "Override a key (key=value); repeatable")->take_all();
  app.add_option("--out", out_path, "Write CSV here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcavity::kExitConfig;
  }

  qcavity::CommandResult result;
  std::string destination;
  try {
    qcavity::RunConfig cfg = config_path.empty() ? qcavity::parse_config("") : qcavity::parse_config(read_file(config_path));
    for (const std::string& o : overrides) qcavity::apply_override(cfg, o);
    qcavity::validate(cfg);
    destination = out_path.empty() ? cfg.out : out_path;
    result = qcavity::run_command(command, cfg);
  } catch (const qcavity::ConfigError& e) {
    std::cerr << "qcavity: config error: " << e.what() << '\n';
    return qcavity::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcavity: numerical failure: " << e.what() << '\n';
    return qcavity::kExitNumerical;
  }

  if (destination.empty() || destination == "-") {
    std::cout << result.csv;
  } else {
    std::ofstream out(destination, std::ios::binary);
    if (!out) {
      std::cerr << "qcavity: cannot write '" << destination << "'\n";
      return qcavity::kExitConfig;
    }
    out << result.csv;
  }
  if (result.status != qcavity::kExitOk) std::cerr << "qcavity: some grid points failed; see ERR rows\n";
  return result.status;
}
