// Copyright 2026 The openad Authors
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

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "openad/experiment.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, numeric_failure = 2 };

int run(const std::string& command, const std::string& config_path, const std::string& output, std::size_t grid, unsigned jobs) {
  openad::ExperimentConfig cfg;
  try {
    cfg = openad::load_config(config_path);
    if (grid) {
      if (grid < 51) throw openad::ConfigError("--grid must be at least 51", 0, "grid_points");
      cfg.grid_points = grid;
    }
    if (!output.empty()) cfg.output_path = output;
  } catch (const openad::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return config_error;
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  if (!cfg.output_path.empty() && cfg.output_path != "-") {
    file = std::make_unique<std::ofstream>(cfg.output_path, std::ios::binary);
    if (!*file) {
      std::cerr << "cannot write " << cfg.output_path << '\n';
      return config_error;
    }
    os = file.get();
  }

  openad::RunSummary sum;
  try {
    if (command == "sweep") sum = openad::run_sweep(cfg, *os, jobs);
    else if (command == "spectrum") sum = openad::run_spectrum(cfg, *os, jobs);
    else if (command == "conditions") sum = openad::run_conditions(cfg, *os, jobs);
    else sum = openad::run_thermo_check(cfg, *os);
  } catch (const openad::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return config_error;
  }
  os->flush();
  if (sum.failed) std::cerr << sum.failed << " of " << sum.rows << " rows failed\n";
  return sum.all_failed() ? numeric_failure : ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabaticity checks for open quantum systems"};
  app.require_subcommand(1);

  std::string config, output;
  std::size_t grid = 0;
  unsigned jobs = 0;
  for (const auto& [name, help] : {std::pair{"sweep", "infidelity and Xi coefficients over omega*tau"},
                                   std::pair{"spectrum", "tracked eigenvalue paths with residuals"},
                                   std::pair{"conditions", "per-pair adiabaticity coefficients"},
                                   std::pair{"thermo", "equilibrium heat/entropy check"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "experiment INI file")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", output, "output CSV path, '-' for stdout (overrides the config)");
    sub->add_option("--grid", grid, "grid points in s (overrides the config)");
    sub->add_option("--jobs", jobs, "worker threads (default: all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : config_error;
  }
  return run(app.get_subcommands().front()->get_name(), config, output, grid, jobs);
}
