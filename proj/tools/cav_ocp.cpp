// Copyright 2026 The cavocp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cav-ocp: solve / analyze / compare / scenario front end.

#include <cstddef>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cavocp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Minimum-energy speed planning for a single lane approach"};
  app.require_subcommand(1);

  cavocp::CommandOptions opts;
  std::string out_dir;
  std::size_t samples = 0;
  std::size_t grid = 0;
  auto* out_opt = app.add_option("--out-dir", out_dir, "Directory for CSV and summary files");
  auto* samples_opt = app.add_option("--samples", samples, "Samples per trajectory CSV")
                          ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));

  std::string path;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("config", path, "Instance config")->required();
  auto* analyze = app.add_subcommand("analyze", "Report bound activation");
  analyze->add_option("config", path, "Instance config")->required();
  auto* compare = app.add_subcommand("compare", "Compare against the grid oracle");
  compare->add_option("config", path, "Instance config")->required();
  auto* grid_opt = compare->add_option("--grid", grid, "Oracle grid size")
                       ->check(CLI::Range(std::size_t{100}, std::size_t{10000000}));
  auto* scenario = app.add_subcommand("scenario", "Plan and verify a scenario");
  scenario->add_option("config", path, "Scenario config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cavocp::kExitConfig;
  }
  if (out_opt->count()) opts.out_dir = out_dir;
  if (samples_opt->count()) opts.samples = samples;
  if (grid_opt->count()) opts.grid = grid;

  if (solve->parsed()) return cavocp::run_solve(path, opts, std::cout, std::cerr);
  if (analyze->parsed()) return cavocp::run_analyze(path, opts, std::cout, std::cerr);
  if (compare->parsed()) return cavocp::run_compare(path, opts, std::cout, std::cerr);
  return cavocp::run_scenario(path, opts, std::cout, std::cerr);
}
