// Copyright 2026 The qrc-lab Authors
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

// qrc-lab <experiment> --config <file> [--seed-base N] [--out DIR] [--jobs K]

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qrc/experiments.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Quantum reservoir computing experiments on brickwall circuits", "qrc-lab"};
  std::string experiment;
  std::string config_path;
  std::uint64_t seed_base = 0;
  std::string out_dir = ".";
  int jobs = 1;

  std::string names;
  for (const auto& n : qrc::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "One of: " + names)->required();
  app.add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed-base", seed_base, "Offset added to every configured seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (!qrc::experiment_from_string(experiment)) {
    std::cerr << "qrc-lab: unknown experiment '" << experiment << "' (expected one of: " << names
              << ")\n"
              << app.help();
    return 2;
  }

  std::ifstream in(config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  qrc::ExperimentConfig cfg;
  try {
    cfg = qrc::ExperimentConfig::parse(buf.str());
  } catch (const qrc::ConfigError& e) {
    std::cerr << config_path << ':' << e.line() << ": " << e.what() << '\n';
    return 3;
  }
  if (qrc::to_string(cfg.experiment) != experiment) {
    std::cerr << config_path << ": config declares experiment '" << qrc::to_string(cfg.experiment)
              << "' but '" << experiment << "' was requested\n";
    return 3;
  }

  const auto t0 = std::chrono::steady_clock::now();
  qrc::ResultTable table;
  try {
    table = qrc::run_experiment(cfg, seed_base, jobs);
  } catch (const std::exception& e) {
    std::cerr << "qrc-lab: " << e.what() << '\n';
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(out_dir);
  const std::string stem = cfg.output_path.empty() ? experiment : fs::path(cfg.output_path).stem().string();
  const fs::path csv = fs::path(out_dir) / (stem + ".csv");
  const fs::path manifest = fs::path(out_dir) / (stem + ".manifest.json");
  {
    std::ofstream os(csv);
    qrc::write_table_csv(os, table);
  }
  {
    std::ofstream os(manifest);
    os << qrc::manifest_json(cfg, table, seed_base, wall).dump(2) << '\n';
  }
  std::cout << "wrote " << csv.string() << " (" << table.rows.size() << " rows) and "
            << manifest.string() << '\n';
  return 0;
}
