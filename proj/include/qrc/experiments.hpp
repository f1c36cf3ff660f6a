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

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrc/circuit.hpp"

namespace qrc {

enum class ExperimentKind {
  NarmaSweep,
  MgSweep,
  KrylovSaturation,
  CoeffDeviation,
  OverlapSaturation,
  MixingValidation,
  DesignGap,
  SolvablePerformance,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(const std::string& name);
std::vector<std::string> experiment_names();

enum class GateFamily { HaarTwoQubit, DualUnitary, Solvable };

enum class LocalsChoice {
  MaxMixing,      // best of an ensemble of w-dressings, fixed in time
  HaarFixed,      // one Haar dressing, fixed in time
  HaarResample,   // fresh Haar dressing at every gate application
  None,
};

/// Config error carrying the 1-based line of the offending key (0 if unknown).
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& what, int line) : InvalidArgument(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::NarmaSweep;
  int n_qubits = 6;
  GateFamily gate_family = GateFamily::DualUnitary;
  std::vector<Real> e_p_grid{0.6};
  int solvable_count = 30;
  Seed gate_seed = 2024;               // solvable gate draws
  LocalsChoice locals = LocalsChoice::MaxMixing;  // parse: haar_fixed for solvable gates, haar_resample for overlap
  int ensemble_size = 1000;
  std::vector<int> multiplexing{5};
  std::vector<int> narma_orders{2};
  std::vector<Seed> seeds{1};
  int narma_length = 6000;
  int narma_washout = 1000;
  int mg_length = 5000;
  Real tau = 17.0;
  int max_steps = -1;                  // Arnoldi cap, < 0 for d^2 - d + 1
  int samples = 300;                   // overlap ensemble size
  int v_max = 10;
  std::string output_path;             // CSV file name inside the output directory

  /// Parses a JSON document. Errors name the line of the offending key.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig from_json(const nlohmann::json& j, const std::string& text = {});
  nlohmann::json to_json() const;
  void validate(const std::string& text = {}) const;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> meta;
};

/// Runs every (grid point, seed) task on `jobs` workers. Rows come back in
/// task order. A task that throws yields one row whose status column holds
/// the message.
ResultTable run_experiment(const ExperimentConfig& cfg, Seed seed_base = 0, int jobs = 1);

void write_table_csv(std::ostream& os, const ResultTable& table);

nlohmann::json manifest_json(const ExperimentConfig& cfg, const ResultTable& table,
                             Seed seed_base, double wall_seconds);

/// Version string of this build.
std::string build_describe();

}  // namespace qrc
