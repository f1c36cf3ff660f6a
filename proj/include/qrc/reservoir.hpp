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
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrc/circuit.hpp"
#include "qrc/datasets.hpp"

namespace qrc {

enum class InitialState { AllZeros, MaximallyMixed };

struct ReservoirConfig {
  BrickwallSpec circuit;
  int multiplexing = 1;           // V
  InitialState initial_state = InitialState::AllZeros;
  int reservoir_washout = 0;      // leading feature columns dropped
  bool bias_feature = false;      // extra constant row of ones
  Real train_fraction = 0.8;

  void validate() const;
  int feature_count() const;      // N V (+1)
};

/// Rescaled readouts, one column per input. Row (v-1) N + i holds qubit i
/// after the v-th application; the optional bias row is last.
struct FeatureMatrix {
  MatrixXr data;
  int n_qubits = 0;
  int multiplexing = 0;
  bool has_bias = false;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

struct ReadoutModel {
  VectorXr weights;
};

/// rho -> |psi_s><psi_s| (x) Tr_1[rho] with |psi_s> = sqrt(1-s)|0> + sqrt(s)|1>.
/// Throws InvalidArgument unless s is in [0, 1).
DensityMatrix inject(const DensityMatrix& rho, Real s);
void inject_in_place(MatrixXc& rho, Real s);

/// Entry i = (tr(Z_i rho) + 1) / 2 with Z|0> = +|0>.
VectorXr read_features(const DensityMatrix& rho);
VectorXr read_features(const MatrixXc& rho, int n_qubits);

/// Drives the reservoir with series.inputs. The returned targets are
/// series.targets with the same reservoir washout applied.
struct ReservoirRun {
  FeatureMatrix features;
  std::vector<Real> targets;
};
ReservoirRun run_reservoir(const TimeSeries& series, const ReservoirConfig& cfg, Seed seed);

/// Minimum-norm least-squares weights for Z_train^T w ~= y_train, via a
/// complete orthogonal decomposition (the Moore-Penrose solution).
ReadoutModel train_readout(const MatrixXr& z_train, std::span<const Real> y_train);

VectorXr predict(const ReadoutModel& model, const MatrixXr& z_eval);

/// Mean squared residual of model predictions over the columns of z_eval.
Real evaluate(const ReadoutModel& model, const MatrixXr& z_eval, std::span<const Real> y_eval);

struct TaskScore {
  Real train_mse = 0.0;
  Real eval_mse = 0.0;
  ReadoutModel model;
  int train_columns = 0;
  int eval_columns = 0;
};

/// Chronological split (first train_fraction of columns), train, evaluate.
TaskScore fit_and_score(const ReservoirRun& run, Real train_fraction);

/// Runs the reservoir on the series and scores it.
TaskScore score_task(const TimeSeries& series, const ReservoirConfig& cfg, Seed seed);

/// Mean of tr(rho_i rho_j) over distinct pairs of the given states.
Real mean_pairwise_overlap(std::span<const MatrixXc> states);

/// For n_samples random inputs s in [0, 1), each on its own rng stream:
/// inject into the initial state, then apply V_max timesteps and record the
/// state after each. Returns the mean pairwise overlap for v = 1..V_max.
std::vector<Real> overlap_statistics(const ReservoirConfig& cfg, int n_samples, int v_max,
                                     Seed seed);

void write_features_csv(std::ostream& os, const FeatureMatrix& z);
nlohmann::json weights_to_json(const ReadoutModel& model);

}  // namespace qrc
