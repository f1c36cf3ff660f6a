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

#include "qrc/reservoir.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace qrc {

void ReservoirConfig::validate() const {
  circuit.validate();
  if (multiplexing < 1) throw InvalidArgument("reservoir: multiplexing must be >= 1");
  if (reservoir_washout < 0) throw InvalidArgument("reservoir: washout must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("reservoir: train_fraction must lie in (0, 1)");
  }
}

int ReservoirConfig::feature_count() const {
  return circuit.n_qubits * multiplexing + (bias_feature ? 1 : 0);
}

void inject_in_place(MatrixXc& rho, Real s) {
  if (!(s >= 0.0 && s < 1.0)) {
    throw InvalidArgument("inject: input " + std::to_string(s) + " outside [0, 1)");
  }
  const Eigen::Index h = rho.rows() / 2;
  const MatrixXc reduced = rho.topLeftCorner(h, h) + rho.bottomRightCorner(h, h);
  const Real a = std::sqrt(1.0 - s);
  const Real b = std::sqrt(s);
  rho.topLeftCorner(h, h) = (a * a) * reduced;
  rho.topRightCorner(h, h) = (a * b) * reduced;
  rho.bottomLeftCorner(h, h) = (a * b) * reduced;
  rho.bottomRightCorner(h, h) = (b * b) * reduced;
}

DensityMatrix inject(const DensityMatrix& rho, Real s) {
  MatrixXc m = rho.data();
  inject_in_place(m, s);
  return DensityMatrix::unchecked(std::move(m));
}

VectorXr read_features(const MatrixXc& rho, int n_qubits) {
  VectorXr z = VectorXr::Zero(n_qubits);
  for (Eigen::Index b = 0; b < rho.rows(); ++b) {
    const Real p = rho(b, b).real();
    for (int i = 0; i < n_qubits; ++i) {
      if (((b >> (n_qubits - 1 - i)) & 1) == 0) z(i) += p;
    }
  }
  return z;
}

VectorXr read_features(const DensityMatrix& rho) { return read_features(rho.data(), rho.n_qubits()); }

ReservoirRun run_reservoir(const TimeSeries& series, const ReservoirConfig& cfg, Seed seed) {
  cfg.validate();
  if (series.size() == 0) throw InvalidArgument("run_reservoir: empty series");
  if (series.targets.size() != series.size()) {
    throw InvalidArgument("run_reservoir: inputs and targets differ in length");
  }
  const int n = cfg.circuit.n_qubits;
  const int v_steps = cfg.multiplexing;
  const auto length = static_cast<Eigen::Index>(series.size());
  const Eigen::Index kept = std::max<Eigen::Index>(0, length - cfg.reservoir_washout);

  Rng rng(seed);
  MatrixXc rho = cfg.initial_state == InitialState::AllZeros
                     ? DensityMatrix::all_zeros(n).data()
                     : DensityMatrix::maximally_mixed(n).data();

  // Fixed circuits are applied as one dense product; resampled circuits gate by gate.
  const bool fixed = cfg.circuit.locals.kind != LocalsKind::ResamplePerApplication;
  MatrixXc u_res;
  MatrixXc tmp(rho.rows(), rho.cols());
  if (fixed) u_res = build_layer_unitary(cfg.circuit, rng);

  ReservoirRun out;
  out.features.n_qubits = n;
  out.features.multiplexing = v_steps;
  out.features.has_bias = cfg.bias_feature;
  out.features.data.resize(cfg.feature_count(), kept);

  for (Eigen::Index k = 0; k < length; ++k) {
    inject_in_place(rho, series.inputs[static_cast<std::size_t>(k)]);
    const Eigen::Index col = k - cfg.reservoir_washout;
    for (int v = 0; v < v_steps; ++v) {
      if (fixed) {
        tmp.noalias() = u_res * rho;
        rho.noalias() = tmp * u_res.adjoint();
      } else {
        build_layer(cfg.circuit, rng).conjugate(rho);
      }
      if (col >= 0) {
        out.features.data.col(col).segment(static_cast<Eigen::Index>(v) * n, n) =
            read_features(rho, n);
      }
    }
    if (col >= 0 && cfg.bias_feature) out.features.data(cfg.feature_count() - 1, col) = 1.0;
  }
  out.targets.assign(series.targets.begin() + (length - kept), series.targets.end());
  return out;
}

ReadoutModel train_readout(const MatrixXr& z_train, std::span<const Real> y_train) {
  if (z_train.cols() == 0) throw InvalidArgument("train_readout: empty training set");
  if (z_train.cols() != static_cast<Eigen::Index>(y_train.size())) {
    throw InvalidArgument("train_readout: column count differs from target length");
  }
  const Eigen::Map<const VectorXr> y(y_train.data(), static_cast<Eigen::Index>(y_train.size()));
  const MatrixXr samples = z_train.transpose();
  Eigen::CompleteOrthogonalDecomposition<MatrixXr> cod(samples);
  ReadoutModel model;
  model.weights = cod.solve(y);
  return model;
}

VectorXr predict(const ReadoutModel& model, const MatrixXr& z_eval) {
  if (z_eval.rows() != model.weights.size()) {
    throw InvalidArgument("predict: feature count differs from weight length");
  }
  return z_eval.transpose() * model.weights;
}

Real evaluate(const ReadoutModel& model, const MatrixXr& z_eval, std::span<const Real> y_eval) {
  if (z_eval.cols() == 0) throw InvalidArgument("evaluate: empty evaluation set");
  if (z_eval.cols() != static_cast<Eigen::Index>(y_eval.size())) {
    throw InvalidArgument("evaluate: column count differs from target length");
  }
  const VectorXr pred = predict(model, z_eval);
  const Eigen::Map<const VectorXr> y(y_eval.data(), static_cast<Eigen::Index>(y_eval.size()));
  return (pred - y).squaredNorm() / static_cast<Real>(y.size());
}

TaskScore fit_and_score(const ReservoirRun& run, Real train_fraction) {
  const Eigen::Index total = run.features.cols();
  const auto n_train = static_cast<Eigen::Index>(std::floor(train_fraction * static_cast<Real>(total)));
  if (n_train < 1 || n_train >= total) {
    throw InvalidArgument("fit_and_score: split leaves an empty segment");
  }
  const std::span<const Real> y(run.targets);
  TaskScore score;
  score.train_columns = static_cast<int>(n_train);
  score.eval_columns = static_cast<int>(total - n_train);
  const MatrixXr z_train = run.features.data.leftCols(n_train);
  const MatrixXr z_eval = run.features.data.rightCols(total - n_train);
  score.model = train_readout(z_train, y.first(static_cast<std::size_t>(n_train)));
  score.train_mse = evaluate(score.model, z_train, y.first(static_cast<std::size_t>(n_train)));
  score.eval_mse = evaluate(score.model, z_eval, y.subspan(static_cast<std::size_t>(n_train)));
  return score;
}

TaskScore score_task(const TimeSeries& series, const ReservoirConfig& cfg, Seed seed) {
  return fit_and_score(run_reservoir(series, cfg, seed), cfg.train_fraction);
}

Real mean_pairwise_overlap(std::span<const MatrixXc> states) {
  const auto n = static_cast<Real>(states.size());
  if (states.size() < 2) throw InvalidArgument("mean_pairwise_overlap: need at least two states");
  // sum_{i != j} tr(rho_i rho_j) = |sum rho|_F^2 - sum |rho_i|_F^2 for Hermitian states
  MatrixXc total = MatrixXc::Zero(states[0].rows(), states[0].cols());
  Real diagonal = 0.0;
  for (const auto& s : states) {
    total += s;
    diagonal += s.squaredNorm();
  }
  return (total.squaredNorm() - diagonal) / (n * (n - 1.0));
}

std::vector<Real> overlap_statistics(const ReservoirConfig& cfg, int n_samples, int v_max,
                                     Seed seed) {
  cfg.validate();
  if (n_samples < 2) throw InvalidArgument("overlap_statistics: n_samples must be >= 2");
  if (v_max < 1) throw InvalidArgument("overlap_statistics: v_max must be >= 1");
  const int n = cfg.circuit.n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;

  std::vector<MatrixXc> sums(static_cast<std::size_t>(v_max), MatrixXc::Zero(dim, dim));
  std::vector<Real> diagonal(static_cast<std::size_t>(v_max), 0.0);
  Rng seeder(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(seeder());
    MatrixXc rho = cfg.initial_state == InitialState::AllZeros
                       ? DensityMatrix::all_zeros(n).data()
                       : DensityMatrix::maximally_mixed(n).data();
    inject_in_place(rho, unit(rng));
    const Layer fixed = build_layer(cfg.circuit, rng);
    for (int v = 0; v < v_max; ++v) {
      if (cfg.circuit.locals.kind == LocalsKind::ResamplePerApplication && v > 0) {
        build_layer(cfg.circuit, rng).conjugate(rho);
      } else {
        fixed.conjugate(rho);
      }
      sums[static_cast<std::size_t>(v)] += rho;
      diagonal[static_cast<std::size_t>(v)] += rho.squaredNorm();
    }
  }
  std::vector<Real> out(static_cast<std::size_t>(v_max));
  const auto ns = static_cast<Real>(n_samples);
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v] = (sums[v].squaredNorm() - diagonal[v]) / (ns * (ns - 1.0));
  }
  return out;
}

void write_features_csv(std::ostream& os, const FeatureMatrix& z) {
  os << "# rows=" << z.rows() << " cols=" << z.cols() << " n_qubits=" << z.n_qubits
     << " multiplexing=" << z.multiplexing << " bias=" << (z.has_bias ? 1 : 0) << '\n';
  os << "qubit,v";
  for (Eigen::Index c = 0; c < z.cols(); ++c) os << ",t" << c;
  os << '\n';
  os.precision(17);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const bool bias_row = z.has_bias && r == z.rows() - 1;
    if (bias_row) {
      os << "bias,0";
    } else {
      os << (r % z.n_qubits) + 1 << ',' << (r / z.n_qubits) + 1;
    }
    for (Eigen::Index c = 0; c < z.cols(); ++c) os << ',' << z.data(r, c);
    os << '\n';
  }
}

nlohmann::json weights_to_json(const ReadoutModel& model) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) arr.push_back(model.weights(i));
  return arr;
}

}  // namespace qrc
