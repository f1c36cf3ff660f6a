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

#include <vector>

#include "qrc/gates.hpp"
#include "qrc/types.hpp"

namespace qrc {

// Sites are numbered 0..N-1 in code; site 0 is the injection qubit and the
// most significant bit of a basis index.

enum class LocalsKind { None, FloquetFixed, ResamplePerApplication };

/// Distribution of freshly drawn locals under ResamplePerApplication.
enum class LocalsDistribution { Haar, W };

struct LocalsPolicy {
  LocalsKind kind = LocalsKind::None;
  LocalDressing fixed;
  LocalsDistribution distribution = LocalsDistribution::Haar;

  static LocalsPolicy none() { return {}; }
  static LocalsPolicy floquet(const LocalDressing& d) {
    return {LocalsKind::FloquetFixed, d, LocalsDistribution::Haar};
  }
  static LocalsPolicy resample(LocalsDistribution dist = LocalsDistribution::Haar) {
    return {LocalsKind::ResamplePerApplication, {}, dist};
  }
};

/// One timestep of a periodic brickwall. Bond b couples sites b and
/// (b + 1) mod N. The odd sublayer (bonds 0, 2, ...) acts first, then the
/// even sublayer (bonds 1, 3, ..., N-1), which carries the wrap bond.
struct BrickwallSpec {
  int n_qubits = 4;
  Gate brick = Gate::from_matrix(Matrix4c::Identity());
  LocalsPolicy locals;
  /// Optional per-bond override of `brick` (size n_qubits, indexed by bond).
  std::vector<Matrix4c> bond_bricks;

  /// Throws InvalidArgument for odd or too small n_qubits.
  void validate() const;

  /// Independently Haar-sampled two-qubit brick on every bond, fixed in time.
  static BrickwallSpec haar_bricks(int n_qubits, Seed seed);
};

inline constexpr int kMaxDenseQubits = 10;

struct BondGate {
  int first = 0;   // lower-numbered site, first tensor factor
  int second = 1;
  Matrix4c gate;
};

/// A realised timestep: the ordered list of two-qubit gates.
class Layer {
 public:
  Layer(int n_qubits, std::vector<BondGate> gates);

  int n_qubits() const { return n_qubits_; }
  const std::vector<BondGate>& gates() const { return gates_; }

  /// Dense 2^N x 2^N unitary of the whole timestep.
  MatrixXc unitary() const;
  /// rho <- U rho U^dagger, gate by gate.
  void conjugate(MatrixXc& rho) const;

 private:
  int n_qubits_;
  std::vector<BondGate> gates_;
};

/// Realises one timestep. rng is consumed only under ResamplePerApplication.
Layer build_layer(const BrickwallSpec& spec, Rng& rng);

/// Dense U_res. Under None/FloquetFixed repeated calls are identical.
MatrixXc build_layer_unitary(const BrickwallSpec& spec, Rng& rng);

/// Left-multiplies `m` by a two-qubit gate acting on sites (first, second).
void apply_two_qubit_left(MatrixXc& m, const Matrix4c& g, int first, int second, int n_qubits);
/// Right-multiplies `m` by the adjoint of a two-qubit gate on (first, second).
void apply_two_qubit_right_adjoint(MatrixXc& m, const Matrix4c& g, int first, int second,
                                   int n_qubits);

/// Positive, Hermitian, unit-trace operator on N qubits.
class DensityMatrix {
 public:
  static DensityMatrix all_zeros(int n_qubits);
  static DensityMatrix maximally_mixed(int n_qubits);
  /// Validates Hermiticity, trace and positivity to the stated tolerances.
  static DensityMatrix from_matrix(const MatrixXc& m, Real tol = 1e-9);
  /// Wraps without validation; caller guarantees the invariants.
  static DensityMatrix unchecked(MatrixXc m);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return data_.rows(); }
  const MatrixXc& data() const { return data_; }
  MatrixXc& mutable_data() { return data_; }

  Complex trace() const { return data_.trace(); }
  Real purity() const;
  Real hermiticity_error() const;
  Real min_eigenvalue() const;

 private:
  DensityMatrix(int n_qubits, MatrixXc m) : n_qubits_(n_qubits), data_(std::move(m)) {}
  int n_qubits_;
  MatrixXc data_;
};

/// U rho U^dagger. Throws InvalidArgument on dimension mismatch.
DensityMatrix evolve(const DensityMatrix& rho, const MatrixXc& u);
DensityMatrix evolve(const DensityMatrix& rho, const Layer& layer);

/// Reduced state of a single site.
Matrix2c single_site_marginal(const MatrixXc& rho, int site, int n_qubits);

}  // namespace qrc
