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

#include <span>
#include <vector>

#include "qrc/gates.hpp"

namespace qrc {

/// Spectrum of the single-bond correlation map M+.
struct MixingReport {
  Matrix4c map;
  Eigen::Vector4cd eigenvalues;   // descending magnitude, ties by real then imaginary part
  Real lambda1_abs = 0.0;         // |eigenvalues[1]|
  Real mu1 = 0.0;                 // -ln lambda1_abs
  Real norm_sq = 0.0;             // sum |lambda_i|^2
  Real hs_norm_sq = 0.0;          // sum |M_ij|^2
};

/// M+ = (1/2) [U^{T2} (U^{T2})^dag]^{R2}. Throws InvalidArgument unless the
/// gate is dual-unitary.
MixingReport m_plus(const Matrix4c& u);
inline MixingReport m_plus(const Gate& g) { return m_plus(g.matrix()); }

/// M(a) = (1/2) tr_1[U^dag (a (x) 1) U] as a matrix on row-major vec(a).
Matrix4c correlation_map_direct(const Matrix4c& u);

/// -(1/3) ln(1 - e_p / (2/3)).
Real max_mixing_rate_formula(Real e_p);

/// gamma with e_p(cartan(pi/4, pi/4, gamma)) = e_p.
Real dual_unitary_gamma(Real e_p);

struct MaxMixingResult {
  Gate gate;
  Real mu1_max = 0.0;
  Real mu1_formula = 0.0;
  Real mean_lambda1_abs = 0.0;    // over the sampled ensemble
};

/// Dual-unitary kernel at e_p dressed with the best of `ensemble_size`
/// w-local 4-tuples. Throws InvalidArgument unless e_p is in (0, 2/3].
MaxMixingResult max_mixing_gate(Real e_p, int ensemble_size, Seed seed);

/// Per-bond second-moment operator in the |II>, |IS>, |SI>, |SS> basis.
Eigen::Matrix4d design_w(Real e_p, Real g_t);

struct DesignGapReport {
  Eigen::Matrix4d w;
  Eigen::VectorXcd transfer_eigs;  // descending magnitude
  Real lambda3_abs = 0.0;
};

inline constexpr int kMaxDesignQubits = 12;

/// Brickwall transfer matrix even * odd on span{I, S}^{(x)N}.
MatrixXr design_transfer_matrix(int n_qubits, Real e_p, Real g_t);
DesignGapReport design_transfer(int n_qubits, Real e_p, Real g_t);

struct GapRow {
  Real e_p = 0.0;
  Real g_t = 0.0;
  Real lambda3 = 0.0;
};

/// One row per gate, sorted by e_p.
std::vector<GapRow> solvable_gap_sweep(int n_qubits, const std::vector<Gate>& gates);

/// Descending magnitude, ties by descending real then imaginary part.
Eigen::VectorXcd sort_by_magnitude(const Eigen::VectorXcd& values);

Real mean(std::span<const Real> x);
Real stddev(std::span<const Real> x);  // sample, n - 1
/// Spearman rank correlation with average ranks for ties.
Real spearman(std::span<const Real> x, std::span<const Real> y);

}  // namespace qrc
