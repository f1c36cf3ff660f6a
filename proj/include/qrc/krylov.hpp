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
#include <optional>
#include <vector>

#include "qrc/types.hpp"

namespace qrc {

struct ArnoldiOptions {
  int max_steps = -1;                 // < 0: d^2 - d + 1
  Real termination_tol = 1e-10;
  Real correction_warning = 1e-6;     // second-pass projection norm
};

/// Operator-space Krylov data of a Heisenberg-picture evolution O -> U^dag O U.
/// Vectors are column-major vec(O) under the Hilbert-Schmidt inner product.
struct KrylovRecord {
  MatrixXc basis;                     // d^2 x (steps + 1), orthonormal columns
  std::vector<Real> arnoldi_b;        // [0] = |O0| before normalisation, [t] = b_t
  std::vector<Real> complexity;       // K_C^t, [0] = 0
  std::vector<Real> correction;       // second-pass projection norm per step
  std::optional<int> terminated_at;
  bool numerical_warning = false;

  int steps() const { return static_cast<int>(arnoldi_b.size()) - 1; }
};

struct SuperopCoeffs {
  std::vector<Complex> a;             // <O_n| U |O_n>
  std::vector<Complex> b;             // <O_n| U |O_{n-1}>, b[0] unused (0)
  std::vector<Complex> c;             // <O_0| U |O_n>
};

/// Pauli `which` (0..3 for I, X, Y, Z) on one site, identity elsewhere.
MatrixXc site_operator(int which, int site, int n_qubits);

/// K = d^2 - d + 1.
int krylov_dimension_bound(int n_qubits);

KrylovRecord arnoldi_iterate(const MatrixXc& u, const MatrixXc& o0,
                             const ArnoldiOptions& options = {});

SuperopCoeffs superop_coeffs(const KrylovRecord& record, const MatrixXc& u);

struct ComplexityCurve {
  std::vector<Real> values;
  Real saturation = 0.0;              // mean over the final 20% of steps
};
ComplexityCurve complexity_curve(const KrylovRecord& record);

/// First t >= 1 with |b_t - 1| > threshold, or nullopt.
std::optional<int> deviation_onset(const KrylovRecord& record, Real threshold = 0.01);

/// |<A, B>| / (|A| |B|).
Real operator_fidelity(const MatrixXc& a, const MatrixXc& b);

/// Rank of the span of the operators, by column-pivoted QR on normalised
/// vectors with threshold 1e-10.
int operator_rank(const std::vector<MatrixXc>& ops, Real threshold = 1e-10);

/// Sequences O_i(t_0), ..., O_i(t_V) for each observable, t_k = k steps.
std::vector<std::vector<MatrixXc>> evolve_observables(const MatrixXc& u,
                                                      const std::vector<MatrixXc>& observables,
                                                      int v);

/// Sum over observables of p_i = sum_{k=1}^{R_i} (1 - F(O_i(t_k), O_i(t_{k-1}))),
/// R_i = min(V, rank of the sequence, sequence length - 1).
Real krylov_observability(const std::vector<std::vector<MatrixXc>>& evolved_ops, int v);

/// Columns t, b_t, a_t, c_t, K_C^t (magnitudes of the complex coefficients).
void write_krylov_csv(std::ostream& os, const KrylovRecord& record, const SuperopCoeffs& coeffs);

}  // namespace qrc
