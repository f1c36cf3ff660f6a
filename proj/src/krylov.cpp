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

#include "qrc/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace qrc {

namespace {

Eigen::Map<const VectorXc> as_vec(const MatrixXc& m) {
  return {m.data(), m.size()};
}

void conjugate_heisenberg(const MatrixXc& u, MatrixXc& o, MatrixXc& tmp) {
  tmp.noalias() = u.adjoint() * o;
  o.noalias() = tmp * u;
}

}  // namespace

MatrixXc site_operator(int which, int site, int n_qubits) {
  if (which < 0 || which > 3) throw InvalidArgument("site_operator: Pauli index must be 0..3");
  if (site < 0 || site >= n_qubits) throw InvalidArgument("site_operator: site out of range");
  const Matrix2c paulis[4] = {pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  MatrixXc out = MatrixXc::Identity(1, 1);
  for (int s = 0; s < n_qubits; ++s) {
    const MatrixXc factor = s == site ? MatrixXc(paulis[which]) : MatrixXc::Identity(2, 2);
    out = kron(out, factor);
  }
  return out;
}

int krylov_dimension_bound(int n_qubits) {
  const long d = 1L << n_qubits;
  return static_cast<int>(d * d - d + 1);
}

KrylovRecord arnoldi_iterate(const MatrixXc& u, const MatrixXc& o0, const ArnoldiOptions& options) {
  if (u.rows() != u.cols()) throw InvalidArgument("arnoldi: unitary must be square");
  if (o0.rows() != u.rows() || o0.cols() != u.cols()) {
    throw InvalidArgument("arnoldi: operator dimension differs from the unitary");
  }
  const Real norm0 = o0.norm();
  if (!(norm0 > 0.0)) throw InvalidArgument("arnoldi: initial operator is zero");

  const Eigen::Index d = u.rows();
  const Eigen::Index d2 = d * d;
  const int bound = static_cast<int>(std::min<Eigen::Index>(d2 - d + 1, d2));
  const int cap = options.max_steps < 0 ? bound : std::min(options.max_steps, static_cast<int>(d2 - 1));

  KrylovRecord rec;
  rec.basis.resize(d2, cap + 1);
  rec.arnoldi_b.reserve(static_cast<std::size_t>(cap) + 1);
  rec.complexity.reserve(static_cast<std::size_t>(cap) + 1);
  rec.correction.reserve(static_cast<std::size_t>(cap) + 1);

  MatrixXc evolved = o0 / norm0;
  MatrixXc tmp(d, d);
  rec.basis.col(0) = as_vec(evolved);
  rec.arnoldi_b.push_back(norm0);
  rec.complexity.push_back(0.0);
  rec.correction.push_back(0.0);

  VectorXc residual(d2);
  VectorXc coeff;
  VectorXc second;
  int stored = 1;
  for (int t = 1; t <= cap; ++t) {
    conjugate_heisenberg(u, evolved, tmp);
    const auto prev = rec.basis.leftCols(stored);
    residual = as_vec(evolved);
    coeff.noalias() = prev.adjoint() * residual;
    residual.noalias() -= prev * coeff;
    second.noalias() = prev.adjoint() * residual;
    residual.noalias() -= prev * second;
    coeff += second;

    const Real corr = second.norm();
    const Real b = residual.norm();
    rec.correction.push_back(corr);
    rec.arnoldi_b.push_back(b);
    if (corr > options.correction_warning) rec.numerical_warning = true;

    // K_C^t = sum_{n<t} n |<O_n|O(t)>|^2 + t b_t^2, since <O_t|O(t)> = b_t
    Real k = static_cast<Real>(t) * b * b;
    for (Eigen::Index n = 1; n < coeff.size(); ++n) k += static_cast<Real>(n) * std::norm(coeff(n));
    rec.complexity.push_back(k);

    if (b < options.termination_tol) {
      rec.terminated_at = t;
      break;
    }
    rec.basis.col(stored) = residual / b;
    ++stored;
  }
  rec.basis.conservativeResize(Eigen::NoChange, stored);
  return rec;
}

SuperopCoeffs superop_coeffs(const KrylovRecord& record, const MatrixXc& u) {
  const Eigen::Index d = u.rows();
  const Eigen::Index count = record.basis.cols();
  if (record.basis.rows() != d * d) throw InvalidArgument("superop_coeffs: dimension mismatch");
  SuperopCoeffs out;
  out.a.resize(static_cast<std::size_t>(count));
  out.b.resize(static_cast<std::size_t>(count));
  out.c.resize(static_cast<std::size_t>(count));
  MatrixXc op(d, d);
  MatrixXc tmp(d, d);
  const auto o0 = record.basis.col(0);
  for (Eigen::Index n = 0; n < count; ++n) {
    op = Eigen::Map<const MatrixXc>(record.basis.col(n).data(), d, d);
    conjugate_heisenberg(u, op, tmp);
    const auto un = as_vec(op);
    const auto sn = static_cast<std::size_t>(n);
    out.a[sn] = record.basis.col(n).dot(un);
    out.c[sn] = o0.dot(un);
    // b_{n+1} = <O_{n+1}| U |O_n>
    if (n + 1 < count) out.b[sn + 1] = record.basis.col(n + 1).dot(un);
  }
  if (count > 0) out.b[0] = Complex(0.0);
  return out;
}

ComplexityCurve complexity_curve(const KrylovRecord& record) {
  if (record.complexity.empty()) throw InvalidArgument("complexity_curve: empty record");
  ComplexityCurve out;
  out.values = record.complexity;
  const std::size_t total = out.values.size();
  const std::size_t window = std::max<std::size_t>(1, total / 5);
  Real sum = 0.0;
  for (std::size_t i = total - window; i < total; ++i) sum += out.values[i];
  out.saturation = sum / static_cast<Real>(window);
  return out;
}

std::optional<int> deviation_onset(const KrylovRecord& record, Real threshold) {
  for (std::size_t t = 1; t < record.arnoldi_b.size(); ++t) {
    if (std::abs(record.arnoldi_b[t] - 1.0) > threshold) return static_cast<int>(t);
  }
  return std::nullopt;
}

Real operator_fidelity(const MatrixXc& a, const MatrixXc& b) {
  const Real na = a.norm();
  const Real nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("operator_fidelity: zero operator");
  return std::abs(as_vec(a).dot(as_vec(b))) / (na * nb);
}

int operator_rank(const std::vector<MatrixXc>& ops, Real threshold) {
  if (ops.empty()) return 0;
  MatrixXc cols(ops.front().size(), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Real n = ops[i].norm();
    cols.col(static_cast<Eigen::Index>(i)) = n > 0.0 ? VectorXc(as_vec(ops[i]) / n)
                                                     : VectorXc::Zero(ops[i].size());
  }
  Eigen::ColPivHouseholderQR<MatrixXc> qr(cols);
  qr.setThreshold(threshold);
  return static_cast<int>(qr.rank());
}

std::vector<std::vector<MatrixXc>> evolve_observables(const MatrixXc& u,
                                                      const std::vector<MatrixXc>& observables,
                                                      int v) {
  if (v < 0) throw InvalidArgument("evolve_observables: V must be >= 0");
  std::vector<std::vector<MatrixXc>> out;
  MatrixXc tmp(u.rows(), u.cols());
  for (const auto& o : observables) {
    std::vector<MatrixXc> seq{o};
    MatrixXc cur = o;
    for (int k = 0; k < v; ++k) {
      conjugate_heisenberg(u, cur, tmp);
      seq.push_back(cur);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

Real krylov_observability(const std::vector<std::vector<MatrixXc>>& evolved_ops, int v) {
  Real total = 0.0;
  for (const auto& seq : evolved_ops) {
    if (seq.size() < 2) continue;
    const int r = std::min({v, operator_rank(seq), static_cast<int>(seq.size()) - 1});
    for (int k = 1; k <= r; ++k) {
      total += 1.0 - operator_fidelity(seq[static_cast<std::size_t>(k)],
                                       seq[static_cast<std::size_t>(k - 1)]);
    }
  }
  return total;
}

void write_krylov_csv(std::ostream& os, const KrylovRecord& record, const SuperopCoeffs& coeffs) {
  os << "# steps=" << record.steps()
     << " terminated_at=" << (record.terminated_at ? std::to_string(*record.terminated_at) : "none")
     << '\n';
  os << "t,b_t,a_t,c_t,K_C_t,correction\n";
  os.precision(17);
  for (std::size_t t = 0; t < record.arnoldi_b.size(); ++t) {
    os << t << ',' << (t == 0 ? 1.0 : record.arnoldi_b[t]) << ',';
    if (t < coeffs.a.size()) {
      os << std::abs(coeffs.a[t]) << ',' << std::abs(coeffs.c[t]);
    } else {
      os << ',';
    }
    os << ',' << record.complexity[t] << ',' << record.correction[t] << '\n';
  }
}

}  // namespace qrc
