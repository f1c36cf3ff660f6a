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

#include "qrc/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qrc {

namespace {

std::vector<Real> ranks(std::span<const Real> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<Real> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const Real avg = 0.5 * static_cast<Real>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

MixingReport report_from_map(const Matrix4c& m) {
  MixingReport rep;
  rep.map = m;
  Eigen::ComplexEigenSolver<Matrix4c> es(m, false);
  rep.eigenvalues = sort_by_magnitude(es.eigenvalues());
  rep.lambda1_abs = std::abs(rep.eigenvalues(1));
  rep.mu1 = rep.lambda1_abs > 0.0 ? -std::log(rep.lambda1_abs)
                                  : std::numeric_limits<Real>::infinity();
  rep.norm_sq = rep.eigenvalues.squaredNorm();
  rep.hs_norm_sq = m.squaredNorm();
  return rep;
}

}  // namespace

Eigen::VectorXcd sort_by_magnitude(const Eigen::VectorXcd& values) {
  std::vector<Complex> v(values.data(), values.data() + values.size());
  std::stable_sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    const Real ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
    if (std::abs(a.real() - b.real()) > 1e-12) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

MixingReport m_plus(const Matrix4c& u) {
  if (!is_dual_unitary(u, 1e-8)) throw InvalidArgument("m_plus: gate is not dual-unitary");
  const Matrix4c t2 = reshuffle(u, Reshuffle::T2);
  const Matrix4c prod = t2 * t2.adjoint();
  return report_from_map(0.5 * reshuffle(prod, Reshuffle::R2));
}

Matrix4c correlation_map_direct(const Matrix4c& u) {
  Matrix4c m = Matrix4c::Zero();
  for (int idx = 0; idx < 4; ++idx) {
    Matrix2c a = Matrix2c::Zero();
    a(idx / 2, idx % 2) = 1.0;
    const Matrix4c out = u.adjoint() * kron(a, Matrix2c(Matrix2c::Identity())) * u;
    // (1/2) tr over the first factor
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        m(2 * j + k, idx) = 0.5 * (out(j, k) + out(2 + j, 2 + k));
      }
    }
  }
  return m;
}

Real max_mixing_rate_formula(Real e_p) {
  return -std::log(1.0 - e_p / kMaxEntanglingPower) / 3.0;
}

Real dual_unitary_gamma(Real e_p) {
  if (!(e_p >= 0.0 && e_p <= kMaxEntanglingPower + 1e-12)) {
    throw InvalidArgument("dual_unitary_gamma: e_p must lie in [0, 2/3]");
  }
  return 0.5 * std::acos(std::sqrt(std::min(1.0, 1.5 * e_p)));
}

MaxMixingResult max_mixing_gate(Real e_p, int ensemble_size, Seed seed) {
  if (!(e_p > 0.0 && e_p <= kMaxEntanglingPower + 1e-12)) {
    throw InvalidArgument("max_mixing_gate: e_p must lie in (0, 2/3]");
  }
  if (ensemble_size < 1) throw InvalidArgument("max_mixing_gate: ensemble_size must be >= 1");
  const Gate kernel = cartan_gate({kPi / 4, kPi / 4, dual_unitary_gamma(e_p)});
  Rng rng(seed);
  std::optional<Gate> best;
  Real best_mu = -1.0;
  Real sum_abs = 0.0;
  for (int i = 0; i < ensemble_size; ++i) {
    const Gate g = kernel.dressed(sample_w_dressing(rng));
    const MixingReport rep = m_plus(g);
    sum_abs += rep.lambda1_abs;
    if (rep.mu1 > best_mu) {
      best_mu = rep.mu1;
      best = g;
    }
  }
  return {*best, best_mu, max_mixing_rate_formula(e_p), sum_abs / ensemble_size};
}

Eigen::Matrix4d design_w(Real e_p, Real g_t) {
  const Real a = 2.0 / 3.0 * e_p;
  const Real b = 1.0 - 5.0 / 6.0 * e_p - g_t;
  const Real c = g_t - 5.0 / 6.0 * e_p;
  Eigen::Matrix4d w;
  w << 1, 0, 0, 0,
       a, b, c, a,
       a, c, b, a,
       0, 0, 0, 1;
  return w;
}

MatrixXr design_transfer_matrix(int n_qubits, Real e_p, Real g_t) {
  if (n_qubits < 2 || n_qubits % 2 != 0) {
    throw InvalidArgument("design_transfer: n_qubits must be even and >= 2");
  }
  if (n_qubits > kMaxDesignQubits) {
    throw InvalidArgument("design_transfer: at most " + std::to_string(kMaxDesignQubits) +
                          " sites supported");
  }
  const Eigen::Matrix4d w = design_w(e_p, g_t);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  auto apply_bond = [&](MatrixXr& m, int first, int second) {
    const Eigen::Index mf = Eigen::Index{1} << (n_qubits - 1 - first);
    const Eigen::Index ms = Eigen::Index{1} << (n_qubits - 1 - second);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < dim; ++r) {
        if (r & (mf | ms)) continue;
        const Eigen::Index idx[4] = {r, r | ms, r | mf, r | mf | ms};
        Eigen::Vector4d v;
        for (int k = 0; k < 4; ++k) v(k) = m(idx[k], c);
        const Eigen::Vector4d out = w * v;
        for (int k = 0; k < 4; ++k) m(idx[k], c) = out(k);
      }
    }
  };
  MatrixXr t = MatrixXr::Identity(dim, dim);
  for (int s = 0; s < n_qubits; s += 2) apply_bond(t, s, s + 1);
  for (int s = 1; s < n_qubits; s += 2) apply_bond(t, std::min(s, (s + 1) % n_qubits),
                                                   std::max(s, (s + 1) % n_qubits));
  return t;
}

DesignGapReport design_transfer(int n_qubits, Real e_p, Real g_t) {
  DesignGapReport rep;
  rep.w = design_w(e_p, g_t);
  const MatrixXr t = design_transfer_matrix(n_qubits, e_p, g_t);
  Eigen::EigenSolver<MatrixXr> es(t, false);
  if (es.info() != Eigen::Success) throw NumericalError("design_transfer: eigensolver failed");
  rep.transfer_eigs = sort_by_magnitude(es.eigenvalues());
  rep.lambda3_abs = std::abs(rep.transfer_eigs(2));
  return rep;
}

std::vector<GapRow> solvable_gap_sweep(int n_qubits, const std::vector<Gate>& gates) {
  std::vector<GapRow> rows;
  rows.reserve(gates.size());
  for (const auto& g : gates) {
    const GateInvariants inv = gate_invariants(g);
    rows.push_back({inv.e_p, inv.g_t, design_transfer(n_qubits, inv.e_p, inv.g_t).lambda3_abs});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const GapRow& a, const GapRow& b) { return a.e_p < b.e_p; });
  return rows;
}

Real mean(std::span<const Real> x) {
  if (x.empty()) throw InvalidArgument("mean: empty input");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<Real>(x.size());
}

Real stddev(std::span<const Real> x) {
  if (x.size() < 2) return 0.0;
  const Real m = mean(x);
  Real s = 0.0;
  for (Real v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<Real>(x.size() - 1));
}

Real spearman(std::span<const Real> x, std::span<const Real> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const Real mx = mean(rx), my = mean(ry);
  Real sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace qrc
