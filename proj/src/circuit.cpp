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

#include "qrc/circuit.hpp"

#include <algorithm>
#include <string>

namespace qrc {

namespace {

Eigen::Index mask_of(int site, int n_qubits) {
  return Eigen::Index{1} << (n_qubits - 1 - site);
}

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw InvalidArgument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

}  // namespace

void BrickwallSpec::validate() const {
  if (n_qubits < 2 || n_qubits % 2 != 0) {
    throw InvalidArgument("brickwall: n_qubits must be even and >= 2, got " +
                          std::to_string(n_qubits));
  }
  if (n_qubits > kMaxDenseQubits) {
    throw InvalidArgument("brickwall: dense representation supports at most " +
                          std::to_string(kMaxDenseQubits) + " qubits");
  }
  if (!bond_bricks.empty() && static_cast<int>(bond_bricks.size()) != n_qubits) {
    throw InvalidArgument("brickwall: bond_bricks must hold one gate per bond");
  }
}

BrickwallSpec BrickwallSpec::haar_bricks(int n_qubits, Seed seed) {
  BrickwallSpec spec;
  spec.n_qubits = n_qubits;
  Rng rng(seed);
  for (int b = 0; b < n_qubits; ++b) {
    spec.bond_bricks.emplace_back(haar_unitary(4, rng));
  }
  spec.brick = Gate::from_haar(seed);
  return spec;
}

Layer::Layer(int n_qubits, std::vector<BondGate> gates)
    : n_qubits_(n_qubits), gates_(std::move(gates)) {}

MatrixXc Layer::unitary() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  MatrixXc u = MatrixXc::Identity(dim, dim);
  for (const auto& bg : gates_) {
    apply_two_qubit_left(u, bg.gate, bg.first, bg.second, n_qubits_);
  }
  return u;
}

void Layer::conjugate(MatrixXc& rho) const {
  for (const auto& bg : gates_) {
    apply_two_qubit_left(rho, bg.gate, bg.first, bg.second, n_qubits_);
    apply_two_qubit_right_adjoint(rho, bg.gate, bg.first, bg.second, n_qubits_);
  }
}

Layer build_layer(const BrickwallSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.n_qubits;
  std::vector<BondGate> gates;
  gates.reserve(static_cast<std::size_t>(n));
  auto brick_for = [&](int bond) -> Matrix4c {
    const Matrix4c base = spec.bond_bricks.empty() ? spec.brick.matrix()
                                                   : spec.bond_bricks[static_cast<std::size_t>(bond)];
    switch (spec.locals.kind) {
      case LocalsKind::None: return base;
      case LocalsKind::FloquetFixed: return spec.locals.fixed.apply(base);
      case LocalsKind::ResamplePerApplication: {
        const LocalDressing d = spec.locals.distribution == LocalsDistribution::Haar
                                    ? sample_haar_dressing(rng)
                                    : sample_w_dressing(rng);
        return d.apply(base);
      }
    }
    return base;
  };
  for (int parity : {0, 1}) {
    for (int b = parity; b < n; b += 2) {
      const int a = b;
      const int c = (b + 1) % n;
      gates.push_back({std::min(a, c), std::max(a, c), brick_for(b)});
    }
  }
  return Layer(n, std::move(gates));
}

MatrixXc build_layer_unitary(const BrickwallSpec& spec, Rng& rng) {
  return build_layer(spec, rng).unitary();
}

void apply_two_qubit_left(MatrixXc& m, const Matrix4c& g, int first, int second, int n_qubits) {
  const Eigen::Index mf = mask_of(first, n_qubits);
  const Eigen::Index ms = mask_of(second, n_qubits);
  const Eigen::Index both = mf | ms;
  const Eigen::Index rows = m.rows();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Complex* col = m.col(c).data();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r & both) continue;
      const Eigen::Index idx[4] = {r, r | ms, r | mf, r | both};
      const Complex v0 = col[idx[0]], v1 = col[idx[1]], v2 = col[idx[2]], v3 = col[idx[3]];
      for (int k = 0; k < 4; ++k) {
        col[idx[k]] = g(k, 0) * v0 + g(k, 1) * v1 + g(k, 2) * v2 + g(k, 3) * v3;
      }
    }
  }
}

void apply_two_qubit_right_adjoint(MatrixXc& m, const Matrix4c& g, int first, int second,
                                   int n_qubits) {
  const Eigen::Index mf = mask_of(first, n_qubits);
  const Eigen::Index ms = mask_of(second, n_qubits);
  const Eigen::Index both = mf | ms;
  const Matrix4c gc = g.conjugate();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (c & both) continue;
    const Eigen::Index idx[4] = {c, c | ms, c | mf, c | both};
    // new(:, x) = sum_y m(:, y) conj(g(x, y))
    const VectorXc v0 = m.col(idx[0]), v1 = m.col(idx[1]), v2 = m.col(idx[2]),
                   v3 = m.col(idx[3]);
    for (int k = 0; k < 4; ++k) {
      m.col(idx[k]) = gc(k, 0) * v0 + gc(k, 1) * v1 + gc(k, 2) * v2 + gc(k, 3) * v3;
    }
  }
}

DensityMatrix DensityMatrix::all_zeros(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  MatrixXc m = MatrixXc::Zero(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(n_qubits, MatrixXc::Identity(dim, dim) / static_cast<Real>(dim));
}

DensityMatrix DensityMatrix::from_matrix(const MatrixXc& m, Real tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("density matrix must be square");
  const int n = qubits_for_dim(m.rows());
  DensityMatrix rho(n, m);
  if (rho.hermiticity_error() > tol) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol) {
    throw InvalidArgument("density matrix trace differs from 1");
  }
  if (rho.min_eigenvalue() < -tol) throw InvalidArgument("density matrix is not positive");
  return rho;
}

DensityMatrix DensityMatrix::unchecked(MatrixXc m) {
  const int n = qubits_for_dim(m.rows());
  return DensityMatrix(n, std::move(m));
}

Real DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return data_.squaredNorm();
}

Real DensityMatrix::hermiticity_error() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

Real DensityMatrix::min_eigenvalue() const {
  const MatrixXc h = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix evolve(const DensityMatrix& rho, const MatrixXc& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw InvalidArgument("evolve: unitary dimension does not match the state");
  }
  MatrixXc tmp = u * rho.data();
  MatrixXc out = tmp * u.adjoint();
  return DensityMatrix::unchecked(std::move(out));
}

DensityMatrix evolve(const DensityMatrix& rho, const Layer& layer) {
  if (layer.n_qubits() != rho.n_qubits()) {
    throw InvalidArgument("evolve: layer size does not match the state");
  }
  MatrixXc m = rho.data();
  layer.conjugate(m);
  return DensityMatrix::unchecked(std::move(m));
}

Matrix2c single_site_marginal(const MatrixXc& rho, int site, int n_qubits) {
  const Eigen::Index mask = mask_of(site, n_qubits);
  Matrix2c out = Matrix2c::Zero();
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    if (r & mask) continue;
    // rho_{(a,rest),(b,rest)} summed over rest
    out(0, 0) += rho(r, r);
    out(0, 1) += rho(r, r | mask);
    out(1, 0) += rho(r | mask, r);
    out(1, 1) += rho(r | mask, r | mask);
  }
  return out;
}

}  // namespace qrc
