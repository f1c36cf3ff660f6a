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

#include <set>

#include <doctest.h>

#include "oracles.hpp"
#include "qrc/circuit.hpp"

using namespace qrc;

namespace {

MatrixXc random_state(int n, Rng& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  std::normal_distribution<Real> g;
  MatrixXc a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  MatrixXc rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("identity template gives the identity layer") {
  BrickwallSpec spec;
  spec.n_qubits = 4;
  Rng rng(1);
  CHECK(build_layer_unitary(spec, rng) == MatrixXc::Identity(16, 16));
}

TEST_CASE("swap template walks basis states around the ring") {
  BrickwallSpec spec;
  spec.n_qubits = 4;
  spec.brick = Gate::from_matrix(swap_gate());
  Rng rng(1);
  const MatrixXc u = build_layer_unitary(spec, rng);
  for (Eigen::Index col = 0; col < 16; ++col) {
    int bits[4];
    for (int k = 0; k < 4; ++k) bits[k] = (col >> (3 - k)) & 1;
    std::swap(bits[0], bits[1]);
    std::swap(bits[2], bits[3]);
    std::swap(bits[1], bits[2]);
    std::swap(bits[3], bits[0]);
    Eigen::Index row = 0;
    for (int k = 0; k < 4; ++k) row |= Eigen::Index{bits[k]} << (3 - k);
    for (Eigen::Index r = 0; r < 16; ++r) CHECK(u(r, col) == Complex(r == row ? 1.0 : 0.0));
  }
}

TEST_CASE("layer matches the kron-embedding oracle") {
  for (int n : {2, 4, 6}) {
    const BrickwallSpec spec = BrickwallSpec::haar_bricks(n, 17);
    Rng rng(0);
    const MatrixXc u = build_layer_unitary(spec, rng);
    const MatrixXc ref = oracle::brickwall<MatrixXc>(
        [&](int b) { return MatrixXc(spec.bond_bricks[static_cast<std::size_t>(b)]); }, n);
    CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitarity_error(u) < 1e-10);
  }
}

TEST_CASE("layer conjugation equals the dense product") {
  Rng rng(3);
  BrickwallSpec spec;
  spec.n_qubits = 6;
  spec.brick = cartan_gate({0.7, 0.4, 0.2});
  spec.locals = LocalsPolicy::resample();
  const Layer layer = build_layer(spec, rng);
  const MatrixXc rho = random_state(6, rng);
  MatrixXc a = rho;
  layer.conjugate(a);
  const MatrixXc u = layer.unitary();
  CHECK((a - u * rho * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("locals policies") {
  Rng seed_rng(5);
  BrickwallSpec spec;
  spec.n_qubits = 6;
  spec.brick = cartan_gate({kPi / 4, kPi / 4, 0.2});
  spec.locals = LocalsPolicy::floquet(sample_haar_dressing(seed_rng));
  Rng rng(1);
  const MatrixXc a = build_layer_unitary(spec, rng);
  const MatrixXc b = build_layer_unitary(spec, rng);
  CHECK(a == b);
  CHECK(unitarity_error(a) < 1e-10);

  spec.locals = LocalsPolicy::resample(LocalsDistribution::W);
  const Layer l1 = build_layer(spec, rng);
  const Layer l2 = build_layer(spec, rng);
  CHECK(unitarity_error(l1.unitary()) < 1e-10);
  CHECK_FALSE(l1.unitary() == l2.unitary());
  std::set<std::pair<Real, Real>> distinct;
  for (const auto& g : l1.gates()) distinct.insert({g.gate(0, 0).real(), g.gate(0, 0).imag()});
  CHECK(distinct.size() == l1.gates().size());
}

TEST_CASE("layer ordering and bond orientation") {
  BrickwallSpec spec;
  spec.n_qubits = 6;
  Rng rng(0);
  const Layer layer = build_layer(spec, rng);
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {2, 3}, {4, 5}, {1, 2}, {3, 4}, {0, 5}};
  REQUIRE(layer.gates().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(layer.gates()[i].first == expected[i].first);
    CHECK(layer.gates()[i].second == expected[i].second);
  }
}

TEST_CASE("invalid brickwall sizes are rejected") {
  BrickwallSpec spec;
  Rng rng(0);
  for (int n : {0, 1, 3, 5, 12}) {
    spec.n_qubits = n;
    CHECK_THROWS_AS(build_layer(spec, rng), InvalidArgument);
  }
  spec.n_qubits = 4;
  spec.bond_bricks.assign(3, Matrix4c::Identity());
  CHECK_THROWS_AS(build_layer(spec, rng), InvalidArgument);
}

TEST_CASE("evolution preserves trace and purity") {
  Rng rng(7);
  const DensityMatrix zero = DensityMatrix::all_zeros(4);
  const MatrixXc id = MatrixXc::Identity(16, 16);
  CHECK(evolve(zero, id).data() == zero.data());

  const BrickwallSpec spec = BrickwallSpec::haar_bricks(4, 9);
  const MatrixXc u = build_layer_unitary(spec, rng);
  CHECK(evolve(zero, u).purity() == doctest::Approx(1.0).epsilon(1e-10));

  const DensityMatrix rho = DensityMatrix::from_matrix(random_state(4, rng));
  const DensityMatrix out = evolve(rho, u);
  CHECK(std::abs(out.trace() - rho.trace()) < 1e-12);
  CHECK(out.hermiticity_error() < 1e-10);
  CHECK(out.min_eigenvalue() > -1e-9);
  CHECK_THROWS_AS(evolve(rho, MatrixXc::Identity(8, 8)), InvalidArgument);
}

TEST_CASE("density matrix validation") {
  CHECK(DensityMatrix::maximally_mixed(3).purity() == doctest::Approx(1.0 / 8));
  MatrixXc bad = MatrixXc::Identity(4, 4);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), InvalidArgument);
  bad = MatrixXc::Zero(4, 4);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), InvalidArgument);
  bad = MatrixXc::Identity(4, 4) / 4.0;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), InvalidArgument);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(MatrixXc::Identity(3, 3) / 3.0), InvalidArgument);
}

TEST_CASE("perturbations on the first qubit stay inside the causal cone") {
  const int n = 6;
  const BrickwallSpec spec = BrickwallSpec::haar_bricks(n, 21);
  Rng rng(0);
  const Layer layer = build_layer(spec, rng);

  Rng srng(4);
  MatrixXc a = random_state(n, srng);
  // b differs from a only by a unitary rotation of qubit 0
  const MatrixXc r = kron(MatrixXc(haar_unitary_2(srng)), MatrixXc(MatrixXc::Identity(32, 32)));
  MatrixXc b = r * a * r.adjoint();

  std::vector<bool> cone(n, false);
  cone[0] = true;
  for (int step = 1; step <= 3; ++step) {
    layer.conjugate(a);
    layer.conjugate(b);
    for (const auto& g : layer.gates()) {
      if (cone[static_cast<std::size_t>(g.first)] || cone[static_cast<std::size_t>(g.second)]) {
        cone[static_cast<std::size_t>(g.first)] = cone[static_cast<std::size_t>(g.second)] = true;
      }
    }
    for (int j = 0; j < n; ++j) {
      const Matrix2c diff = single_site_marginal(a, j, n) - single_site_marginal(b, j, n);
      const Real dist = 0.5 * Eigen::SelfAdjointEigenSolver<Matrix2c>(diff).eigenvalues().cwiseAbs().sum();
      if (!cone[static_cast<std::size_t>(j)]) CHECK(dist < 1e-12);
    }
  }
  CHECK(std::count(cone.begin(), cone.end(), true) == n);
}

TEST_CASE("single-site marginal") {
  const MatrixXc rho = kron(MatrixXc(Matrix2c(Eigen::Vector2cd(0.25, 0.75).asDiagonal())),
                            MatrixXc(MatrixXc::Identity(2, 2) / 2.0));
  const Matrix2c m0 = single_site_marginal(rho, 0, 2);
  CHECK(m0(0, 0).real() == doctest::Approx(0.25));
  CHECK(m0(1, 1).real() == doctest::Approx(0.75));
  const Matrix2c m1 = single_site_marginal(rho, 1, 2);
  CHECK(m1(0, 0).real() == doctest::Approx(0.5));
}
