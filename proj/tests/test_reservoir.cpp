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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "qrc/ergodicity.hpp"
#include "qrc/reservoir.hpp"

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

MatrixXc trace_out_first(const MatrixXc& rho) {
  const Eigen::Index h = rho.rows() / 2;
  return rho.topLeftCorner(h, h) + rho.bottomRightCorner(h, h);
}

MatrixXr random_real(int r, int c, Rng& rng) {
  std::normal_distribution<Real> g;
  MatrixXr m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

TimeSeries ramp(int n) {
  TimeSeries ts;
  for (int k = 0; k < n; ++k) {
    ts.inputs.push_back(0.9 * k / n);
    ts.targets.push_back(std::sin(0.1 * k));
  }
  return ts;
}

}  // namespace

TEST_CASE("injection resets the first qubit") {
  Rng rng(1);
  const DensityMatrix rho = DensityMatrix::from_matrix(random_state(3, rng));
  const MatrixXc rest = trace_out_first(rho.data());

  const DensityMatrix zero = inject(rho, 0.0);
  const Matrix2c m0 = single_site_marginal(zero.data(), 0, 3);
  CHECK(std::abs(m0(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(m0(1, 1)) < 1e-15);

  const DensityMatrix plus = inject(rho, 0.5);
  const Matrix2c mp = single_site_marginal(plus.data(), 0, 3);
  CHECK((mp - Matrix2c::Constant(0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((trace_out_first(plus.data()) - rest).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(plus.trace() - 1.0) < 1e-12);

  // psi psi^dag (x) Tr_1 rho as a direct Kronecker product
  const Real s = 0.3;
  Eigen::Vector2cd psi(std::sqrt(1 - s), std::sqrt(s));
  const MatrixXc expected = kron(MatrixXc(psi * psi.adjoint()), rest);
  CHECK((inject(rho, s).data() - expected).cwiseAbs().maxCoeff() < 1e-15);

  CHECK((inject(inject(rho, s), s).data() - inject(rho, s).data()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(inject(rho, 1.0), InvalidArgument);
  CHECK_THROWS_AS(inject(rho, -0.01), InvalidArgument);
  CHECK_THROWS_AS(inject(rho, std::nan("")), InvalidArgument);
}

TEST_CASE("feature readout") {
  CHECK(read_features(DensityMatrix::all_zeros(4)) == VectorXr::Ones(4));
  CHECK((read_features(DensityMatrix::maximally_mixed(4)).array() - 0.5).abs().maxCoeff() < 1e-15);
  Matrix2c one = Matrix2c::Zero();
  one(1, 1) = 1.0;
  const MatrixXc rho = kron(MatrixXc(one), MatrixXc(MatrixXc::Identity(8, 8) / 8.0));
  const VectorXr z = read_features(rho, 4);
  CHECK(z(0) == doctest::Approx(0.0));
  for (int i = 1; i < 4; ++i) CHECK(z(i) == doctest::Approx(0.5));

  // (<Z_i> + 1) / 2 via explicit Pauli strings
  Rng rng(2);
  const MatrixXc r = random_state(3, rng);
  const VectorXr zf = read_features(r, 3);
  for (int i = 0; i < 3; ++i) {
    MatrixXc op = MatrixXc::Identity(1, 1);
    for (int s = 0; s < 3; ++s) op = kron(op, s == i ? MatrixXc(pauli::z()) : MatrixXc(MatrixXc::Identity(2, 2)));
    CHECK(zf(i) == doctest::Approx(((op * r).trace().real() + 1.0) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("identity reservoir reports the injected input") {
  TimeSeries ts = ramp(20);
  ReservoirConfig cfg;
  cfg.circuit.n_qubits = 4;
  for (int v : {1, 3}) {
    cfg.multiplexing = v;
    const ReservoirRun run = run_reservoir(ts, cfg, 1);
    REQUIRE(run.features.rows() == 4 * v);
    REQUIRE(run.features.cols() == 20);
    for (int k = 0; k < 20; ++k) {
      for (int rep = 0; rep < v; ++rep) {
        CHECK(run.features.data(rep * 4, k) == doctest::Approx(1.0 - ts.inputs[static_cast<std::size_t>(k)]).epsilon(1e-12));
        for (int i = 1; i < 4; ++i) CHECK(run.features.data(rep * 4 + i, k) == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("reservoir output shape, washout and bias") {
  TimeSeries ts = ramp(30);
  ReservoirConfig cfg;
  cfg.circuit = BrickwallSpec::haar_bricks(4, 3);
  cfg.multiplexing = 2;
  cfg.reservoir_washout = 5;
  cfg.bias_feature = true;
  const ReservoirRun run = run_reservoir(ts, cfg, 1);
  CHECK(run.features.rows() == 4 * 2 + 1);
  CHECK(run.features.cols() == 25);
  CHECK(run.targets.size() == 25);
  CHECK(run.targets.front() == ts.targets[5]);
  CHECK(run.features.data.row(8) == VectorXr::Ones(25).transpose());
  CHECK(run.features.data.topRows(8).minCoeff() >= -1e-12);
  CHECK(run.features.data.topRows(8).maxCoeff() <= 1.0 + 1e-12);

  const ReservoirRun again = run_reservoir(ts, cfg, 1);
  CHECK(again.features.data == run.features.data);
}

TEST_CASE("resampled circuits match the dense Floquet path when locals are trivial") {
  TimeSeries ts = ramp(15);
  ReservoirConfig dense;
  dense.circuit.n_qubits = 4;
  dense.circuit.brick = cartan_gate({0.6, 0.3, 0.2});
  dense.multiplexing = 2;
  ReservoirConfig gatewise = dense;
  gatewise.circuit.locals = LocalsPolicy::resample();
  const ReservoirRun a = run_reservoir(ts, dense, 1);
  const ReservoirRun b = run_reservoir(ts, gatewise, 1);
  CHECK_FALSE(a.features.data.isApprox(b.features.data));  // locals do matter

  gatewise.circuit.locals = LocalsPolicy::none();
  const ReservoirRun c = run_reservoir(ts, gatewise, 1);
  CHECK((a.features.data - c.features.data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("readout exact fit and zero targets") {
  Rng rng(4);
  MatrixXr z = random_real(5, 40, rng).cwiseAbs();
  std::vector<Real> y(40);
  for (int k = 0; k < 40; ++k) y[static_cast<std::size_t>(k)] = z(2, k);
  const ReadoutModel m = train_readout(z, y);
  VectorXr e = VectorXr::Zero(5);
  e(2) = 1.0;
  CHECK((m.weights - e).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(evaluate(m, z, y) < 1e-20);

  const std::vector<Real> zeros(40, 0.0);
  CHECK(train_readout(z, zeros).weights.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(train_readout(MatrixXr(5, 0), std::vector<Real>{}), InvalidArgument);
  CHECK_THROWS_AS(train_readout(z, std::vector<Real>(3, 0.0)), InvalidArgument);
}

TEST_CASE("readout agrees with SVD and normal-equation oracles") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXr z = random_real(10, 50, rng);
    const MatrixXr y = random_real(50, 1, rng);
    const std::vector<Real> yv(y.data(), y.data() + 50);
    const ReadoutModel m = train_readout(z, yv);

    const MatrixXr a = z.transpose();
    const VectorXr w_svd = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y.col(0));
    const VectorXr w_ne = (a.transpose() * a).ldlt().solve(a.transpose() * y.col(0));
    CHECK(std::abs((a * m.weights - y.col(0)).norm() - (a * w_svd - y.col(0)).norm()) < 1e-8);
    CHECK((m.weights - w_ne).norm() < 1e-8);
  }
}

TEST_CASE("rank-deficient readout returns the minimum-norm solution") {
  Rng rng(6);
  MatrixXr base = random_real(4, 30, rng);
  MatrixXr z(6, 30);
  z << base, base.row(0), base.row(1) + base.row(2);
  const MatrixXr y = random_real(30, 1, rng);
  const std::vector<Real> yv(y.data(), y.data() + 30);
  const ReadoutModel m = train_readout(z, yv);
  const MatrixXr a = z.transpose();

  const VectorXr residual = a * m.weights - y.col(0);
  CHECK((a.transpose() * residual).cwiseAbs().maxCoeff() < 1e-9);

  Eigen::JacobiSVD<MatrixXr> svd(a, Eigen::ComputeFullV);
  const auto rank = svd.rank();
  const MatrixXr null_space = svd.matrixV().rightCols(6 - rank);
  REQUIRE(null_space.cols() == 2);
  CHECK((null_space.transpose() * m.weights).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mean squared error") {
  ReadoutModel m;
  m.weights = VectorXr::Ones(1);
  MatrixXr z = MatrixXr::Constant(1, 4, 2.0);
  CHECK(evaluate(m, z, std::vector<Real>(4, 2.0)) == 0.0);
  CHECK(evaluate(m, z, std::vector<Real>(4, 5.0)) == doctest::Approx(9.0));

  Rng rng(7);
  m.weights = random_real(3, 1, rng).col(0);
  z = random_real(3, 25, rng);
  const MatrixXr y = random_real(25, 1, rng);
  const std::vector<Real> yv(y.data(), y.data() + 25);
  Real sum = 0.0;
  for (int k = 0; k < 25; ++k) {
    Real pred = 0.0;
    for (int i = 0; i < 3; ++i) pred += z(i, k) * m.weights(i);
    sum += (pred - yv[static_cast<std::size_t>(k)]) * (pred - yv[static_cast<std::size_t>(k)]);
  }
  CHECK(evaluate(m, z, yv) == doctest::Approx(sum / 25).epsilon(1e-12));
  CHECK_THROWS_AS(evaluate(m, MatrixXr(3, 0), std::vector<Real>{}), InvalidArgument);
}

TEST_CASE("chronological split") {
  TimeSeries ts = ramp(50);
  ReservoirConfig cfg;
  cfg.circuit = BrickwallSpec::haar_bricks(4, 8);
  const TaskScore sc = score_task(ts, cfg, 1);
  CHECK(sc.train_columns == 40);
  CHECK(sc.eval_columns == 10);
  CHECK(sc.eval_mse >= 0.0);
}

TEST_CASE("pairwise overlap") {
  Rng rng(8);
  const MatrixXc r = random_state(3, rng);
  std::vector<MatrixXc> same(5, r);
  CHECK(mean_pairwise_overlap(same) == doctest::Approx((r * r).trace().real()).epsilon(1e-12));

  std::vector<MatrixXc> mixed(4, MatrixXc::Identity(8, 8) / 8.0);
  CHECK(mean_pairwise_overlap(mixed) == doctest::Approx(1.0 / 8).epsilon(1e-14));

  std::vector<MatrixXc> states;
  for (int i = 0; i < 6; ++i) states.push_back(random_state(3, rng));
  Real sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) {
        sum += (states[static_cast<std::size_t>(i)] * states[static_cast<std::size_t>(j)]).trace().real();
        ++pairs;
      }
  CHECK(mean_pairwise_overlap(states) == doctest::Approx(sum / pairs).epsilon(1e-12));
  CHECK_THROWS_AS(mean_pairwise_overlap(std::vector<MatrixXc>(1, r)), InvalidArgument);
}

TEST_CASE("overlap statistics of a maximally mixed register") {
  ReservoirConfig cfg;
  cfg.circuit = BrickwallSpec::haar_bricks(4, 2);
  cfg.initial_state = InitialState::MaximallyMixed;
  // one shared unitary: tr(rho_s rho_t) = |<psi_s|psi_t>|^2 / 8 for uniform s, t
  const Real expected = (0.5 + 2.0 * (kPi / 8) * (kPi / 8)) / 8.0;
  const auto ov = overlap_statistics(cfg, 400, 3, 3);
  REQUIRE(ov.size() == 3);
  for (Real o : ov) CHECK(o == doctest::Approx(expected).epsilon(0.05));
  CHECK(ov[0] == doctest::Approx(ov[2]).epsilon(1e-10));
  CHECK_THROWS_AS(overlap_statistics(cfg, 1, 3, 3), InvalidArgument);
}

TEST_CASE("fading memory of dual-unitary reservoirs") {
  const int n = 4;
  const int steps = 20;
  std::vector<Real> dist(steps, 0.0);
  for (int seed = 0; seed < 20; ++seed) {
    ReservoirConfig cfg;
    cfg.circuit.n_qubits = n;
    cfg.circuit.brick = max_mixing_gate(0.5, 50, static_cast<Seed>(seed)).gate;
    TimeSeries a;
    Rng rng(static_cast<Seed>(100 + seed));
    std::uniform_real_distribution<Real> u(0, 1);
    for (int k = 0; k < steps; ++k) {
      a.inputs.push_back(u(rng));
      a.targets.push_back(0.0);
    }
    TimeSeries b = a;
    b.inputs[0] = std::fmod(a.inputs[0] + 0.5, 1.0);
    const auto za = run_reservoir(a, cfg, 1).features.data;
    const auto zb = run_reservoir(b, cfg, 1).features.data;
    for (int k = 0; k < steps; ++k) dist[static_cast<std::size_t>(k)] += (za.col(k) - zb.col(k)).norm() / 20;
  }
  std::vector<Real> ks(steps);
  for (int k = 0; k < steps; ++k) ks[static_cast<std::size_t>(k)] = k;
  CHECK(spearman(ks, dist) < -0.8);
  CHECK(dist.back() < 0.1 * dist.front());
}

TEST_CASE("feature csv and weights json") {
  FeatureMatrix z;
  z.data = MatrixXr::Constant(3, 2, 0.5);
  z.n_qubits = 2;
  z.multiplexing = 1;
  z.has_bias = true;
  std::ostringstream os;
  write_features_csv(os, z);
  const std::string text = os.str();
  CHECK(text.find("qubit,v,t0,t1\n1,1,0.5,0.5\n2,1,0.5,0.5\nbias,0,0.5,0.5\n") != std::string::npos);
  ReadoutModel m;
  m.weights = VectorXr::LinSpaced(3, 0, 2);
  CHECK(weights_to_json(m).dump() == "[0.0,1.0,2.0]");
}
