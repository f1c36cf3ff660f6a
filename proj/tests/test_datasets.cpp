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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <doctest.h>

#include "qrc/datasets.hpp"

using namespace qrc;

TEST_CASE("narma drive") {
  CHECK(narma_input(0) == doctest::Approx(0.1).epsilon(1e-15));
  for (int k = 0; k < 6000; ++k) {
    const Real u = narma_input(k);
    CHECK((u >= 0.0 && u <= 0.2));
  }
}

TEST_CASE("narma recursion with zero drive reaches the quadratic fixed point") {
  const std::vector<Real> u(3000, 0.0);
  const auto y = narma_targets(u, 2);
  // y = 0.3 y + 0.1 y^2 + 0.1
  const Real fixed = (0.7 - std::sqrt(0.49 - 0.04)) / 0.2;
  CHECK(y.back() == doctest::Approx(fixed).epsilon(1e-12));
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 0.0);
}

TEST_CASE("narma recursion matches a hand-rolled loop") {
  std::vector<Real> u(50);
  for (int k = 0; k < 50; ++k) u[static_cast<std::size_t>(k)] = narma_input(k);
  const int order = 4;
  std::vector<Real> ref(50, 0.0);
  for (int n = order - 1; n < 49; ++n) {
    Real s = 0.0;
    for (int j = 0; j < order; ++j) s += ref[static_cast<std::size_t>(n - j)];
    ref[static_cast<std::size_t>(n + 1)] = 0.3 * ref[static_cast<std::size_t>(n)] +
                                           0.05 * ref[static_cast<std::size_t>(n)] * s +
                                           1.5 * u[static_cast<std::size_t>(n - order + 1)] * u[static_cast<std::size_t>(n)] + 0.1;
  }
  CHECK(narma_targets(u, order) == ref);
}

TEST_CASE("narma targets stay bounded for orders up to 16") {
  for (int order = 1; order <= 16; ++order) {
    const TimeSeries ts = narma_series(order);
    CHECK(ts.size() == 5000);
    CHECK(ts.targets.size() == 5000);
    const auto [lo, hi] = std::minmax_element(ts.targets.begin(), ts.targets.end());
    CHECK(*lo > 0.0);
    CHECK(*hi < 1.0);
  }
}

TEST_CASE("narma divergence guard") {
  const std::vector<Real> u(200, 0.15);
  NarmaCoefficients c;
  c.b = 5.0;
  CHECK_THROWS_AS(narma_targets(u, 10, c), NumericalError);
  CHECK_THROWS_AS(narma_series(0), InvalidArgument);
  CHECK_THROWS_AS(narma_series(2, 100, 100), InvalidArgument);
}

TEST_CASE("mackey-glass fixed point history stays constant") {
  MackeyGlassParams p;
  // beta x / (1 + x^10) = gamma x at x = 1
  const std::vector<Real> history(static_cast<std::size_t>(p.delay_steps() + 1), 1.0);
  const auto x = mackey_glass_trajectory(p, history, 1000);
  for (Real v : x) CHECK(v == 1.0);
  CHECK(p.delay_steps() == 170);
  CHECK_THROWS_AS(mackey_glass_trajectory(p, {1.0, 1.0}, 10), InvalidArgument);
}

TEST_CASE("mackey-glass series normalisation and determinism") {
  const TimeSeries a = mackey_glass(5000, 17.0, 3);
  const TimeSeries b = mackey_glass(5000, 17.0, 3);
  const TimeSeries c = mackey_glass(5000, 17.0, 4);
  CHECK(a.inputs == b.inputs);
  CHECK(a.targets == b.targets);
  CHECK_FALSE(a.inputs == c.inputs);
  REQUIRE(a.size() == 5000);
  std::vector<Real> all = a.inputs;
  all.push_back(a.targets.back());
  const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
  CHECK(*lo == 0.0);
  CHECK(*hi < 1.0);
  CHECK(*hi > 0.999);
  for (std::size_t k = 0; k + 1 < a.size(); ++k) CHECK(a.targets[k] == a.inputs[k + 1]);
}

TEST_CASE("mackey-glass at tau 17 is aperiodic") {
  const TimeSeries ts = mackey_glass(5000, 17.0, 1);
  const auto& x = ts.inputs;
  for (std::size_t period = 1; period < x.size() / 2; ++period) {
    Real worst = 0.0;
    for (std::size_t t = 0; t + period < x.size() && worst <= 1e-6; ++t) {
      worst = std::max(worst, std::abs(x[t + period] - x[t]));
    }
    if (worst <= 1e-6) FAIL("series repeats with period " << period);
  }
  // autocorrelation decays well below one at long lags
  Real mean = 0.0;
  for (Real v : x) mean += v;
  mean /= static_cast<Real>(x.size());
  auto acf = [&](std::size_t lag) {
    Real num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) den += (x[t] - mean) * (x[t] - mean);
    for (std::size_t t = 0; t + lag < x.size(); ++t) num += (x[t] - mean) * (x[t + lag] - mean);
    return num / den;
  };
  CHECK(std::abs(acf(2000)) < 0.5);
}

TEST_CASE("series csv layout") {
  TimeSeries ts;
  ts.inputs = {0.1, 0.2};
  ts.targets = {0.3, 0.4};
  ts.meta = {{"generator", "test"}};
  std::ostringstream os;
  write_csv(os, ts);
  CHECK(os.str() == "# generator=test\nk,s_k,y_k\n0,0.10000000000000001,0.29999999999999999\n"
                    "1,0.20000000000000001,0.40000000000000002\n");
}

TEST_CASE("normalize_unit") {
  Real lo = 0.0, hi = 0.0;
  const std::vector<Real> x = {2.0, 4.0, 3.0};
  const auto z = normalize_unit(x, lo, hi);
  CHECK(lo == 2.0);
  CHECK(hi == 4.0);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == doctest::Approx(1.0 - 1e-6).epsilon(1e-15));
  CHECK(z[2] == doctest::Approx(0.5 * (1.0 - 1e-6)).epsilon(1e-15));
  CHECK_THROWS_AS(normalize_unit(std::vector<Real>{}, lo, hi), InvalidArgument);
}
