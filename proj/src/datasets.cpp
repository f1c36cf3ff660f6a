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

#include "qrc/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace qrc {

namespace {

constexpr Real kHeadroom = 1.0 - 1e-6;

std::string fmt(Real v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Real narma_input(int k) {
  const Real t = 2.0 * kPi * k / 100.0;
  return 0.1 * (std::sin(2.11 * t) * std::sin(3.73 * t) * std::sin(4.11 * t) + 1.0);
}

std::vector<Real> narma_targets(std::span<const Real> u, int order, const NarmaCoefficients& c) {
  if (order < 1) throw InvalidArgument("narma: order must be >= 1");
  const auto n = static_cast<int>(u.size());
  std::vector<Real> y(u.size(), 0.0);
  for (int k = order - 1; k + 1 < n; ++k) {
    Real window = 0.0;
    for (int j = 0; j < order; ++j) window += y[static_cast<std::size_t>(k - j)];
    const auto ks = static_cast<std::size_t>(k);
    const Real next = c.a * y[ks] + c.b * y[ks] * window +
                      c.c * u[static_cast<std::size_t>(k - order + 1)] * u[ks] + c.d;
    if (!std::isfinite(next) || std::abs(next) > 10.0) {
      throw NumericalError("narma: recursion diverged at step " + std::to_string(k + 1));
    }
    y[ks + 1] = next;
  }
  return y;
}

TimeSeries narma_series(int order, int length, int washout) {
  if (order < 1) throw InvalidArgument("narma: order must be >= 1");
  if (washout < 0 || length <= washout) {
    throw InvalidArgument("narma: length must exceed washout");
  }
  std::vector<Real> u(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) u[static_cast<std::size_t>(k)] = narma_input(k);
  const std::vector<Real> y = narma_targets(u, order);

  TimeSeries ts;
  ts.inputs.assign(u.begin() + washout, u.end());
  ts.targets.assign(y.begin() + washout, y.end());
  ts.meta = {{"generator", "narma"},
             {"order", std::to_string(order)},
             {"length", std::to_string(length)},
             {"washout", std::to_string(washout)}};
  return ts;
}

int MackeyGlassParams::delay_steps() const {
  return static_cast<int>(std::lround(tau / dt));
}

std::vector<Real> mackey_glass_trajectory(const MackeyGlassParams& p, std::vector<Real> x,
                                          int steps) {
  const int delay = p.delay_steps();
  if (static_cast<int>(x.size()) < delay + 1) {
    throw InvalidArgument("mackey_glass: history shorter than the delay");
  }
  x.reserve(x.size() + static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const std::size_t t = x.size() - 1;
    const Real lag = x[t - static_cast<std::size_t>(delay)];
    const Real next = x[t] + p.dt * (p.beta * lag / (1.0 + std::pow(lag, p.exponent)) - p.gamma * x[t]);
    if (!std::isfinite(next)) {
      throw NumericalError("mackey_glass: non-finite value at step " + std::to_string(t + 1));
    }
    x.push_back(next);
  }
  return x;
}

std::vector<Real> normalize_unit(std::span<const Real> x, Real& lo, Real& hi) {
  if (x.empty()) throw InvalidArgument("normalize_unit: empty input");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  lo = *mn;
  hi = *mx;
  const Real span = hi - lo;
  std::vector<Real> out(x.size(), 0.0);
  if (span <= 0.0) return out;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / span * kHeadroom;
  return out;
}

TimeSeries mackey_glass(int length, Real tau, Seed seed) {
  MackeyGlassParams p;
  p.tau = tau;
  return mackey_glass(length, p, seed);
}

TimeSeries mackey_glass(int length, const MackeyGlassParams& p, Seed seed) {
  if (length < 1) throw InvalidArgument("mackey_glass: length must be >= 1");
  if (!(p.tau > 0.0)) throw InvalidArgument("mackey_glass: tau must be positive");
  const int delay = p.delay_steps();

  Rng rng(seed);
  std::uniform_real_distribution<Real> hist(1.2, 1.4);
  std::vector<Real> x(static_cast<std::size_t>(delay + 1));
  for (auto& v : x) v = hist(rng);

  // T_tot = T + washout + delay points, plus one more so every retained
  // input has a successor to serve as its target.
  const int total = length + p.washout + delay;
  x = mackey_glass_trajectory(p, std::move(x), total + 1 - (delay + 1));
  const std::span<const Real> kept(x.data() + p.washout + delay, static_cast<std::size_t>(length + 1));

  Real lo = 0.0, hi = 0.0;
  const std::vector<Real> z = normalize_unit(kept, lo, hi);
  TimeSeries ts;
  ts.inputs.assign(z.begin(), z.end() - 1);
  ts.targets.assign(z.begin() + 1, z.end());
  ts.meta = {{"generator", "mackey_glass"},
             {"length", std::to_string(length)},
             {"tau", fmt(p.tau)},
             {"dt", fmt(p.dt)},
             {"beta", fmt(p.beta)},
             {"gamma", fmt(p.gamma)},
             {"exponent", fmt(p.exponent)},
             {"washout", std::to_string(p.washout)},
             {"seed", std::to_string(seed)},
             {"raw_min", fmt(lo)},
             {"raw_max", fmt(hi)}};
  return ts;
}

void write_csv(std::ostream& os, const TimeSeries& series) {
  os << "#";
  for (const auto& [k, v] : series.meta) os << ' ' << k << '=' << v;
  os << '\n' << "k,s_k,y_k\n";
  os.precision(17);
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << k << ',' << series.inputs[k] << ',' << series.targets[k] << '\n';
  }
}

}  // namespace qrc
