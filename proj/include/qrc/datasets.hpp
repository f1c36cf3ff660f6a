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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qrc/types.hpp"

namespace qrc {

/// Paired input/target sequence with the generator settings that made it.
struct TimeSeries {
  std::vector<Real> inputs;   // each in [0, 1)
  std::vector<Real> targets;
  std::map<std::string, std::string> meta;

  std::size_t size() const { return inputs.size(); }
};

struct NarmaCoefficients {
  Real a = 0.3;
  Real b = 0.05;
  Real c = 1.5;
  Real d = 0.1;
};

/// u_k = 0.1 [sin(2 pi 2.11 k / 100) sin(2 pi 3.73 k / 100) sin(2 pi 4.11 k / 100) + 1]
Real narma_input(int k);

/// Runs the order-L recursion over a given input sequence. y_0..y_{L-1} = 0.
/// Throws NumericalError when |y| exceeds 10.
std::vector<Real> narma_targets(std::span<const Real> u, int order,
                                const NarmaCoefficients& coeff = {});

/// NARMA-L with the trisine drive; the first `washout` pairs are dropped.
TimeSeries narma_series(int order, int length = 6000, int washout = 1000);

struct MackeyGlassParams {
  Real beta = 0.2;
  Real gamma = 0.1;
  Real exponent = 10.0;
  Real dt = 0.1;
  Real tau = 17.0;
  int washout = 1000;

  int delay_steps() const;
};

/// Forward-Euler Mackey-Glass recursion continued from `history` (whose last
/// element is the current value) for `steps` further points. Returns the full
/// trajectory, history included.
std::vector<Real> mackey_glass_trajectory(const MackeyGlassParams& p, std::vector<Real> history,
                                          int steps);

/// Normalised one-step-ahead Mackey-Glass task of `length` pairs.
/// History values are uniform on [1.2, 1.4].
TimeSeries mackey_glass(int length, Real tau, Seed seed);
TimeSeries mackey_glass(int length, const MackeyGlassParams& p, Seed seed);

/// Min-max map into [0, 1 - 1e-6].
std::vector<Real> normalize_unit(std::span<const Real> x, Real& lo, Real& hi);

/// CSV: "# key=value" metadata lines, then "k,s_k,y_k" rows.
void write_csv(std::ostream& os, const TimeSeries& series);

}  // namespace qrc
