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

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qrc/types.hpp"

namespace qrc {

/// Coefficients of the nonlocal kernel exp{i(a XX + b YY + c ZZ)}.
struct CartanParams {
  Real alpha = 0.0;
  Real beta = 0.0;
  Real gamma = 0.0;

  /// pi/4 >= alpha >= beta >= |gamma|
  bool in_weyl_chamber(Real tol = 1e-12) const;
};

/// Single-qubit unitaries attached around a kernel:
/// U' = (u1 (x) u2) K (v1 (x) v2).
struct LocalDressing {
  Matrix2c u1 = Matrix2c::Identity();
  Matrix2c u2 = Matrix2c::Identity();
  Matrix2c v1 = Matrix2c::Identity();
  Matrix2c v2 = Matrix2c::Identity();

  Matrix4c apply(const Matrix4c& kernel) const;
};

enum class GateOrigin { Cartan, HaarTwoQubit, Composite };

std::string to_string(GateOrigin origin);
GateOrigin gate_origin_from_string(const std::string& name);

/// A two-qubit unitary together with how it was made. When locals are
/// present the matrix is always (u1 (x) u2) * kernel * (v1 (x) v2).
class Gate {
 public:
  static Gate from_cartan(const CartanParams& params);
  static Gate from_haar(Seed seed);
  static Gate from_matrix(const Matrix4c& matrix);

  /// Same kernel, new locals. Replaces any locals already attached.
  Gate dressed(const LocalDressing& locals) const;

  const Matrix4c& matrix() const { return matrix_; }
  const Matrix4c& kernel() const { return kernel_; }
  GateOrigin origin() const { return origin_; }
  const std::optional<CartanParams>& cartan() const { return cartan_; }
  const std::optional<Seed>& seed() const { return seed_; }
  const std::optional<LocalDressing>& locals() const { return locals_; }

 private:
  friend Gate cartan_gate(const CartanParams& params);
  Gate(GateOrigin origin, const Matrix4c& kernel);

  GateOrigin origin_;
  Matrix4c kernel_;
  Matrix4c matrix_;
  std::optional<CartanParams> cartan_;
  std::optional<Seed> seed_;
  std::optional<LocalDressing> locals_;
};

Gate cartan_gate(const CartanParams& params);

struct GateInvariants {
  Real e_p = 0.0;                 // entangling power, [0, 2/3]
  Real g_t = 0.0;                 // gate typicality, [0, 1]
  Real op_ent = 0.0;              // E(U), [0, 3/4]
  Real op_ent_times_swap = 0.0;   // E(U S)
};

inline constexpr Real kMaxEntanglingPower = 2.0 / 3.0;

/// exp{i(alpha XX + beta YY + gamma ZZ)}. The three generators commute, so
/// the exponential factorises into cos/sin terms and is exact.
Gate cartan_gate(const CartanParams& params);

/// Squared operator-Schmidt coefficients of a 4x4 operator with respect to
/// the unit-norm Pauli basis {I, X, Y, Z}/sqrt(2) on each factor. For a
/// unitary these sum to 4.
Eigen::Vector4d schmidt_coefficients(const MatrixXc& a);

/// E(A) = 1 - (1/16) sum_i gamma_i^2. Throws InvalidArgument unless 4x4.
Real operator_entanglement(const MatrixXc& a);

Matrix4c swap_gate();
Matrix4c cnot_gate();

GateInvariants gate_invariants(const Matrix4c& u);
inline GateInvariants gate_invariants(const Gate& g) { return gate_invariants(g.matrix()); }

enum class Reshuffle { R1, R2, T1, T2 };

/// Index reshufflings of a two-qubit operator viewed as the rank-4 tensor
/// A_{ijkl} = <ij|A|kl>:
///   R1: <lj|A'|ki> = <ij|A|kl>     R2: <ik|A'|jl> = <ij|A|kl>
///   T1: <kj|A'|il> = <ij|A|kl>     T2: <il|A'|jk> = <ij|A|kl>
/// R1, R2 and T1 are involutions. T2 permutes three indices cyclically and
/// has order three.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 4, 4> reshuffle(const Eigen::MatrixBase<Derived>& a,
                                                        Reshuffle kind) {
  if (a.rows() != 4 || a.cols() != 4) {
    throw InvalidArgument("reshuffle: operator must be 4x4");
  }
  Eigen::Matrix<typename Derived::Scalar, 4, 4> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          const auto value = a(2 * i + j, 2 * k + l);
          switch (kind) {
            case Reshuffle::R1: out(2 * l + j, 2 * k + i) = value; break;
            case Reshuffle::R2: out(2 * i + k, 2 * j + l) = value; break;
            case Reshuffle::T1: out(2 * k + j, 2 * i + l) = value; break;
            case Reshuffle::T2: out(2 * i + l, 2 * j + k) = value; break;
          }
        }
      }
    }
  }
  return out;
}

/// True iff the realigned gate (R1) is unitary within tol.
bool is_dual_unitary(const Matrix4c& u, Real tol = 1e-9);
inline bool is_dual_unitary(const Gate& g, Real tol = 1e-9) {
  return is_dual_unitary(g.matrix(), tol);
}

/// Haar-distributed U(dim) via QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out. dim must be 2 or 4.
MatrixXc haar_unitary(int dim, Rng& rng);
MatrixXc haar_unitary(int dim, Seed seed);
Matrix2c haar_unitary_2(Rng& rng);

/// SU(2) element u(theta = pi/2, phi, psi):
///   (1/sqrt2) [[ e^{i phi/2},  e^{-i psi/2}],
///              [-e^{i psi/2},  e^{-i phi/2}]]
Matrix2c w_local(Real phi, Real psi);

/// Four independent w_local factors with angles uniform on [0, 4 pi).
LocalDressing sample_w_dressing(Rng& rng);
/// Four independent single-qubit Haar unitaries.
LocalDressing sample_haar_dressing(Rng& rng);

/// f(x, y) = sin^2(2x) (cos^2(2y) - 3/5)
Real solvable_f(Real x, Real y);
/// f(a, b) + f(b, c) + f(c, a); zero on the solvable family.
Real solvable_residual(const CartanParams& p);

/// One draw of (alpha, beta) uniform on [0, pi/4]^2 followed by an exact solve
/// for gamma. Returns nullopt when no real gamma exists for the draw.
std::optional<Gate> sample_solvable(Rng& rng);

/// Repeats sample_solvable until a gate is accepted. Throws NumericalError
/// after max_attempts rejections.
Gate sample_solvable_accepted(Rng& rng, int max_attempts = 100000);

nlohmann::json gate_to_json(const Gate& g);
Gate gate_from_json(const nlohmann::json& j);

}  // namespace qrc
