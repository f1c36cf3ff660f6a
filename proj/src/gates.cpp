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

#include "qrc/gates.hpp"

#include <array>
#include <cmath>

namespace qrc {

bool CartanParams::in_weyl_chamber(Real tol) const {
  return kPi / 4 + tol >= alpha && alpha + tol >= beta && beta + tol >= std::abs(gamma);
}

Matrix4c LocalDressing::apply(const Matrix4c& kernel) const {
  return Matrix4c(kron(u1, u2)) * kernel * Matrix4c(kron(v1, v2));
}

std::string to_string(GateOrigin origin) {
  switch (origin) {
    case GateOrigin::Cartan: return "cartan";
    case GateOrigin::HaarTwoQubit: return "haar_two_qubit";
    case GateOrigin::Composite: return "composite";
  }
  return "composite";
}

GateOrigin gate_origin_from_string(const std::string& name) {
  if (name == "cartan") return GateOrigin::Cartan;
  if (name == "haar_two_qubit") return GateOrigin::HaarTwoQubit;
  if (name == "composite") return GateOrigin::Composite;
  throw InvalidArgument("unknown gate origin '" + name + "'");
}

Gate::Gate(GateOrigin origin, const Matrix4c& kernel)
    : origin_(origin), kernel_(kernel), matrix_(kernel) {}

Gate Gate::from_cartan(const CartanParams& p) { return cartan_gate(p); }

Gate Gate::from_haar(Seed seed) {
  Gate g(GateOrigin::HaarTwoQubit, Matrix4c(haar_unitary(4, seed)));
  g.seed_ = seed;
  return g;
}

Gate Gate::from_matrix(const Matrix4c& matrix) { return Gate(GateOrigin::Composite, matrix); }

Gate Gate::dressed(const LocalDressing& locals) const {
  Gate g = *this;
  g.locals_ = locals;
  g.matrix_ = locals.apply(kernel_);
  return g;
}

Gate cartan_gate(const CartanParams& p) {
  const Matrix4c xx = kron(pauli::x(), pauli::x());
  const Matrix4c yy = kron(pauli::y(), pauli::y());
  const Matrix4c zz = kron(pauli::z(), pauli::z());
  const Matrix4c id = Matrix4c::Identity();
  // exp(i t P) = cos t + i sin t P for any P with P^2 = 1
  const Matrix4c ex = std::cos(p.alpha) * id + kI * std::sin(p.alpha) * xx;
  const Matrix4c ey = std::cos(p.beta) * id + kI * std::sin(p.beta) * yy;
  const Matrix4c ez = std::cos(p.gamma) * id + kI * std::sin(p.gamma) * zz;
  Gate g = Gate::from_matrix(ex * ey * ez);
  g.origin_ = GateOrigin::Cartan;
  g.cartan_ = p;
  return g;
}

Eigen::Vector4d schmidt_coefficients(const MatrixXc& a) {
  if (a.rows() != 4 || a.cols() != 4) {
    throw InvalidArgument("operator_entanglement: operator must be 4x4");
  }
  const std::array<Matrix2c, 4> basis{pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  Matrix4c coeff;
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      // <B_pq, A> with B_pq = (sigma_p (x) sigma_q) / 2, Hermitian
      coeff(p, q) = (Matrix4c(kron(basis[p], basis[q])) * a).trace() / 2.0;
    }
  }
  const Eigen::Vector4d s = Eigen::JacobiSVD<Matrix4c>(coeff).singularValues();
  return s.cwiseAbs2();
}

Real operator_entanglement(const MatrixXc& a) {
  const Eigen::Vector4d gamma = schmidt_coefficients(a);
  return 1.0 - gamma.squaredNorm() / 16.0;
}

Matrix4c swap_gate() {
  Matrix4c s = Matrix4c::Zero();
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
  return s;
}

Matrix4c cnot_gate() {
  Matrix4c c = Matrix4c::Zero();
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
  return c;
}

GateInvariants gate_invariants(const Matrix4c& u) {
  const Matrix4c s = swap_gate();
  const Real e_s = operator_entanglement(s);
  GateInvariants inv;
  inv.op_ent = operator_entanglement(u);
  inv.op_ent_times_swap = operator_entanglement(u * s);
  inv.e_p = (inv.op_ent + inv.op_ent_times_swap - e_s) / e_s;
  inv.g_t = (inv.op_ent - inv.op_ent_times_swap + e_s) / (2.0 * e_s);
  return inv;
}

bool is_dual_unitary(const Matrix4c& u, Real tol) {
  return unitarity_error(reshuffle(u, Reshuffle::R1)) < tol;
}

MatrixXc haar_unitary(int dim, Rng& rng) {
  if (dim != 2 && dim != 4) {
    throw InvalidArgument("haar_unitary: dim must be 2 or 4");
  }
  std::normal_distribution<Real> normal(0.0, std::sqrt(0.5));
  MatrixXc z(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<MatrixXc> qr(z);
  MatrixXc q = qr.householderQ();
  const MatrixXc& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

MatrixXc haar_unitary(int dim, Seed seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

Matrix2c haar_unitary_2(Rng& rng) { return Matrix2c(haar_unitary(2, rng)); }

Matrix2c w_local(Real phi, Real psi) {
  const Real h = 1.0 / std::sqrt(2.0);
  Matrix2c w;
  w << h * std::polar(1.0, phi / 2), h * std::polar(1.0, -psi / 2),
      -h * std::polar(1.0, psi / 2), h * std::polar(1.0, -phi / 2);
  return w;
}

LocalDressing sample_w_dressing(Rng& rng) {
  std::uniform_real_distribution<Real> angle(0.0, 4.0 * kPi);
  LocalDressing d;
  for (Matrix2c* m : {&d.u1, &d.u2, &d.v1, &d.v2}) {
    const Real phi = angle(rng);
    const Real psi = angle(rng);
    *m = w_local(phi, psi);
  }
  return d;
}

LocalDressing sample_haar_dressing(Rng& rng) {
  LocalDressing d;
  d.u1 = haar_unitary_2(rng);
  d.u2 = haar_unitary_2(rng);
  d.v1 = haar_unitary_2(rng);
  d.v2 = haar_unitary_2(rng);
  return d;
}

Real solvable_f(Real x, Real y) {
  const Real s = std::sin(2 * x);
  const Real c = std::cos(2 * y);
  return s * s * (c * c - 0.6);
}

Real solvable_residual(const CartanParams& p) {
  return solvable_f(p.alpha, p.beta) + solvable_f(p.beta, p.gamma) +
         solvable_f(p.gamma, p.alpha);
}

std::optional<Gate> sample_solvable(Rng& rng) {
  std::uniform_real_distribution<Real> angle(0.0, kPi / 4);
  std::bernoulli_distribution sign(0.5);
  const Real alpha = angle(rng);
  const Real beta = angle(rng);
  const bool negative_root = sign(rng);

  // With x = cos^2(2 gamma) the constraint reads
  //   f(a,b) + sin^2(2b)(x - 3/5) + (1 - x)(cos^2(2a) - 3/5) = 0,
  // which is linear in x.
  const Real sb = std::sin(2 * beta);
  const Real ca = std::cos(2 * alpha);
  const Real slope = sb * sb - (ca * ca - 0.6);
  const Real offset = solvable_f(alpha, beta) - 0.6 * sb * sb + (ca * ca - 0.6);
  if (std::abs(slope) < 1e-14) return std::nullopt;
  const Real x = -offset / slope;
  if (!(x >= 0.0 && x <= 1.0)) return std::nullopt;

  const Real root = negative_root ? -std::sqrt(x) : std::sqrt(x);
  const CartanParams p{alpha, beta, 0.5 * std::acos(root)};
  return cartan_gate(p);
}

Gate sample_solvable_accepted(Rng& rng, int max_attempts) {
  for (int i = 0; i < max_attempts; ++i) {
    if (auto g = sample_solvable(rng)) return *g;
  }
  throw NumericalError("sample_solvable: no solvable gate after max_attempts draws");
}

namespace {

nlohmann::json flatten(const Matrix2c& m) {
  auto arr = nlohmann::json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      arr.push_back(m(i, j).real());
      arr.push_back(m(i, j).imag());
    }
  }
  return arr;
}

Matrix2c unflatten2(const nlohmann::json& arr) {
  if (!arr.is_array() || arr.size() != 8) {
    throw InvalidArgument("gate json: local must hold 8 numbers");
  }
  Matrix2c m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto k = static_cast<std::size_t>(2 * (2 * i + j));
      m(i, j) = Complex(arr[k].get<Real>(), arr[k + 1].get<Real>());
    }
  }
  return m;
}

}  // namespace

nlohmann::json gate_to_json(const Gate& g) {
  nlohmann::json j;
  j["origin"] = to_string(g.origin());
  if (g.cartan()) {
    j["cartan"] = {g.cartan()->alpha, g.cartan()->beta, g.cartan()->gamma};
  } else {
    j["cartan"] = nullptr;
  }
  if (g.locals()) {
    const auto& l = *g.locals();
    j["locals"] = {flatten(l.u1), flatten(l.u2), flatten(l.v1), flatten(l.v2)};
  } else {
    j["locals"] = nullptr;
  }
  if (g.seed()) {
    j["seed"] = *g.seed();
  } else {
    j["seed"] = nullptr;
  }
  if (g.origin() == GateOrigin::Composite) {
    auto arr = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        arr.push_back(g.kernel()(r, c).real());
        arr.push_back(g.kernel()(r, c).imag());
      }
    }
    j["kernel"] = arr;
  }
  return j;
}

Gate gate_from_json(const nlohmann::json& j) {
  const GateOrigin origin = gate_origin_from_string(j.at("origin").get<std::string>());
  Gate g = Gate::from_matrix(Matrix4c::Identity());
  switch (origin) {
    case GateOrigin::Cartan: {
      const auto& c = j.at("cartan");
      g = cartan_gate({c.at(0).get<Real>(), c.at(1).get<Real>(), c.at(2).get<Real>()});
      break;
    }
    case GateOrigin::HaarTwoQubit:
      g = Gate::from_haar(j.at("seed").get<Seed>());
      break;
    case GateOrigin::Composite: {
      const auto& arr = j.at("kernel");
      if (!arr.is_array() || arr.size() != 32) {
        throw InvalidArgument("gate json: composite kernel must hold 32 numbers");
      }
      Matrix4c k;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          const auto idx = static_cast<std::size_t>(2 * (4 * r + c));
          k(r, c) = Complex(arr[idx].get<Real>(), arr[idx + 1].get<Real>());
        }
      }
      g = Gate::from_matrix(k);
      break;
    }
  }
  if (j.contains("locals") && !j["locals"].is_null()) {
    const auto& l = j["locals"];
    if (!l.is_array() || l.size() != 4) {
      throw InvalidArgument("gate json: locals must hold four 2x2 matrices");
    }
    g = g.dressed({unflatten2(l[0]), unflatten2(l[1]), unflatten2(l[2]), unflatten2(l[3])});
  }
  return g;
}

}  // namespace qrc
