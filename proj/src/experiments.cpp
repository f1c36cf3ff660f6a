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

#include "qrc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "qrc/datasets.hpp"
#include "qrc/ergodicity.hpp"
#include "qrc/krylov.hpp"
#include "qrc/reservoir.hpp"

#ifndef QRC_GIT_DESCRIBE
#define QRC_GIT_DESCRIBE "unknown"
#endif

namespace qrc {

namespace {

using Row = std::vector<std::string>;
using json = nlohmann::json;

const std::pair<ExperimentKind, const char*> kExperimentNames[] = {
    {ExperimentKind::NarmaSweep, "narma_sweep"},
    {ExperimentKind::MgSweep, "mg_sweep"},
    {ExperimentKind::KrylovSaturation, "krylov_saturation"},
    {ExperimentKind::CoeffDeviation, "coeff_deviation"},
    {ExperimentKind::OverlapSaturation, "overlap_saturation"},
    {ExperimentKind::MixingValidation, "mixing_validation"},
    {ExperimentKind::DesignGap, "design_gap"},
    {ExperimentKind::SolvablePerformance, "solvable_performance"},
};

const std::pair<GateFamily, const char*> kFamilyNames[] = {
    {GateFamily::HaarTwoQubit, "HaarTwoQubit"},
    {GateFamily::DualUnitary, "DualUnitary"},
    {GateFamily::Solvable, "Solvable"},
};

const std::pair<LocalsChoice, const char*> kLocalsNames[] = {
    {LocalsChoice::MaxMixing, "max_mixing"},
    {LocalsChoice::HaarFixed, "haar_fixed"},
    {LocalsChoice::HaarResample, "haar_resample"},
    {LocalsChoice::None, "none"},
};

std::string family_name(GateFamily f) {
  for (const auto& [k, n] : kFamilyNames) {
    if (k == f) return n;
  }
  return "?";
}

std::string locals_name(LocalsChoice c) {
  for (const auto& [k, n] : kLocalsNames) {
    if (k == c) return n;
  }
  return "?";
}

std::string num(Real v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

template <typename T>
std::string num(T v) requires std::is_integral_v<T> {
  return std::to_string(v);
}

int line_of(const std::string& text, std::size_t offset) {
  if (text.empty()) return 0;
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 0 : line_of(text, pos);
}

[[noreturn]] void fail(const std::string& text, const std::string& key, const std::string& msg) {
  const int line = line_of_key(text, key);
  throw ConfigError(key + ": " + msg, line);
}

template <typename T>
T get_as(const json& j, const std::string& key, const std::string& text) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    fail(text, key, std::string("wrong type (") + e.what() + ")");
  }
}

template <typename T>
std::vector<T> list_of(const json& j, const std::string& key, const std::string& text) {
  if (j.is_array()) return get_as<std::vector<T>>(j, key, text);
  return {get_as<T>(j, key, text)};
}

std::vector<Real> grid_of(const json& j, const std::string& key, const std::string& text) {
  if (j.is_object()) {
    for (const char* k : {"start", "stop", "step"}) {
      if (!j.contains(k)) fail(text, key, std::string("range needs '") + k + "'");
    }
    const Real start = get_as<Real>(j["start"], key, text);
    const Real stop = get_as<Real>(j["stop"], key, text);
    const Real step = get_as<Real>(j["step"], key, text);
    if (!(step > 0.0) || stop < start) fail(text, key, "range must have step > 0 and stop >= start");
    std::vector<Real> out;
    for (int i = 0;; ++i) {
      const Real v = start + i * step;
      if (v > stop + 1e-12) break;
      out.push_back(std::min(v, stop));
    }
    return out;
  }
  return list_of<Real>(j, key, text);
}

// ---------------------------------------------------------------------------
// Grid points and circuits

struct GatePoint {
  std::string label;
  Real e_p_target = std::numeric_limits<Real>::quiet_NaN();
  std::optional<Gate> gate;  // solvable family
};

std::vector<GatePoint> gate_points(const ExperimentConfig& cfg) {
  std::vector<GatePoint> pts;
  switch (cfg.gate_family) {
    case GateFamily::HaarTwoQubit:
      pts.push_back({"haar", std::numeric_limits<Real>::quiet_NaN(), std::nullopt});
      break;
    case GateFamily::DualUnitary:
      for (std::size_t i = 0; i < cfg.e_p_grid.size(); ++i) {
        pts.push_back({"du" + std::to_string(i), cfg.e_p_grid[i], std::nullopt});
      }
      break;
    case GateFamily::Solvable: {
      Rng rng(cfg.gate_seed);
      for (int i = 0; i < cfg.solvable_count; ++i) {
        Gate g = sample_solvable_accepted(rng);
        pts.push_back({"solvable" + std::to_string(i), gate_invariants(g).e_p, std::move(g)});
      }
      break;
    }
  }
  return pts;
}

BrickwallSpec make_circuit(const ExperimentConfig& cfg, const GatePoint& pt, Seed seed) {
  BrickwallSpec spec;
  spec.n_qubits = cfg.n_qubits;
  if (cfg.gate_family == GateFamily::HaarTwoQubit) return BrickwallSpec::haar_bricks(cfg.n_qubits, seed);

  const Gate base = pt.gate ? *pt.gate
                            : cartan_gate({kPi / 4, kPi / 4, dual_unitary_gamma(pt.e_p_target)});
  Rng rng(seed);
  switch (cfg.locals) {
    case LocalsChoice::MaxMixing:
      spec.brick = max_mixing_gate(pt.e_p_target, cfg.ensemble_size, seed).gate;
      break;
    case LocalsChoice::HaarFixed:
      spec.brick = base.dressed(sample_haar_dressing(rng));
      break;
    case LocalsChoice::HaarResample:
      spec.brick = base;
      spec.locals = LocalsPolicy::resample(LocalsDistribution::Haar);
      break;
    case LocalsChoice::None:
      spec.brick = base;
      break;
  }
  return spec;
}

GateInvariants circuit_invariants(const BrickwallSpec& spec) {
  if (spec.bond_bricks.empty()) return gate_invariants(spec.brick);
  GateInvariants sum{};
  for (const auto& b : spec.bond_bricks) {
    const auto inv = gate_invariants(b);
    sum.e_p += inv.e_p;
    sum.g_t += inv.g_t;
  }
  const auto n = static_cast<Real>(spec.bond_bricks.size());
  sum.e_p /= n;
  sum.g_t /= n;
  return sum;
}

// ---------------------------------------------------------------------------
// Task plumbing

struct Task {
  Row key;                               // leading cells, reused for error rows
  std::function<std::vector<Row>()> run;
};

struct Plan {
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<Task> tasks;
};

std::vector<std::vector<Row>> execute(const std::vector<Task>& tasks, std::size_t width, int jobs) {
  std::vector<std::vector<Row>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        Row row = tasks[i].key;
        row.resize(width - 1);
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        row.push_back("error: " + msg);
        results[i] = {row};
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

Row with_status(Row key, std::initializer_list<std::string> values) {
  key.insert(key.end(), values.begin(), values.end());
  key.push_back("ok");
  return key;
}

Seed effective(Seed base, Seed s) { return base + s; }

Plan plan_narma(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"family", "point", "e_p", "g_t", "V", "order", "seed", "train_mse", "eval_mse", "status"};
  p.units = {"", "", "", "", "steps", "", "", "target^2", "target^2", ""};
  auto pts = std::make_shared<std::vector<GatePoint>>(gate_points(cfg));
  auto series = std::make_shared<std::map<int, TimeSeries>>();
  for (int order : cfg.narma_orders) {
    (*series)[order] = narma_series(order, cfg.narma_length, cfg.narma_washout);
  }
  for (std::size_t pi = 0; pi < pts->size(); ++pi) {
    for (int v : cfg.multiplexing) {
      for (int order : cfg.narma_orders) {
        for (Seed s : cfg.seeds) {
          const Seed seed = effective(base, s);
          const GatePoint& pt = (*pts)[pi];
          Row key{family_name(cfg.gate_family), pt.label, num(pt.e_p_target), "", num(v), num(order), num(seed)};
          p.tasks.push_back({key, [=, &cfg] {
            ReservoirConfig rc;
            rc.circuit = make_circuit(cfg, (*pts)[pi], seed);
            rc.multiplexing = v;
            const auto inv = circuit_invariants(rc.circuit);
            const TaskScore sc = score_task(series->at(order), rc, seed);
            Row k = key;
            k[2] = num(inv.e_p);
            k[3] = num(inv.g_t);
            return std::vector<Row>{with_status(k, {num(sc.train_mse), num(sc.eval_mse)})};
          }});
        }
      }
    }
  }
  return p;
}

Plan plan_mg(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"family", "point", "e_p", "g_t", "V", "tau", "seed", "train_mse", "eval_mse", "status"};
  p.units = {"", "", "", "", "steps", "time", "", "normalised^2", "normalised^2", ""};
  auto pts = std::make_shared<std::vector<GatePoint>>(gate_points(cfg));
  for (std::size_t pi = 0; pi < pts->size(); ++pi) {
    for (int v : cfg.multiplexing) {
      for (Seed s : cfg.seeds) {
        const Seed seed = effective(base, s);
        const GatePoint& pt = (*pts)[pi];
        Row key{family_name(cfg.gate_family), pt.label, num(pt.e_p_target), "", num(v), num(cfg.tau), num(seed)};
        p.tasks.push_back({key, [=, &cfg] {
          ReservoirConfig rc;
          rc.circuit = make_circuit(cfg, (*pts)[pi], seed);
          rc.multiplexing = v;
          const auto inv = circuit_invariants(rc.circuit);
          const TaskScore sc = score_task(mackey_glass(cfg.mg_length, cfg.tau, seed), rc, seed);
          Row k = key;
          k[2] = num(inv.e_p);
          k[3] = num(inv.g_t);
          return std::vector<Row>{with_status(k, {num(sc.train_mse), num(sc.eval_mse)})};
        }});
      }
    }
  }
  return p;
}

KrylovRecord krylov_run(const ExperimentConfig& cfg, const BrickwallSpec& spec, Seed seed,
                        MatrixXc& u_out) {
  Rng rng(seed);
  u_out = build_layer_unitary(spec, rng);
  ArnoldiOptions opt;
  opt.max_steps = cfg.max_steps;
  return arnoldi_iterate(u_out, site_operator(3, 0, cfg.n_qubits), opt);
}

Plan plan_krylov_saturation(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"family", "point", "e_p", "g_t", "seed", "steps", "terminated_at", "saturation",
               "onset", "max_correction", "observability", "status"};
  p.units = {"", "", "", "", "", "steps", "step", "basis index", "step", "", "", ""};
  auto pts = std::make_shared<std::vector<GatePoint>>(gate_points(cfg));
  for (std::size_t pi = 0; pi < pts->size(); ++pi) {
    for (Seed s : cfg.seeds) {
      const Seed seed = effective(base, s);
      const GatePoint& pt = (*pts)[pi];
      Row key{family_name(cfg.gate_family), pt.label, num(pt.e_p_target), "", num(seed)};
      p.tasks.push_back({key, [=, &cfg] {
        const BrickwallSpec spec = make_circuit(cfg, (*pts)[pi], seed);
        const auto inv = circuit_invariants(spec);
        MatrixXc u;
        const KrylovRecord rec = krylov_run(cfg, spec, seed, u);
        const ComplexityCurve cc = complexity_curve(rec);
        const auto onset = deviation_onset(rec);
        const Real max_corr = *std::max_element(rec.correction.begin(), rec.correction.end());
        const Real obs = krylov_observability(
            evolve_observables(u, {site_operator(3, 0, cfg.n_qubits)}, cfg.v_max), cfg.v_max);
        Row k = key;
        k[2] = num(inv.e_p);
        k[3] = num(inv.g_t);
        return std::vector<Row>{with_status(
            k, {num(rec.steps()), rec.terminated_at ? num(*rec.terminated_at) : "",
                num(cc.saturation), onset ? num(*onset) : "", num(max_corr), num(obs)})};
      }});
    }
  }
  return p;
}

Plan plan_coeff_deviation(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"family", "point", "e_p", "seed", "t", "b_t", "a_abs", "bn_abs", "c_abs", "K_C", "status"};
  p.units = {"", "", "", "", "step", "", "", "", "", "basis index", ""};
  auto pts = std::make_shared<std::vector<GatePoint>>(gate_points(cfg));
  for (std::size_t pi = 0; pi < pts->size(); ++pi) {
    for (Seed s : cfg.seeds) {
      const Seed seed = effective(base, s);
      const GatePoint& pt = (*pts)[pi];
      Row key{family_name(cfg.gate_family), pt.label, num(pt.e_p_target), num(seed)};
      p.tasks.push_back({key, [=, &cfg] {
        const BrickwallSpec spec = make_circuit(cfg, (*pts)[pi], seed);
        MatrixXc u;
        const KrylovRecord rec = krylov_run(cfg, spec, seed, u);
        const SuperopCoeffs co = superop_coeffs(rec, u);
        std::vector<Row> rows;
        for (std::size_t t = 0; t < rec.arnoldi_b.size(); ++t) {
          const bool have = t < co.a.size();
          Row k = key;
          k.push_back(num(t));
          rows.push_back(with_status(
              k, {t == 0 ? "" : num(rec.arnoldi_b[t]), have ? num(std::abs(co.a[t])) : "",
                  have && t > 0 ? num(std::abs(co.b[t])) : "", have ? num(std::abs(co.c[t])) : "",
                  num(rec.complexity[t])}));
        }
        return rows;
      }});
    }
  }
  return p;
}

Plan plan_overlap(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"family", "point", "e_p", "n_qubits", "seed", "v", "overlap", "haar_value", "ratio", "status"};
  p.units = {"", "", "", "", "", "steps", "", "", "", ""};
  auto pts = std::make_shared<std::vector<GatePoint>>(gate_points(cfg));
  for (std::size_t pi = 0; pi < pts->size(); ++pi) {
    for (Seed s : cfg.seeds) {
      const Seed seed = effective(base, s);
      const GatePoint& pt = (*pts)[pi];
      Row key{family_name(cfg.gate_family), pt.label, num(pt.e_p_target), num(cfg.n_qubits), num(seed)};
      p.tasks.push_back({key, [=, &cfg] {
        ReservoirConfig rc;
        rc.circuit = make_circuit(cfg, (*pts)[pi], seed);
        const auto ov = overlap_statistics(rc, cfg.samples, cfg.v_max, seed);
        const Real haar = 1.0 / static_cast<Real>(Eigen::Index{1} << cfg.n_qubits);
        std::vector<Row> rows;
        for (std::size_t v = 0; v < ov.size(); ++v) {
          Row k = key;
          k.push_back(num(v + 1));
          rows.push_back(with_status(k, {num(ov[v]), num(haar), num(ov[v] / haar)}));
        }
        return rows;
      }});
    }
  }
  return p;
}

Plan plan_mixing(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"e_p", "seed", "ensemble_size", "mu1_sampled", "mu1_formula", "rel_err",
               "mean_lambda1_abs", "norm_sq", "hs_norm_sq", "norm_target", "status"};
  p.units = {"", "", "", "1/step", "1/step", "", "", "", "", "", ""};
  for (Real e : cfg.e_p_grid) {
    for (Seed s : cfg.seeds) {
      const Seed seed = effective(base, s);
      Row key{num(e), num(seed), num(cfg.ensemble_size)};
      p.tasks.push_back({key, [=, &cfg] {
        const MaxMixingResult r = max_mixing_gate(e, cfg.ensemble_size, seed);
        const MixingReport rep = m_plus(r.gate);
        const Real target = 1.0 + 3.0 * (1.0 - gate_invariants(r.gate).e_p);
        return std::vector<Row>{with_status(
            key, {num(r.mu1_max), num(r.mu1_formula),
                  num(std::abs(r.mu1_max - r.mu1_formula) / r.mu1_formula),
                  num(r.mean_lambda1_abs), num(rep.norm_sq), num(rep.hs_norm_sq), num(target)})};
      }});
    }
  }
  return p;
}

Plan plan_design_gap(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"family", "point", "e_p", "g_t", "seed", "lambda1", "lambda2", "lambda3",
               "lambda3_haar", "status"};
  p.units = {"", "", "", "", "", "", "", "", "", ""};
  const Real haar = design_transfer(cfg.n_qubits, 0.6, 0.5).lambda3_abs;
  auto row_for = [haar, &cfg](Row key, Real e, Real g) {
    const DesignGapReport rep = design_transfer(cfg.n_qubits, e, g);
    key[2] = num(e);
    key[3] = num(g);
    return std::vector<Row>{with_status(
        key, {num(std::abs(rep.transfer_eigs(0))), num(std::abs(rep.transfer_eigs(1))),
              num(rep.lambda3_abs), num(haar)})};
  };
  const Seed gate_seed = effective(base, cfg.gate_seed);
  p.tasks.push_back({{"HaarTwoQubit", "haar", "0.6", "0.5", num(gate_seed)},
                     [=] { return row_for({"HaarTwoQubit", "haar", "", "", num(gate_seed)}, 0.6, 0.5); }});
  if (cfg.gate_family == GateFamily::HaarTwoQubit) return p;
  ExperimentConfig shifted = cfg;
  shifted.gate_seed = gate_seed;
  const auto pts = gate_points(shifted);
  for (const auto& pt : pts) {
    const Gate g = pt.gate ? *pt.gate
                           : cartan_gate({kPi / 4, kPi / 4, dual_unitary_gamma(pt.e_p_target)});
    const auto inv = gate_invariants(g);
    Row key{family_name(cfg.gate_family), pt.label, "", "", num(gate_seed)};
    p.tasks.push_back({key, [=] { return row_for(key, inv.e_p, inv.g_t); }});
  }
  return p;
}

Plan plan_solvable(const ExperimentConfig& cfg, Seed base) {
  Plan p;
  p.columns = {"point", "e_p", "g_t", "lambda3", "V", "tau", "seed", "train_mse", "eval_mse", "status"};
  p.units = {"", "", "", "", "steps", "time", "", "normalised^2", "normalised^2", ""};
  ExperimentConfig sol = cfg;
  sol.gate_family = GateFamily::Solvable;
  auto pts = std::make_shared<std::vector<GatePoint>>(gate_points(sol));
  for (std::size_t pi = 0; pi < pts->size(); ++pi) {
    const auto inv = gate_invariants(*(*pts)[pi].gate);
    const Real lam = design_transfer(cfg.n_qubits, inv.e_p, inv.g_t).lambda3_abs;
    for (int v : cfg.multiplexing) {
      for (Seed s : cfg.seeds) {
        const Seed seed = effective(base, s);
        Row key{(*pts)[pi].label, num(inv.e_p), num(inv.g_t), num(lam), num(v), num(cfg.tau), num(seed)};
        p.tasks.push_back({key, [=] {
          ReservoirConfig rc;
          rc.circuit = make_circuit(sol, (*pts)[pi], seed);
          rc.multiplexing = v;
          const TaskScore sc = score_task(mackey_glass(sol.mg_length, sol.tau, seed), rc, seed);
          return std::vector<Row>{with_status(key, {num(sc.train_mse), num(sc.eval_mse)})};
        }});
      }
    }
  }
  return p;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, n] : kExperimentNames) {
    if (k == kind) return n;
  }
  return "?";
}

std::optional<ExperimentKind> experiment_from_string(const std::string& name) {
  for (const auto& [k, n] : kExperimentNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [k, n] : kExperimentNames) out.emplace_back(n);
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(e.what(), line);
  }
  return from_json(j, text);
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::string& text) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object", line_of(text, 0));
  ExperimentConfig c;
  static const std::set<std::string> known = {
      "experiment", "n_qubits", "gate_family", "locals", "ensemble_size", "multiplexing",
      "narma_orders", "seeds", "narma_length", "narma_washout", "mg_length", "tau",
      "max_steps", "samples", "v_max", "output_path"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(text, key, "unknown key");
  }
  if (!j.contains("experiment")) throw ConfigError("missing key 'experiment'", 0);
  {
    const auto name = get_as<std::string>(j["experiment"], "experiment", text);
    const auto kind = experiment_from_string(name);
    if (!kind) fail(text, "experiment", "unknown experiment '" + name + "'");
    c.experiment = *kind;
  }
  if (j.contains("n_qubits")) c.n_qubits = get_as<int>(j["n_qubits"], "n_qubits", text);
  if (j.contains("gate_family")) {
    const json& g = j["gate_family"];
    const std::string type = g.is_string() ? g.get<std::string>()
                             : g.is_object() && g.contains("type")
                                 ? get_as<std::string>(g["type"], "gate_family", text)
                                 : std::string();
    bool matched = false;
    for (const auto& [k, n] : kFamilyNames) {
      if (type == n) {
        c.gate_family = k;
        matched = true;
      }
    }
    if (!matched) fail(text, "gate_family", "type must be HaarTwoQubit, DualUnitary or Solvable");
    if (g.is_object()) {
      if (g.contains("e_p")) c.e_p_grid = grid_of(g["e_p"], "e_p", text);
      if (g.contains("count")) c.solvable_count = get_as<int>(g["count"], "count", text);
      if (g.contains("seed")) c.gate_seed = get_as<Seed>(g["seed"], "seed", text);
    }
  }
  if (c.gate_family == GateFamily::Solvable || c.experiment == ExperimentKind::SolvablePerformance) {
    c.locals = LocalsChoice::HaarFixed;
  } else if (c.experiment == ExperimentKind::OverlapSaturation) {
    c.locals = LocalsChoice::HaarResample;
  }
  if (j.contains("locals")) {
    const auto name = get_as<std::string>(j["locals"], "locals", text);
    bool matched = false;
    for (const auto& [k, n] : kLocalsNames) {
      if (name == n) {
        c.locals = k;
        matched = true;
      }
    }
    if (!matched) fail(text, "locals", "must be max_mixing, haar_fixed, haar_resample or none");
  }
  if (j.contains("ensemble_size")) c.ensemble_size = get_as<int>(j["ensemble_size"], "ensemble_size", text);
  if (j.contains("multiplexing")) c.multiplexing = list_of<int>(j["multiplexing"], "multiplexing", text);
  if (j.contains("narma_orders")) c.narma_orders = list_of<int>(j["narma_orders"], "narma_orders", text);
  if (j.contains("seeds")) c.seeds = list_of<Seed>(j["seeds"], "seeds", text);
  if (j.contains("narma_length")) c.narma_length = get_as<int>(j["narma_length"], "narma_length", text);
  if (j.contains("narma_washout")) c.narma_washout = get_as<int>(j["narma_washout"], "narma_washout", text);
  if (j.contains("mg_length")) c.mg_length = get_as<int>(j["mg_length"], "mg_length", text);
  if (j.contains("tau")) c.tau = get_as<Real>(j["tau"], "tau", text);
  if (j.contains("max_steps")) c.max_steps = get_as<int>(j["max_steps"], "max_steps", text);
  if (j.contains("samples")) c.samples = get_as<int>(j["samples"], "samples", text);
  if (j.contains("v_max")) c.v_max = get_as<int>(j["v_max"], "v_max", text);
  if (j.contains("output_path")) c.output_path = get_as<std::string>(j["output_path"], "output_path", text);
  c.validate(text);
  return c;
}

json ExperimentConfig::to_json() const {
  json g = {{"type", family_name(gate_family)}};
  if (gate_family == GateFamily::DualUnitary) g["e_p"] = e_p_grid;
  if (gate_family == GateFamily::Solvable) {
    g["count"] = solvable_count;
    g["seed"] = gate_seed;
  }
  return {{"experiment", qrc::to_string(experiment)},
          {"n_qubits", n_qubits},
          {"gate_family", g},
          {"locals", locals_name(locals)},
          {"ensemble_size", ensemble_size},
          {"multiplexing", multiplexing},
          {"narma_orders", narma_orders},
          {"seeds", seeds},
          {"narma_length", narma_length},
          {"narma_washout", narma_washout},
          {"mg_length", mg_length},
          {"tau", tau},
          {"max_steps", max_steps},
          {"samples", samples},
          {"v_max", v_max},
          {"output_path", output_path}};
}

void ExperimentConfig::validate(const std::string& text) const {
  if (n_qubits < 2 || n_qubits % 2 != 0 || n_qubits > kMaxDenseQubits) {
    fail(text, "n_qubits", "must be even and in [2, " + std::to_string(kMaxDenseQubits) + "]");
  }
  if (seeds.empty()) fail(text, "seeds", "must be nonempty");
  if (std::set<Seed>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    fail(text, "seeds", "must be distinct");
  }
  if (multiplexing.empty()) fail(text, "multiplexing", "must be nonempty");
  for (int v : multiplexing) {
    if (v < 1) fail(text, "multiplexing", "entries must be >= 1");
  }
  if (experiment == ExperimentKind::NarmaSweep) {
    if (narma_orders.empty()) fail(text, "narma_orders", "must be nonempty");
    for (int o : narma_orders) {
      if (o < 1) fail(text, "narma_orders", "entries must be >= 1");
    }
    if (narma_washout < 0 || narma_length <= narma_washout + 10) {
      fail(text, "narma_length", "must exceed narma_washout by more than 10");
    }
  }
  if (gate_family == GateFamily::DualUnitary || experiment == ExperimentKind::MixingValidation) {
    if (e_p_grid.empty()) fail(text, "e_p", "grid must be nonempty");
    for (Real e : e_p_grid) {
      if (!(e > 0.0 && e <= kMaxEntanglingPower + 1e-12)) fail(text, "e_p", "entries must lie in (0, 2/3]");
    }
  }
  if ((gate_family == GateFamily::Solvable || experiment == ExperimentKind::SolvablePerformance) &&
      solvable_count < 1) {
    fail(text, "count", "must be >= 1");
  }
  if (locals == LocalsChoice::MaxMixing && gate_family == GateFamily::Solvable &&
      experiment != ExperimentKind::DesignGap && experiment != ExperimentKind::MixingValidation) {
    fail(text, "locals", "max_mixing applies to the DualUnitary family only");
  }
  if (experiment == ExperimentKind::SolvablePerformance && locals == LocalsChoice::MaxMixing) {
    fail(text, "locals", "solvable_performance needs haar_fixed, haar_resample or none");
  }
  const bool krylov = experiment == ExperimentKind::KrylovSaturation ||
                      experiment == ExperimentKind::CoeffDeviation;
  if (krylov && locals == LocalsChoice::HaarResample) {
    fail(text, "locals", "Krylov experiments need a time-independent circuit");
  }
  if (ensemble_size < 1) fail(text, "ensemble_size", "must be >= 1");
  if (mg_length < 10) fail(text, "mg_length", "must be >= 10");
  if (!(tau > 0.0)) fail(text, "tau", "must be positive");
  if (samples < 2) fail(text, "samples", "must be >= 2");
  if (v_max < 1) fail(text, "v_max", "must be >= 1");
}

ResultTable run_experiment(const ExperimentConfig& cfg, Seed seed_base, int jobs) {
  cfg.validate();
  Plan plan;
  switch (cfg.experiment) {
    case ExperimentKind::NarmaSweep: plan = plan_narma(cfg, seed_base); break;
    case ExperimentKind::MgSweep: plan = plan_mg(cfg, seed_base); break;
    case ExperimentKind::KrylovSaturation: plan = plan_krylov_saturation(cfg, seed_base); break;
    case ExperimentKind::CoeffDeviation: plan = plan_coeff_deviation(cfg, seed_base); break;
    case ExperimentKind::OverlapSaturation: plan = plan_overlap(cfg, seed_base); break;
    case ExperimentKind::MixingValidation: plan = plan_mixing(cfg, seed_base); break;
    case ExperimentKind::DesignGap: plan = plan_design_gap(cfg, seed_base); break;
    case ExperimentKind::SolvablePerformance: plan = plan_solvable(cfg, seed_base); break;
  }
  ResultTable table;
  table.columns = plan.columns;
  table.units = plan.units;
  for (auto& rows : execute(plan.tasks, plan.columns.size(), jobs)) {
    for (auto& r : rows) table.rows.push_back(std::move(r));
  }
  table.meta = {{"experiment", qrc::to_string(cfg.experiment)},
                {"n_qubits", std::to_string(cfg.n_qubits)},
                {"gate_family", family_name(cfg.gate_family)},
                {"locals", locals_name(cfg.locals)},
                {"seed_base", std::to_string(seed_base)}};
  if (cfg.gate_family == GateFamily::Solvable || cfg.experiment == ExperimentKind::SolvablePerformance ||
      cfg.experiment == ExperimentKind::DesignGap) {
    table.meta["gate_seed"] = std::to_string(cfg.gate_seed);
  }
  return table;
}

void write_table_csv(std::ostream& os, const ResultTable& table) {
  os << '#';
  for (const auto& [k, v] : table.meta) os << ' ' << k << '=' << v;
  os << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

json manifest_json(const ExperimentConfig& cfg, const ResultTable& table, Seed seed_base,
                   double wall_seconds) {
  json cols = json::array();
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    cols.push_back({{"name", table.columns[i]}, {"unit", i < table.units.size() ? table.units[i] : ""}});
  }
  std::size_t errors = 0;
  for (const auto& r : table.rows) {
    if (!r.empty() && r.back().rfind("error", 0) == 0) ++errors;
  }
  return {{"experiment", qrc::to_string(cfg.experiment)},
          {"config", cfg.to_json()},
          {"seed_base", seed_base},
          {"columns", cols},
          {"rows", table.rows.size()},
          {"error_rows", errors},
          {"build", build_describe()},
          {"wall_clock_seconds", wall_seconds}};
}

std::string build_describe() { return QRC_GIT_DESCRIBE; }

}  // namespace qrc
