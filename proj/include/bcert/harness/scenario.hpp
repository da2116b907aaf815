// Copyright 2026 The bcert Authors
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

// Scenario documents bind a model (spectrum, couplings, bath), a support
// split, a regularization, an initial state and certification inputs.
//
// {
//   "name": "qubit",
//   "energies": [0, 1],
//   "eigenbasis": [[...]],                 optional, identity by default
//   "couplings": [ [[0, 1], [1, 0]] ],     entries are numbers or [re, im]
//   "beta": 8.0,
//   "rate_model": "fermi" | "ohmic" | {"table": [[omega, gamma], ...]},
//   "lamb_shift": [[...]],                 optional, must commute with H
//   "support_levels": [0],
//   "epsilon": 0.01 | "match_gibbs",
//   "sigma": [[...]],                      optional; default Gibbs weights on the support levels
//   "initial_state": {"kind": "pure_coherent", "eps0": 0.01, "u": [...], "v": [...]}
//                  | {"kind": "explicit", "matrix": [[...]]}
//                  | {"kind": "random", "rank": 2, "seed": 5}
//                  | {"kind": "block_diagonal_random", "rank": 2, "seed": 5},
//   "theta": 0.5, "alpha": 0.2, "delta0": 0.2 (optional),
//   "time_grid": {"t_max": 5.0, "steps": 200},   optional
//   "seed": 1, "secular_tol": 1e-9, "allow_nonsecular": false
// }

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcert/activation.hpp"
#include "bcert/certification.hpp"
#include "bcert/davies.hpp"
#include "bcert/harness/json_io.hpp"

namespace bcert::harness {

struct InitialStateSpec {
  enum class Kind { pure_coherent, explicit_matrix, random, block_diagonal_random };
  Kind kind = Kind::pure_coherent;
  double eps0 = 0.1;
  std::optional<Vector> u;
  std::optional<Vector> v;
  Matrix matrix;
  Index rank = 1;
  std::optional<std::uint64_t> seed;
};

struct TimeGrid {
  double t_max = 0.0;
  int steps = 200;  // number of grid times, including t = 0
};

struct Scenario {
  std::string name = "scenario";
  RealVector energies;
  Matrix eigenbasis;
  std::vector<Matrix> couplings;
  double beta = 1.0;
  std::string rate_model = "fermi";
  std::vector<std::pair<double, double>> rate_table;
  std::optional<Matrix> lamb_shift;
  std::vector<Index> support_levels;
  std::optional<double> epsilon;  // empty means "match_gibbs"
  std::optional<Matrix> sigma;
  InitialStateSpec initial_state;
  double theta = 0.5;
  double alpha = 0.1;
  std::optional<double> delta0;
  std::optional<TimeGrid> time_grid;
  std::uint64_t seed = 1;
  double secular_tol = 1e-9;
  bool allow_nonsecular = false;

  Index dim() const { return energies.size(); }
};

Scenario parse_scenario(const Json& j);
Json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// Everything derived from a scenario before evolution.
struct ScenarioSetup {
  Scenario scenario;
  SupportSplit split;
  DaviesBuild davies;
  SecularTable secular;
  DensityMatrix sigma;
  RegularizedState reg;
  LocalConstants local;
  DensityMatrix rho0;
  ActivationReport act0;
  double d0 = 0.0;
  CertParams params;
  WindowResult window;
  std::vector<double> times;
};

ScenarioSetup prepare(const Scenario& s);

/// Uniform grid of `steps` points on [0, t_max].
std::vector<double> uniform_grid(double t_max, int steps);

/// Default horizon: min(T*, 10/k) when the dominance window exists, else 10/k (10 when k = 0).
double default_horizon(const RateParams& rates, const WindowResult& window);

}  // namespace bcert::harness
