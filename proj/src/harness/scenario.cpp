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

#include "bcert/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bcert::harness {

namespace {

double get_number(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ValidationError(ctx + ": missing or non-numeric \"" + key + "\"");
  }
  return j[key].get<double>();
}

const char* kind_name(InitialStateSpec::Kind k) {
  switch (k) {
    case InitialStateSpec::Kind::pure_coherent:
      return "pure_coherent";
    case InitialStateSpec::Kind::explicit_matrix:
      return "explicit";
    case InitialStateSpec::Kind::random:
      return "random";
    case InitialStateSpec::Kind::block_diagonal_random:
      return "block_diagonal_random";
  }
  return "unknown";
}

InitialStateSpec parse_initial_state(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("initial_state: expected an object with a \"kind\" string");
  }
  InitialStateSpec spec;
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "pure_coherent") {
    spec.kind = InitialStateSpec::Kind::pure_coherent;
    spec.eps0 = get_number(j, "eps0", "initial_state");
    if (j.contains("u")) spec.u = vector_from_json(j["u"], "initial_state.u");
    if (j.contains("v")) spec.v = vector_from_json(j["v"], "initial_state.v");
  } else if (kind == "explicit") {
    spec.kind = InitialStateSpec::Kind::explicit_matrix;
    if (!j.contains("matrix")) throw ValidationError("initial_state: explicit state needs \"matrix\"");
    spec.matrix = matrix_from_json(j["matrix"], "initial_state.matrix");
  } else if (kind == "random" || kind == "block_diagonal_random") {
    spec.kind = kind == "random" ? InitialStateSpec::Kind::random
                                 : InitialStateSpec::Kind::block_diagonal_random;
    spec.rank = static_cast<Index>(get_number(j, "rank", "initial_state"));
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  } else {
    throw ValidationError("initial_state: unknown kind \"" + kind + "\"");
  }
  return spec;
}

DensityMatrix build_initial_state(const Scenario& s, const SupportSplit& split) {
  const InitialStateSpec& spec = s.initial_state;
  const Index d = s.dim();
  switch (spec.kind) {
    case InitialStateSpec::Kind::pure_coherent: {
      if (spec.u || spec.v) {
        const Vector u = spec.u.value_or(Vector(split.basis_p.col(0)));
        const Vector v = spec.v.value_or(Vector(split.basis_q.col(0)));
        return pure_coherent_state(spec.eps0, u.normalized(), v.normalized(), split);
      }
      return pure_coherent_state(spec.eps0, split);
    }
    case InitialStateSpec::Kind::explicit_matrix:
      if (spec.matrix.rows() != d || spec.matrix.cols() != d) {
        throw ValidationError("initial_state: matrix dimension does not match the spectrum");
      }
      return DensityMatrix(spec.matrix);
    case InitialStateSpec::Kind::random:
    case InitialStateSpec::Kind::block_diagonal_random: {
      if (spec.rank < 1 || spec.rank > d) throw ValidationError("initial_state: rank out of range");
      const DensityMatrix r = random_density(d, spec.rank, spec.seed.value_or(s.seed));
      if (spec.kind == InitialStateSpec::Kind::random) return r;
      return pinch(r, split.pinching());
    }
  }
  throw ValidationError("initial_state: unsupported kind");
}

}  // namespace

std::vector<double> uniform_grid(double t_max, int steps) {
  if (steps < 2) throw ValidationError("time grid: need at least two grid times");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("time grid: t_max must be positive");
  std::vector<double> t(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (steps - 1);
  return t;
}

double default_horizon(const RateParams& rates, const WindowResult& window) {
  const double base = rates.k > 0.0 ? 10.0 / rates.k : 10.0;
  if (window.t_star && std::isfinite(*window.t_star) && *window.t_star > 0.0) {
    return std::min(*window.t_star, base);
  }
  return base;
}

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw ValidationError("scenario: expected a JSON object");
  Scenario s;
  if (j.contains("name")) s.name = j["name"].get<std::string>();
  if (!j.contains("energies")) throw ValidationError("scenario: missing \"energies\"");
  s.energies = real_vector_from_json(j["energies"], "energies");
  const Index d = s.dim();
  if (j.contains("dim") && j["dim"].get<Index>() != d) {
    throw ValidationError("scenario: \"dim\" disagrees with the number of energies");
  }
  if (j.contains("eigenbasis")) s.eigenbasis = matrix_from_json(j["eigenbasis"], "eigenbasis");
  if (j.contains("couplings")) {
    if (!j["couplings"].is_array()) throw ValidationError("scenario: \"couplings\" must be an array");
    for (std::size_t i = 0; i < j["couplings"].size(); ++i) {
      Matrix c = matrix_from_json(j["couplings"][i], "couplings[" + std::to_string(i) + "]");
      if (c.rows() != d || c.cols() != d) {
        throw ValidationError("scenario: coupling " + std::to_string(i) + " has the wrong shape");
      }
      s.couplings.push_back(std::move(c));
    }
  }
  s.beta = get_number(j, "beta", "scenario");
  if (j.contains("rate_model")) {
    const Json& r = j["rate_model"];
    if (r.is_string()) {
      s.rate_model = r.get<std::string>();
      if (s.rate_model != "fermi" && s.rate_model != "ohmic") {
        throw ValidationError("scenario: unknown rate model \"" + s.rate_model + "\"");
      }
    } else if (r.is_object() && r.contains("table")) {
      s.rate_model = "tabulated";
      for (const Json& node : r["table"]) {
        if (!node.is_array() || node.size() != 2) {
          throw ValidationError("scenario: rate table nodes must be [omega, gamma] pairs");
        }
        s.rate_table.emplace_back(node[0].get<double>(), node[1].get<double>());
      }
    } else {
      throw ValidationError("scenario: \"rate_model\" must be a name or {\"table\": [...]}");
    }
  }
  if (j.contains("lamb_shift")) s.lamb_shift = matrix_from_json(j["lamb_shift"], "lamb_shift");
  if (!j.contains("support_levels") || !j["support_levels"].is_array()) {
    throw ValidationError("scenario: missing \"support_levels\"");
  }
  std::set<Index> seen;
  for (const Json& l : j["support_levels"]) {
    const Index li = l.get<Index>();
    if (li < 0 || li >= d) throw ValidationError("scenario: support level out of range");
    if (!seen.insert(li).second) throw ValidationError("scenario: repeated support level");
    s.support_levels.push_back(li);
  }
  if (s.support_levels.empty() || static_cast<Index>(s.support_levels.size()) >= d) {
    throw ValidationError("scenario: support_levels must be a nonempty proper subset of the levels");
  }
  if (j.contains("epsilon")) {
    const Json& e = j["epsilon"];
    if (e.is_string()) {
      if (e.get<std::string>() != "match_gibbs") {
        throw ValidationError("scenario: epsilon must be a number or \"match_gibbs\"");
      }
    } else {
      s.epsilon = e.get<double>();
    }
  }
  if (j.contains("sigma")) s.sigma = matrix_from_json(j["sigma"], "sigma");
  if (!j.contains("initial_state")) throw ValidationError("scenario: missing \"initial_state\"");
  s.initial_state = parse_initial_state(j["initial_state"]);
  if (j.contains("theta")) s.theta = j["theta"].get<double>();
  if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
  if (j.contains("delta0")) s.delta0 = j["delta0"].get<double>();
  if (j.contains("time_grid")) {
    TimeGrid g;
    g.t_max = get_number(j["time_grid"], "t_max", "time_grid");
    if (j["time_grid"].contains("steps")) g.steps = j["time_grid"]["steps"].get<int>();
    s.time_grid = g;
  }
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("secular_tol")) s.secular_tol = j["secular_tol"].get<double>();
  if (j.contains("allow_nonsecular")) s.allow_nonsecular = j["allow_nonsecular"].get<bool>();
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["dim"] = s.dim();
  j["energies"] = real_vector_to_json(s.energies);
  if (s.eigenbasis.size() != 0) j["eigenbasis"] = matrix_to_json(s.eigenbasis);
  j["couplings"] = Json::array();
  for (const Matrix& c : s.couplings) j["couplings"].push_back(matrix_to_json(c));
  j["beta"] = s.beta;
  if (s.rate_model == "tabulated") {
    Json table = Json::array();
    for (const auto& [w, g] : s.rate_table) table.push_back(Json::array({w, g}));
    j["rate_model"] = Json{{"table", table}};
  } else {
    j["rate_model"] = s.rate_model;
  }
  if (s.lamb_shift) j["lamb_shift"] = matrix_to_json(*s.lamb_shift);
  j["support_levels"] = s.support_levels;
  if (s.epsilon) {
    j["epsilon"] = *s.epsilon;
  } else {
    j["epsilon"] = "match_gibbs";
  }
  if (s.sigma) j["sigma"] = matrix_to_json(*s.sigma);
  Json init;
  init["kind"] = kind_name(s.initial_state.kind);
  switch (s.initial_state.kind) {
    case InitialStateSpec::Kind::pure_coherent:
      init["eps0"] = s.initial_state.eps0;
      if (s.initial_state.u) init["u"] = vector_to_json(*s.initial_state.u);
      if (s.initial_state.v) init["v"] = vector_to_json(*s.initial_state.v);
      break;
    case InitialStateSpec::Kind::explicit_matrix:
      init["matrix"] = matrix_to_json(s.initial_state.matrix);
      break;
    case InitialStateSpec::Kind::random:
    case InitialStateSpec::Kind::block_diagonal_random:
      init["rank"] = s.initial_state.rank;
      if (s.initial_state.seed) init["seed"] = *s.initial_state.seed;
      break;
  }
  j["initial_state"] = init;
  j["theta"] = s.theta;
  j["alpha"] = s.alpha;
  if (s.delta0) j["delta0"] = *s.delta0;
  if (s.time_grid) j["time_grid"] = Json{{"t_max", s.time_grid->t_max}, {"steps", s.time_grid->steps}};
  j["seed"] = s.seed;
  j["secular_tol"] = s.secular_tol;
  j["allow_nonsecular"] = s.allow_nonsecular;
  return j;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_json_file(path)); }

ScenarioSetup prepare(const Scenario& s) {
  const Index d = s.dim();
  ScenarioSetup out;
  out.scenario = s;

  DaviesInput in;
  in.energies = s.energies;
  in.eigenbasis = s.eigenbasis;
  for (const Matrix& c : s.couplings) in.couplings.emplace_back(c);
  in.beta = s.beta;
  if (s.rate_model == "fermi") {
    in.rate = RateModel::fermi(s.beta);
  } else if (s.rate_model == "ohmic") {
    in.rate = RateModel::ohmic(s.beta);
  } else {
    in.rate = RateModel::tabulated(s.rate_table);
  }
  if (s.lamb_shift) in.lamb_shift = HermitianMatrix(*s.lamb_shift);

  const Matrix basis = s.eigenbasis.size() == 0 ? Matrix(Matrix::Identity(d, d)) : s.eigenbasis;
  out.split = split_from_levels(basis, s.support_levels);
  out.davies = build_davies(in, out.split);
  out.secular = verify_secular(out.davies.model, out.split, s.secular_tol);

  if (s.sigma) {
    out.sigma = DensityMatrix(*s.sigma);
    const BlockDecomposition b = block_decompose(out.sigma.hermitian(), out.split);
    const double tol = default_support_tolerance(d);
    if (b.b.size() != 0 && b.b.cwiseAbs().maxCoeff() > tol) {
      throw ValidationError("scenario: sigma is not block diagonal for the support split");
    }
    if (b.c.trace().real() > tol) throw ValidationError("scenario: sigma has weight outside the support levels");
    if (min_eigenvalue(HermitianMatrix(b.a)) <= tol) {
      throw ValidationError("scenario: sigma does not have full rank on the support levels");
    }
  } else {
    const double emin = s.energies.minCoeff();
    RealVector w = RealVector::Zero(d);
    for (Index l : s.support_levels) w(l) = std::exp(-s.beta * (s.energies(l) - emin));
    w /= w.sum();
    out.sigma = DensityMatrix(Matrix(basis * w.cast<Complex>().asDiagonal() * basis.adjoint()));
  }

  double eps = 0.0;
  if (s.epsilon) {
    eps = *s.epsilon;
  } else {
    // Match the Gibbs weight of QH: (eps / d) d_Q = Tr(Q pi).
    const DensityMatrix gibbs = out.davies.model.gibbs_state();
    const double q_weight = (out.split.q * gibbs.matrix()).trace().real();
    eps = static_cast<double>(d) * q_weight / static_cast<double>(out.split.d_q);
  }
  out.reg = regularize(out.sigma, eps);
  out.local = local_constants(out.reg, out.split);
  out.rho0 = build_initial_state(s, out.split);
  out.act0 = activation(out.rho0, out.split);
  const ExtendedReal d0 = relative_entropy(out.rho0, out.reg.sigma_eps);
  out.d0 = d0.value();
  out.params = CertParams::make(s.alpha, out.d0, s.theta, out.local, out.reg, out.split.d_q, s.delta0);
  out.window = dominance_window(out.secular.gamma_max, out.davies.rates.k, out.params.a_theta,
                                out.act0.c, out.act0.eps_q, out.davies.rates.eps_bar);
  if (s.time_grid) {
    out.times = uniform_grid(s.time_grid->t_max, s.time_grid->steps);
  } else {
    out.times = uniform_grid(default_horizon(out.davies.rates, out.window), 200);
  }
  return out;
}

}  // namespace bcert::harness
