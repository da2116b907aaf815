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

#include "bcert/harness/suites.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <thread>

#include "bcert/activation.hpp"
#include "bcert/certification.hpp"
#include "bcert/davies.hpp"
#include "bcert/entropy.hpp"
#include "bcert/harness/samplers.hpp"
#include "bcert/harness/scenario.hpp"
#include "bcert/separation.hpp"

namespace bcert::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CheckDef {
  std::string_view name;
  double tol;
  std::string_view description;
};

class TrialContext {
 public:
  TrialContext(const std::vector<CheckDef>& defs, std::uint64_t seed, bool inject_bug)
      : rng(seed), seed(seed), inject_bug(inject_bug), defs_(defs),
        worst(defs.size(), kInf), seen(defs.size(), false) {}

  /// Records slack = lhs - rhs for the named check; the trial keeps the minimum.
  void observe(std::string_view name, double slack) {
    for (std::size_t i = 0; i < defs_.size(); ++i) {
      if (defs_[i].name != name) continue;
      seen[i] = true;
      // NaN slack is a failure and must not be absorbed by min().
      if (std::isnan(slack)) slack = -kInf;
      worst[i] = std::min(worst[i], slack);
      return;
    }
    throw Error("suite: unregistered check " + std::string(name));
  }

  /// Pass/fail helper for predicates.
  void require(std::string_view name, bool ok) { observe(name, ok ? 0.0 : -1.0); }

  Rng rng;
  std::uint64_t seed;
  bool inject_bug;
  Json instance;  // reproducer, written on failure

 private:
  const std::vector<CheckDef>& defs_;

 public:
  std::vector<double> worst;
  std::vector<bool> seen;
};

using TrialFn = void (*)(TrialContext&);

struct SuiteDef {
  std::string_view name;
  std::uint64_t stream;
  std::vector<CheckDef> checks;
  TrialFn trial;
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

double fro(const Matrix& m) { return m.norm(); }

Matrix embed_blocks(const Matrix& x1, const Matrix& x2) {
  const Index n1 = x1.rows(), n2 = x2.rows();
  Matrix m = Matrix::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = x1;
  m.bottomRightCorner(n2, n2) = x2;
  return m;
}

// Sector projectors of random dimensions (each >= 1) in a Haar-random basis.
std::vector<Matrix> random_sector_family(Index d, Index k, Rng& rng) {
  std::vector<Index> dims(static_cast<std::size_t>(k), 1);
  for (Index extra = d - k; extra > 0; --extra) {
    ++dims[static_cast<std::size_t>(uniform_index(rng, 0, k - 1))];
  }
  const Matrix u = random_unitary(d, rng);
  std::vector<Matrix> ps;
  Index off = 0;
  for (Index n : dims) {
    const Matrix cols = u.middleCols(off, n);
    ps.push_back(cols * cols.adjoint());
    off += n;
  }
  return ps;
}

// ---------------------------------------------------------------- entropy

const std::vector<CheckDef> kEntropyChecks = {
    {"pythagorean_identity", 1e-9, "|D(rho||sigma) - D(rho||pinch rho) - D(pinch rho||sigma)|"},
    {"coherence_entropy_consistency", 1e-10, "coherence_entropy equals D(rho||pinch rho)"},
    {"data_processing_pinching", 1e-9, "D(pinch rho||pinch sigma) <= D(rho||sigma)"},
    {"pinsker", 1e-9, "D(rho||sigma) >= ||rho - sigma||_1^2 / 2"},
    {"fidelity_additivity", 1e-10, "F of block sums equals the sum of block fidelities"},
    {"bkm_integral_identity", 1e-8, "Taylor integral equals D(D0 + Y || D0) on 2x2 blocks"},
    {"bkm_integral_lower_bound", 1e-9, "Taylor integral >= s^2 L(a, c)"},
    {"log_mean_monotone", 1e-12, "d -> L((p+d)/2, (p-d)/2) nondecreasing on a grid"},
};

void entropy_trial(TrialContext& ctx) {
  Rng& rng = ctx.rng;
  const Index d = uniform_index(rng, 3, 8);
  const Index r = uniform_index(rng, 1, d - 1);
  const SupportSplit split = random_split(d, r, rng);
  const DensityMatrix rho = random_density(d, uniform_index(rng, 1, d), rng);
  const DensityMatrix sigma = random_block_diagonal(split, rng);
  const DensityMatrix sigma2 = random_density(d, d, rng);
  const SupportSplit split2 = random_split(d, uniform_index(rng, 1, d - 1), rng);
  ctx.instance = {{"rho", matrix_to_json(rho.matrix())},
                  {"sigma", matrix_to_json(sigma.matrix())},
                  {"p", matrix_to_json(split.p)},
                  {"sigma2", matrix_to_json(sigma2.matrix())},
                  {"p2", matrix_to_json(split2.p)}};

  const PinchingSpec spec = split.pinching();
  const DensityMatrix pr = pinch(rho, spec);
  const double dt = relative_entropy(rho, sigma).value();
  const double dc = relative_entropy(rho, pr).value();
  const double dp = relative_entropy(pr, sigma).value();
  ctx.observe("pythagorean_identity", -std::abs(dt - dc - dp));
  ctx.observe("coherence_entropy_consistency", -std::abs(coherence_entropy(rho, spec).value() - dc));

  const PinchingSpec spec2 = split2.pinching();
  const double d_full = relative_entropy(rho, sigma2).value();
  const double d_pinched = relative_entropy(pinch(rho, spec2), pinch(sigma2, spec2)).value();
  ctx.observe("data_processing_pinching", d_full - d_pinched);
  ctx.observe("pinsker", pinsker_gap(rho, sigma2).value());

  // Fidelity additivity on a direct sum of two blocks.
  const Index n1 = uniform_index(rng, 1, 4), n2 = uniform_index(rng, 1, 4);
  const double w1 = uniform(rng, 0.1, 0.9), w2 = uniform(rng, 0.1, 0.9);
  const Matrix x1 = w1 * random_density(n1, uniform_index(rng, 1, n1), rng).matrix();
  const Matrix x2 = (1.0 - w1) * random_density(n2, uniform_index(rng, 1, n2), rng).matrix();
  const Matrix y1 = w2 * random_density(n1, n1, rng).matrix();
  const Matrix y2 = (1.0 - w2) * random_density(n2, n2, rng).matrix();
  const double f_sum = fidelity(HermitianMatrix(embed_blocks(x1, x2)), HermitianMatrix(embed_blocks(y1, y2)));
  const double f_parts = fidelity(HermitianMatrix(x1), HermitianMatrix(y1)) +
                         fidelity(HermitianMatrix(x2), HermitianMatrix(y2));
  ctx.observe("fidelity_additivity", -std::abs(f_sum - f_parts));

  // 2x2 Taylor remainder; a fraction of draws push s^2 towards ac.
  const double a = std::pow(10.0, uniform(rng, -2.0, 0.0));
  const double c = std::pow(10.0, uniform(rng, -2.0, 0.0));
  const bool near_edge = uniform(rng, 0.0, 1.0) < 0.25;
  const double u = near_edge ? 1.0 - std::pow(10.0, -uniform(rng, 0.0, 6.0)) : uniform(rng, 0.0, 1.0);
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const Complex s = u * std::sqrt(a * c) * std::polar(1.0, phase);
  Matrix d0m = Matrix::Zero(2, 2), ym = Matrix::Zero(2, 2);
  d0m(0, 0) = a;
  d0m(1, 1) = c;
  ym(0, 1) = s;
  ym(1, 0) = std::conj(s);
  const HermitianMatrix d0h(d0m), yh(ym);
  const double integral = bkm_integral(d0h, yh);
  const double direct = relative_entropy_psd(HermitianMatrix(Matrix(d0m + ym)), d0h).value();
  ctx.observe("bkm_integral_identity", -std::abs(integral - direct));
  ctx.observe("bkm_integral_lower_bound", integral - std::norm(s) * log_mean(a, c));

  const double ps[] = {0.1, 1.0, 2.0};
  const double p = ps[uniform_index(rng, 0, 2)];
  double prev = log_mean(0.5 * p, 0.5 * p);
  double worst = kInf;
  for (int i = 1; i < 1000; ++i) {
    const double dd = p * i / 1000.0;
    const double g = log_mean(0.5 * (p + dd), 0.5 * (p - dd));
    worst = std::min(worst, g - prev);
    prev = g;
  }
  ctx.observe("log_mean_monotone", worst);
}

// ------------------------------------------------------------- activation

const std::vector<CheckDef> kActivationChecks = {
    {"regularized_kernel_level", 1e-12, "sigma_eps equals eps/d on QH"},
    {"activation_identity", 1e-12, "A^2 = c + eps_Q from the blocks"},
    {"block_reassembly", 1e-12, "blocks reassemble to rho"},
    {"coherence_schur_bound", 1e-10, "c <= ||P rho P||_op eps_Q"},
    {"regime_sampler_predicates", 0.0, "sampled states satisfy lambda_min >= a0, eps_Q <= eps_max, c > 0"},
    {"chain_outer", 1e-9, "D(rho||sigma_eps) >= D(rho||pinch rho)"},
    {"chain_blocks", 1e-9, "D(rho||pinch rho) >= sum_j D(M_j||D_j)"},
    {"chain_per_block", 1e-9, "sum_j D(M_j||D_j) >= c log(a0/eps_Q)"},
    {"weak_modulus", 1e-9, "D(rho||sigma_eps) >= 2c log(sqrt(a0)/A)"},
    {"svd_positivity", 1e-12, "s_j^2 <= a_j c_j"},
    {"local_invertibility", 1e-10, "||rho - sigma_eps||_1 <= delta0 implies lambda_min(P rho P) >= a0"},
};

void activation_trial(TrialContext& ctx) {
  Rng& rng = ctx.rng;
  const Index d = uniform_index(rng, 3, 8);
  const Index r = uniform_index(rng, 1, d - 1);
  const SupportSplit split = random_split(d, r, rng);
  const DensityMatrix tau = random_density(r, r, rng);
  const DensityMatrix sigma(Matrix(split.basis_p * tau.matrix() * split.basis_p.adjoint()));
  const double eps = std::pow(10.0, uniform(rng, -3.0, -1.0));
  const RegularizedState reg = regularize(sigma, eps);
  const LocalConstants local = local_constants(reg, split);
  const double a0 = local.a0;
  const DensityMatrix rho = random_density(d, uniform_index(rng, 1, d), rng);
  const double eps_max = 0.5 * a0 * uniform(rng, 0.05, 1.0);
  const DensityMatrix reg_rho = sample_regime_state(split, a0, eps_max, rng);
  const DensityMatrix other = random_density(d, d, rng);
  const double shrink = uniform(rng, 0.0, 1.0);
  ctx.instance = {{"sigma", matrix_to_json(sigma.matrix())}, {"epsilon", eps},
                  {"p", matrix_to_json(split.p)},            {"rho", matrix_to_json(rho.matrix())},
                  {"regime_rho", matrix_to_json(reg_rho.matrix())}, {"a0", a0}};

  const HermitianMatrix kernel = compress(reg.sigma_eps.hermitian(), split.basis_q);
  const SpectralDecomposition ked = eig_hermitian(kernel);
  const double lvl = eps / static_cast<double>(d);
  ctx.observe("regularized_kernel_level",
              -std::max(std::abs(ked.eigenvalues(0) - lvl), std::abs(ked.eigenvalues.maxCoeff() - lvl)));

  const ActivationReport act = activation(rho, split);
  ctx.observe("activation_identity", -std::abs(act.a_func * act.a_func - (act.c + act.eps_q)));
  const BlockDecomposition blocks = block_decompose(rho.hermitian(), split);
  ctx.observe("block_reassembly", -fro(blocks.reassemble(split) - rho.matrix()));
  const double a_op = norms(HermitianMatrix(blocks.a)).op;
  ctx.observe("coherence_schur_bound", a_op * act.eps_q - act.c);

  const CoercivityResult co = bkm_coercivity(reg_rho, split, a0);
  ctx.require("regime_sampler_predicates",
              co.regime_ok && co.activation.c > 0.0 && co.activation.eps_q <= eps_max);
  if (co.regime_ok && co.bound) {
    const double dse = relative_entropy(reg_rho, reg.sigma_eps).value();
    const double dcoh = relative_entropy(reg_rho, pinch(reg_rho, split.pinching())).value();
    const double blocks_sum = co.block_entropy_sum().value();
    ctx.observe("chain_outer", dse - dcoh);
    ctx.observe("chain_blocks", dcoh - blocks_sum);
    ctx.observe("chain_per_block", blocks_sum - *co.bound);
    const double af = co.activation.a_func;
    ctx.observe("weak_modulus", dse - 2.0 * co.activation.c * std::log(std::sqrt(a0) / af));
  }
  double svd_slack = kInf;
  for (const SvdBlock& b : co.svd_blocks) svd_slack = std::min(svd_slack, b.a * b.c - b.s * b.s);
  for (const SvdBlock& b : bkm_coercivity(rho, split, a0).svd_blocks) {
    svd_slack = std::min(svd_slack, b.a * b.c - b.s * b.s);
  }
  ctx.observe("svd_positivity", svd_slack);

  // A state inside the trace-norm ball of radius delta0 around sigma_eps.
  const Matrix diff = other.matrix() - reg.sigma_eps.matrix();
  const double dist = norms(HermitianMatrix(diff)).trace_norm;
  const double step = std::min(1.0, shrink * local.delta0 / dist);
  const DensityMatrix near(Matrix(reg.sigma_eps.matrix() + step * diff));
  const double lmin = min_eigenvalue(compress(near.hermitian(), split.basis_p));
  ctx.observe("local_invertibility", lmin - a0);
}

// ----------------------------------------------------------------- davies

const std::vector<CheckDef> kDaviesChecks = {
    {"secular_residual", 1e-9, "|p><e| is an eigenoperator of L"},
    {"bohr_distinct", 0.0, "cross-boundary Bohr frequencies are distinct"},
    {"kms_symmetry", 1e-12, "gamma(-w) = e^{-beta w} gamma(w), relative"},
    {"lindblad_reconstruction", 1e-12, "sum over Bohr frequencies of A(w) equals S"},
    {"gibbs_stationarity", 1e-9, "||L(Gibbs)||_F"},
    {"rate_identities", 1e-14, "k = mu + eta and eps_bar in [0, 1]"},
    {"coherence_lower_bound", 1e-8, "c(rho_t) >= e^{-2 Gamma_max t} c0"},
    {"population_upper_bound", 1e-8, "eps_Q(rho_t) <= e^{-kt} eps0 + eps_bar (1 - e^{-kt})"},
    {"secular_mode_evolution", 1e-8, "P rho_t Q = sum c_pe e^{lambda_pe t} |p><e|"},
    {"trace_hermiticity", 1e-9, "e^{tL} preserves trace and Hermiticity for t k <= 20"},
    {"semigroup", 1e-9, "e^{sL} e^{tL} = e^{(s+t)L}"},
    {"method_agreement", 1e-9, "spectral and scaling-squaring propagators agree"},
};

std::vector<double> long_grid(const RateParams& rates) {
  const double horizon = rates.k > 0.0 ? 20.0 / rates.k : 20.0;
  return uniform_grid(horizon, 200);
}

void davies_trial(TrialContext& ctx) {
  Rng& rng = ctx.rng;
  const Scenario s = random_secular_scenario(uniform_index(rng, 2, 5), rng);
  ctx.instance = scenario_to_json(s);
  const ScenarioSetup st = prepare(s);
  const DaviesModel& model = st.davies.model;
  const RateParams& rates = st.davies.rates;

  ctx.observe("secular_residual", -st.secular.max_residual);
  ctx.require("bohr_distinct", st.secular.distinct_ok);

  double kms = 0.0;
  for (const BohrFrequency& bf : model.bohr_frequencies) {
    const double w = bf.omega;
    const double g = model.rate(w);
    const double lhs = model.rate(-w);
    const double rhs = std::exp(-model.beta * w) * g;
    kms = std::max(kms, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
  ctx.observe("kms_symmetry", -kms);

  double recon = 0.0;
  for (std::size_t a = 0; a < model.couplings.size(); ++a) {
    Matrix sum = Matrix::Zero(model.dim, model.dim);
    for (const LindbladOperator& op : model.lindblad_ops) {
      if (op.coupling == a) sum += op.op;
    }
    recon = std::max(recon, fro(sum - model.couplings[a].matrix()));
  }
  ctx.observe("lindblad_reconstruction", -recon);
  ctx.observe("gibbs_stationarity", -fro(model.apply(model.gibbs_state().matrix())));
  const bool eps_in_range = rates.eps_bar >= 0.0 && rates.eps_bar <= 1.0;
  ctx.observe("rate_identities", eps_in_range ? -std::abs(rates.k - rates.mu - rates.eta) : -1.0);

  const std::vector<double> times = long_grid(rates);
  Trajectory tr = evolve(model, st.rho0, times);
  annotate(tr, st.split, st.reg.sigma_eps);
  double c_slack = kInf, e_slack = kInf;
  for (std::size_t i = 0; i < times.size(); ++i) {
    DynamicalBounds b = dynamical_bounds(rates, st.secular, st.act0.c, st.act0.eps_q, times[i]);
    if (ctx.inject_bug) {
      const double decay = std::exp(-rates.k * times[i]);
      b.eps_q_upper = decay * st.act0.eps_q - rates.eps_bar * (1.0 - decay);
    }
    c_slack = std::min(c_slack, tr.points[i].activation.c - b.c_lower);
    e_slack = std::min(e_slack, b.eps_q_upper - tr.points[i].activation.eps_q);
  }
  ctx.observe("coherence_lower_bound", c_slack);
  ctx.observe("population_upper_bound", e_slack);

  // Mode-wise prediction of the cross block from the extracted eigenvalues.
  std::vector<Matrix> modes;
  std::vector<Complex> lambdas, coeffs;
  for (Index p : st.secular.p_levels) {
    for (Index e : st.secular.q_levels) {
      const Matrix x = model.level_operator(p, e);
      lambdas.push_back((x.adjoint() * model.apply(x)).trace());
      coeffs.push_back((x.adjoint() * st.rho0.matrix()).trace());
      modes.push_back(x);
    }
  }
  double mode_err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    Matrix pred = Matrix::Zero(model.dim, model.dim);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      pred += coeffs[m] * std::exp(lambdas[m] * times[i]) * modes[m];
    }
    const Matrix block = st.split.p * tr.states[i].matrix() * st.split.q;
    mode_err = std::max(mode_err, fro(block - pred));
  }
  ctx.observe("secular_mode_evolution", -mode_err);

  const Propagator spectral(model.liouvillian, EvolutionMethod::automatic);
  const Propagator squaring(model.liouvillian, EvolutionMethod::scaling_squaring);
  const double t_end = times.back();
  const Matrix raw = spectral.apply(t_end, st.rho0.matrix());
  ctx.observe("trace_hermiticity",
              -std::max(std::abs(raw.trace() - Complex(1.0)), hermitian_defect(raw)));
  const double t1 = times[60], t2 = times[80];
  const Matrix composed = spectral.apply(t1, spectral.apply(t2, st.rho0.matrix()));
  ctx.observe("semigroup", -fro(composed - spectral.apply(t1 + t2, st.rho0.matrix())));
  ctx.observe("method_agreement", -fro(squaring.apply(t_end, st.rho0.matrix()) - raw));
}

// ---------------------------------------------------------- certification

const std::vector<CheckDef> kCertificationChecks = {
    {"dominance_implies_ratio", 1e-9, "cd_ok(t) implies R(rho_t)^2 >= theta^2"},
    {"modulus_along_trajectory", 1e-9, "D(rho_t||sigma_eps) >= 2 theta^2 A^2 log(sqrt(a0)/A) in the LC regime"},
    {"modulus_regime_samples", 1e-9, "same modulus on regime-sampled states with R >= theta"},
    {"certified_activation", 1e-9, "A(rho_t) <= a_cert(t) where the regime and premise hold"},
    {"a_cert_nonincreasing", 1e-12, "a_cert is nonincreasing on-branch"},
    {"envelope_dominance", 1e-12, "a_cert(t) <= envelope(t) for t >= t0"},
    {"c_prime_bound", 1e-12, "a_cert(t) sqrt(alpha t) e^{alpha t} <= c_prime"},
    {"window_sufficiency", 1e-12, "(CD) holds on [0, T*]"},
    {"low_temperature_bound", 1e-9, "detailed-balance lower bound does not exceed T*"},
    {"detailed_balance_rates", 1e-12, "mu <= e^{-beta dE} eta_up and eps_bar <= (eta_up/eta) e^{-beta dE}"},
    {"invert_modulus_roundtrip", 1e-10, "invert_modulus(C, f(x)) = x, relative"},
    {"classical_no_coherence", 1e-10, "block-diagonal rho_0 keeps ||P rho_t Q||_2 = 0"},
    {"classical_no_dominance", 0.0, "cd_ok is false when c0 = 0"},
    {"classical_pinsker", 1e-9, "Pinsker gap stays nonnegative"},
};

Scenario random_qubit_scenario(Rng& rng) {
  Scenario s;
  s.name = "random-qubit";
  s.energies = RealVector(2);
  s.energies << 0.0, uniform(rng, 0.5, 2.0);
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  s.couplings = {sx};
  s.beta = uniform(rng, 1.0, 6.0);
  s.support_levels = {0};
  s.initial_state.kind = InitialStateSpec::Kind::pure_coherent;
  s.initial_state.eps0 = uniform(rng, 0.005, 0.1);
  s.theta = uniform(rng, 0.3, 0.7);
  s.alpha = 0.1;
  return s;
}

void check_windows(TrialContext& ctx, const ScenarioSetup& st) {
  const RateParams& rates = st.davies.rates;
  if (st.window.t_star && std::isfinite(*st.window.t_star)) {
    double worst = kInf;
    for (double t : uniform_grid(*st.window.t_star, 200)) {
      const auto [lhs, rhs] = cd_sides(rates, st.secular.gamma_max, st.params.a_theta, st.act0.c,
                                       st.act0.eps_q, t);
      worst = std::min(worst, (rhs - lhs) / std::max(1.0, std::abs(rhs)));
    }
    ctx.observe("window_sufficiency", worst);
  }
  const LowTemperatureInputs lti = low_temperature_inputs(st.davies.model, rates);
  if (!lti.has_transitions) return;
  double db = lti.mu_bound - rates.mu;
  const LowTemperatureWindow lt =
      low_temperature_window(st.scenario.beta, lti.delta_e, lti.eta_up, rates.eta,
                             st.secular.gamma_max, st.params.a_theta, st.act0.c, st.act0.eps_q);
  if (rates.eta > 0.0) db = std::min(db, lt.eps_bar_upper - rates.eps_bar);
  ctx.observe("detailed_balance_rates", db);
  if (st.window.t_star && lt.t_star_lower) {
    ctx.observe("low_temperature_bound", *st.window.t_star - *lt.t_star_lower);
  }
}

void certification_trial(TrialContext& ctx) {
  Rng& rng = ctx.rng;
  const Scenario s = random_secular_scenario(uniform_index(rng, 2, 5), rng);
  ctx.instance = scenario_to_json(s);
  const ScenarioSetup st = prepare(s);
  const DaviesModel& model = st.davies.model;
  const RateParams& rates = st.davies.rates;
  const double a0 = st.local.a0;
  const double theta = st.params.theta;

  const std::vector<double> times = uniform_grid(rates.k > 0.0 ? 10.0 / rates.k : 10.0, 200);
  Trajectory tr = evolve(model, st.rho0, times);
  annotate(tr, st.split, st.reg.sigma_eps);
  const ConditionFlags flags = check_conditions(tr, st.params, rates, st.secular);

  for (std::size_t i = 0; i < times.size(); ++i) {
    const TrajectoryPoint& pt = tr.points[i];
    if (flags.cd_ok[i]) ctx.observe("dominance_implies_ratio", pt.activation.r2 - theta * theta);
    const double af = pt.activation.a_func;
    if (flags.lc_ok[i] && flags.lc_static_ok && pt.activation.r2 >= theta * theta && af > 0.0 &&
        af < std::sqrt(a0)) {
      ctx.observe("modulus_along_trajectory",
                  pt.rel_entropy.value() - modulus_lower(af, theta, a0));
    }
  }

  // Regime-sampled states against the same sigma_eps.
  {
    const double eps_max = 0.5 * a0 * uniform(rng, 0.05, 1.0);
    const DensityMatrix rho = sample_regime_state(st.split, a0, eps_max, rng);
    const ActivationReport act = activation(rho, st.split);
    const double th = std::sqrt(act.r2) * uniform(rng, 0.3, 1.0);
    ctx.observe("modulus_regime_samples", relative_entropy(rho, st.reg.sigma_eps).value() -
                                              modulus_lower(act.a_func, th, a0));
  }

  // Certification at the empirically verified decay rate.
  double alpha_emp = kInf;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = tr.points[i].rel_entropy.value();
    alpha_emp = dt > 0.0 ? std::min(alpha_emp, -std::log(dt / st.d0) / (2.0 * times[i])) : alpha_emp;
  }
  if (std::isfinite(alpha_emp) && alpha_emp > 0.0) {
    CertParams params = st.params;
    params.alpha = 0.999 * alpha_emp;
    const CertCurve cc = certified_curve(params, times);
    const double branch_end = std::sqrt(a0 / std::exp(1.0));
    for (std::size_t i = 0; i < times.size(); ++i) {
      const TrajectoryPoint& pt = tr.points[i];
      if (!cc.on_branch[i]) continue;
      if (flags.lc_ok[i] && flags.lc_static_ok && pt.activation.r2 >= theta * theta &&
          pt.activation.a_func <= branch_end) {
        ctx.observe("certified_activation", cc.a_cert[i] - pt.activation.a_func);
      }
      if (i + 1 < times.size() && cc.on_branch[i + 1]) {
        ctx.observe("a_cert_nonincreasing", cc.a_cert[i] - cc.a_cert[i + 1]);
      }
      if (cc.t0 && times[i] >= *cc.t0 && times[i] > 0.0) {
        ctx.observe("envelope_dominance", cc.envelope[i] - cc.a_cert[i]);
      }
      if (cc.c_prime) {
        const double scaled = cc.a_cert[i] * std::sqrt(params.alpha * times[i]) *
                              std::exp(params.alpha * times[i]);
        ctx.observe("c_prime_bound", *cc.c_prime - scaled);
      }
    }
  }

  check_windows(ctx, st);
  // Two-level models have k = 2 Gamma_max, so their windows are often nonempty.
  check_windows(ctx, prepare(random_qubit_scenario(rng)));

  {
    const double c = uniform(rng, 0.1, 2.0);
    const double x = uniform(rng, 0.01, 0.9) * c / std::sqrt(std::exp(1.0));
    const double y = invert_modulus(c, x * x * std::log(c / x));
    ctx.observe("invert_modulus_roundtrip", -std::abs(y - x) / x);
  }

  // Classical limit: the pinched version of a random state.
  {
    const DensityMatrix mixed = random_density(model.dim, model.dim, rng);
    const DensityMatrix rho0 = pinch(mixed, st.split.pinching());
    Trajectory ct = evolve(model, rho0, times);
    annotate(ct, st.split, st.reg.sigma_eps);
    const ConditionFlags cf = check_conditions(ct, st.params, rates, st.secular);
    double off = 0.0, gap = kInf;
    bool any_cd = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
      off = std::max(off, fro(st.split.p * ct.states[i].matrix() * st.split.q));
      gap = std::min(gap, pinsker_gap(ct.states[i], st.reg.sigma_eps).value());
      any_cd = any_cd || cf.cd_ok[i];
    }
    ctx.observe("classical_no_coherence", -off);
    ctx.require("classical_no_dominance", !any_cd);
    ctx.observe("classical_pinsker", gap);
  }
}

// ------------------------------------------------------------- separation

const std::vector<CheckDef> kSeparationChecks = {
    {"cps_residual", 1e-9, "two-block separation identity"},
    {"chain_block_identity", 1e-11, "(I - P_m) rho^(m) P_m = sum_{i<m} P_i rho P_m"},
    {"chain_norm_identity", 1e-10, "C_m = sum_{i<m} ||P_i rho P_m||_2^2"},
    {"chain_telescoping", 1e-9, "D(rho||Pi_K rho) = sum of step entropies"},
    {"hierarchy_applicable", 0.0, "geometric hierarchy satisfies the sector conditions"},
    {"multi_sector_bound", 1e-9, "D(rho||sigma) >= sum C_m log(a_m/eps_m) + D(Pi_K rho||sigma)"},
    {"petz_fixed_point", 1e-10, "R(pinch rho) = pinch rho and R(sigma) = sigma"},
    {"petz_trace", 1e-11, "R preserves the trace"},
    {"petz_positivity", 1e-12, "R maps states to PSD operators"},
    {"fr_in_class", 0.0, "near-boundary sampler yields in-class states with c > 0"},
    {"fr_dominance", 1e-9, "c log(a0/eps_Q) >= -2 log F(rho, R(pinch rho))"},
    {"fr_ratio_floor", 1e-9, "ratio >= a0 log(a0/eps_Q) / 4"},
    {"fidelity_chain", 1e-10, "F(rho, pinch rho) >= 1 - c/a0"},
    {"fidelity_remainder", 1e-10, "-2 log F(rho, pinch rho) <= 4c/a0 when c/a0 <= 1/2"},
    {"ratio_trend", 1e-6, "ratio nondecreasing as eps_Q -> 0 inside the class"},
};

void separation_trial(TrialContext& ctx) {
  Rng& rng = ctx.rng;
  const Index d = uniform_index(rng, 3, 8);
  const Index r = uniform_index(rng, 1, std::min<Index>(2, d - 1));
  const SupportSplit split = random_split(d, r, rng);
  const DensityMatrix rho = random_density(d, uniform_index(rng, 1, d), rng);
  const DensityMatrix sigma = random_block_diagonal(split, rng);
  ctx.instance = {{"rho", matrix_to_json(rho.matrix())},
                  {"sigma", matrix_to_json(sigma.matrix())},
                  {"p", matrix_to_json(split.p)}};

  ctx.observe("cps_residual", -cps_decompose(rho, sigma, split, 0.1).residual);

  {
    const Index k = uniform_index(rng, 3, 4);
    const Index dk = uniform_index(rng, k, 8);
    const std::vector<Matrix> family = random_sector_family(dk, k, rng);
    const DensityMatrix rk = random_density(dk, uniform_index(rng, 1, dk), rng);
    const DensityMatrix sk = random_block_diagonal(family, rng);
    const SectorChain ch = sequential_pinch_chain(rk, family);
    double blk = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < ch.c_m.size(); ++i) {
      blk = std::max(blk, ch.block_residual[i]);
      nrm = std::max(nrm, std::abs(ch.c_m[i] - ch.c_m_direct[i]));
    }
    ctx.observe("chain_block_identity", -blk);
    ctx.observe("chain_norm_identity", -nrm);
    ctx.observe("chain_telescoping", -multi_sector_bound(rk, sk, ch).telescoping_residual);
  }

  {
    const HierarchyInstance h = sample_geometric_hierarchy(uniform_index(rng, 2, 4), rng);
    const SectorChain ch = sequential_pinch_chain(h.rho, h.projectors);
    const MultiSectorBound mb = multi_sector_bound(h.rho, h.sigma, ch);
    ctx.require("hierarchy_applicable", mb.applicable);
    if (mb.applicable) ctx.observe("multi_sector_bound", mb.d_total.value() - mb.bound);
  }

  {
    const PinchingSpec spec = split.pinching();
    const DensityMatrix pr = pinch(rho, spec);
    const double fp = std::max(fro(petz_recovery(sigma, split, pr.hermitian()).matrix() - pr.matrix()),
                               fro(petz_recovery(sigma, split, sigma.hermitian()).matrix() - sigma.matrix()));
    ctx.observe("petz_fixed_point", -fp);
    const HermitianMatrix x = random_hermitian(d, rng);
    ctx.observe("petz_trace", -std::abs(petz_recovery(sigma, split, x).trace() - x.trace()));
    ctx.observe("petz_positivity", min_eigenvalue(petz_recovery(sigma, split, rho.hermitian())));
  }

  const double a0 = uniform(rng, 0.5, 0.9) / static_cast<double>(r);
  const double threshold = near_boundary_threshold(a0);
  {
    const DensityMatrix rr = sample_regime_state(split, a0, threshold, rng);
    const FrReport fr = fr_compare(rr, sigma, split, a0);
    ctx.require("fr_in_class", fr.in_class && fr.c > 0.0);
    ctx.observe("fr_dominance", fr.ours - fr.fr_remainder);
    ctx.observe("fr_ratio_floor", fr.ratio.value_or(kInf) - fr.ratio_floor);
    ctx.observe("fidelity_chain", fr.c / a0 - fr.fidelity_defect);
    if (fr.c / a0 <= 0.5) ctx.observe("fidelity_remainder", 4.0 * fr.c / a0 - fr.fr_remainder);
  }

  // Geometric ladder eps_Q = threshold 10^{-j} with fixed directions and coupling strength.
  {
    const Matrix tp = random_density(r, r, rng).matrix();
    const Matrix tq = random_density(d - r, d - r, rng).matrix();
    const Vector x = random_unit_vector(r, rng);
    const Vector y = random_unit_vector(d - r, rng);
    const double kappa = uniform(rng, 0.2, 0.9);
    double prev = -kInf;
    double worst = kInf;
    for (int j = 0; j <= 6; ++j) {
      const double eq = threshold * std::pow(10.0, -j);
      // Below this the smallest eigenvalues approach the round-off floor of the spectrum.
      if (eq * min_eigenvalue(HermitianMatrix(tq)) < 1e-10) break;
      const Matrix a = a0 * Matrix::Identity(r, r) + (1.0 - eq - static_cast<double>(r) * a0) * tp;
      const Matrix c = eq * tq;
      const Matrix sa = matrix_sqrt(HermitianMatrix(a)).matrix();
      const Matrix sc = matrix_sqrt(HermitianMatrix(c)).matrix();
      const Matrix b = kappa * sa * x * y.adjoint() * sc;
      Matrix blocks(d, d);
      blocks << a, b, b.adjoint(), c;
      const Matrix u = split.basis();
      const DensityMatrix rj(Matrix(u * blocks * u.adjoint()));
      const FrReport fr = fr_compare(rj, sigma, split, a0);
      if (!fr.in_class) continue;
      const double ratio = fr.ratio.value_or(kInf);
      if (std::isfinite(prev) && std::isfinite(ratio)) worst = std::min(worst, ratio - prev);
      prev = ratio;
    }
    if (std::isfinite(worst)) ctx.observe("ratio_trend", worst);
  }
}

const std::vector<SuiteDef>& suite_defs() {
  static const std::vector<SuiteDef> defs = {
      {"entropy", 1, kEntropyChecks, &entropy_trial},
      {"activation", 2, kActivationChecks, &activation_trial},
      {"davies", 3, kDaviesChecks, &davies_trial},
      {"certification", 4, kCertificationChecks, &certification_trial},
      {"separation", 5, kSeparationChecks, &separation_trial},
  };
  return defs;
}

struct TrialOutcome {
  std::uint64_t seed = 0;
  std::vector<double> worst;
  std::vector<bool> seen;
  std::optional<std::string> error;
  Json instance;
};

std::string format_slack(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 6);
  return std::string(buf, res.ptr);
}

std::string sanitize(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  }
  return out;
}

SuiteReport run_one(const SuiteDef& def, std::size_t trials, std::uint64_t seed,
                    const SuiteOptions& opt) {
  std::vector<std::uint64_t> seeds;
  if (opt.replay_seed) {
    seeds.push_back(*opt.replay_seed);
  } else {
    for (std::size_t i = 0; i < trials; ++i) seeds.push_back(derive_seed(seed, def.stream, i));
  }
  std::vector<TrialOutcome> outcomes(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      TrialContext ctx(def.checks, seeds[i], opt.inject_bug);
      TrialOutcome& out = outcomes[i];
      out.seed = seeds[i];
      try {
        def.trial(ctx);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      out.worst = ctx.worst;
      out.seen = ctx.seen;
      out.instance = std::move(ctx.instance);
    }
  };
  unsigned nthreads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, seeds.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SuiteReport rep;
  rep.name = std::string(def.name);
  rep.trials = seeds.size();
  rep.seed = seed;
  for (const CheckDef& c : def.checks) {
    CheckSummary cs;
    cs.name = std::string(c.name);
    cs.description = std::string(c.description);
    cs.tolerance = c.tol;
    cs.worst_slack = kInf;
    rep.checks.push_back(cs);
  }
  for (const TrialOutcome& out : outcomes) {
    if (out.error) rep.errors.push_back("seed " + std::to_string(out.seed) + ": " + *out.error);
    for (std::size_t k = 0; k < def.checks.size(); ++k) {
      if (!out.seen[k]) continue;
      CheckSummary& cs = rep.checks[k];
      ++cs.evaluated;
      cs.worst_slack = std::min(cs.worst_slack, out.worst[k]);
      const bool ok = out.worst[k] >= -cs.tolerance;
      if (ok) {
        ++cs.passed;
        continue;
      }
      cs.failing_seeds.push_back(out.seed);
      if (opt.dump_dir) {
        std::filesystem::create_directories(*opt.dump_dir);
        Json doc = out.instance.is_object() ? out.instance : Json::object();
        doc["failure"] = {{"suite", def.name},   {"check", cs.name},
                          {"seed", out.seed},    {"slack", format_slack(out.worst[k])},
                          {"tolerance", cs.tolerance}};
        const std::string path = *opt.dump_dir + "/" + sanitize(def.name) + "-" + sanitize(cs.name) +
                                 "-" + std::to_string(out.seed) + ".json";
        write_json_file(path, doc);
      }
    }
  }
  return rep;
}

}  // namespace

bool SuiteReport::pass() const {
  if (!errors.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckSummary& c) { return c.pass(); });
}

bool VerificationReport::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.pass(); });
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  for (const SuiteReport& s : suites) {
    os << "suite " << s.name << " trials=" << s.trials << " seed=" << s.seed << ": "
       << (s.pass() ? "PASS" : "FAIL") << '\n';
    for (const CheckSummary& c : s.checks) {
      os << "  " << (c.pass() ? "PASS" : "FAIL") << ' ' << c.name << " evaluated=" << c.evaluated
         << " passed=" << c.passed << " worst_slack=" << format_slack(c.worst_slack)
         << " tol=" << format_slack(c.tolerance);
      if (!c.failing_seeds.empty()) {
        os << " failing_seeds=";
        for (std::size_t i = 0; i < c.failing_seeds.size() && i < 10; ++i) {
          os << (i ? "," : "") << c.failing_seeds[i];
        }
        if (c.failing_seeds.size() > 10) os << ",...";
      }
      os << '\n';
    }
    for (const std::string& e : s.errors) os << "  ERROR " << e << '\n';
  }
  os << "overall: " << (pass() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

Json VerificationReport::to_json() const {
  Json out = Json::object();
  out["overall_pass"] = pass();
  Json arr = Json::array();
  for (const SuiteReport& s : suites) {
    Json js = {{"name", s.name}, {"trials", s.trials}, {"seed", s.seed}, {"pass", s.pass()}};
    Json checks = Json::array();
    for (const CheckSummary& c : s.checks) {
      checks.push_back({{"name", c.name},
                        {"description", c.description},
                        {"tolerance", c.tolerance},
                        {"evaluated", c.evaluated},
                        {"passed", c.passed},
                        {"worst_slack", format_slack(c.worst_slack)},
                        {"pass", c.pass()},
                        {"failing_seeds", c.failing_seeds}});
    }
    js["checks"] = checks;
    js["errors"] = s.errors;
    arr.push_back(js);
  }
  out["suites"] = arr;
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const SuiteDef& d : suite_defs()) n.emplace_back(d.name);
    n.emplace_back("all");
    return n;
  }();
  return names;
}

VerificationReport run_suite(const std::string& name, std::size_t trials, std::uint64_t seed,
                             const SuiteOptions& options) {
  VerificationReport rep;
  bool found = false;
  for (const SuiteDef& d : suite_defs()) {
    if (name == "all" || name == d.name) {
      rep.suites.push_back(run_one(d, trials, seed, options));
      found = true;
    }
  }
  if (!found) {
    std::string known;
    for (const std::string& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown suite \"" + name + "\" (expected one of: " + known + ")");
  }
  return rep;
}

}  // namespace bcert::harness
