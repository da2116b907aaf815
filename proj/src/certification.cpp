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

#include "bcert/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bcert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRateRelTol = 1e-12;

}  // namespace

CertParams CertParams::make(double alpha, double d0, double theta, const LocalConstants& local,
                            const RegularizedState& reg, Index d_q, std::optional<double> delta0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("CertParams: alpha must be positive");
  if (!(d0 >= 0.0) || !std::isfinite(d0)) throw ValidationError("CertParams: D0 must be finite and >= 0");
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("CertParams: theta must lie in (0, 1)");
  if (!(local.a0 > 0.0)) throw ValidationError("CertParams: a0 must be positive");
  CertParams p;
  p.alpha = alpha;
  p.d0 = d0;
  p.theta = theta;
  p.a_theta = 1.0 / (theta * theta) - 1.0;
  p.a0 = local.a0;
  p.epsilon = reg.epsilon;
  p.lambda_star = reg.lambda_star;
  p.d_q = d_q;
  if (delta0) {
    if (!(*delta0 > 0.0 && *delta0 <= local.a0 + 1e-15)) {
      throw ValidationError("CertParams: delta0 must lie in (0, a0]");
    }
    p.delta0 = *delta0;
  } else {
    const double room = 0.5 * local.a0 - reg.lambda_star * static_cast<double>(d_q);
    p.delta0 = room > 0.0 ? std::min(local.delta0, room) : local.delta0;
  }
  return p;
}

bool CertParams::lc_static_ok() const {
  return lambda_star * static_cast<double>(d_q) + delta0 <= 0.5 * a0;
}

std::pair<double, double> cd_sides(const RateParams& rates, double gamma_max, double a_theta,
                                   double c0, double eps0, double t) {
  const double decay = std::exp(-rates.k * t);
  const double lhs = decay * eps0 + rates.eps_bar * (1.0 - decay);
  const double rhs = a_theta * std::exp(-2.0 * gamma_max * t) * c0;
  return {lhs, rhs};
}

ConditionFlags check_conditions(const Trajectory& traj, const CertParams& params,
                                const RateParams& rates, const SecularTable& secular) {
  if (traj.points.size() != traj.times.size() || traj.points.empty()) {
    throw ValidationError("check_conditions: trajectory is not annotated");
  }
  const double c0 = traj.points.front().activation.c;
  const double eps0 = traj.points.front().activation.eps_q;
  ConditionFlags f;
  f.lc_static_ok = params.lc_static_ok();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    f.lc_ok.push_back(traj.points[i].trace_dist <= params.delta0);
    const auto [lhs, rhs] = cd_sides(rates, secular.gamma_max, params.a_theta, c0, eps0, traj.times[i]);
    f.cd_lhs.push_back(lhs);
    f.cd_rhs.push_back(rhs);
    // With c0 = 0 the right side vanishes and no coherence can dominate.
    f.cd_ok.push_back(rhs > 0.0 && lhs <= rhs);
  }
  return f;
}

double modulus_lower(double a_func, double theta, double a0) {
  if (!(a0 > 0.0)) throw ValidationError("modulus_lower: a0 must be positive");
  if (!(a_func >= 0.0)) throw DomainError("modulus_lower: activation must be nonnegative");
  const double c = std::sqrt(a0);
  if (a_func >= c) {
    std::ostringstream os;
    os << "modulus_lower: activation " << a_func << " is not below sqrt(a0) = " << c;
    throw DomainError(os.str());
  }
  if (a_func == 0.0) return 0.0;
  return 2.0 * theta * theta * a_func * a_func * std::log(c / a_func);
}

double invert_modulus(double c, double target) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("invert_modulus: C must be positive");
  if (!(target >= 0.0)) throw ValidationError("invert_modulus: target must be nonnegative");
  const double x_max = c / std::sqrt(std::numbers::e);
  const double f_max = c * c / (2.0 * std::numbers::e);
  if (target > f_max) {
    std::ostringstream os;
    os.precision(17);
    os << "invert_modulus: target " << target << " is out of the local branch (maximum " << f_max
       << " at x = " << x_max << ")";
    throw BranchError(os.str());
  }
  if (target == 0.0) return 0.0;
  if (target == f_max) return x_max;
  auto f = [c](double x) { return x * x * std::log(c / x); };
  double lo = 0.0, hi = x_max;
  // Bisection to 1e-12 relative width; f is strictly increasing on the bracket.
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi * 0.5; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CertCurve certified_curve(const CertParams& params, std::span<const double> times) {
  if (!(params.alpha > 0.0)) throw ValidationError("certified_curve: alpha must be positive");
  if (!(params.theta > 0.0 && params.theta < 1.0)) {
    throw ValidationError("certified_curve: theta must lie in (0, 1)");
  }
  CertCurve cc;
  const double c = std::sqrt(params.a0);
  const double f_max = params.a0 / (2.0 * std::numbers::e);
  cc.k_const = params.d0 / (2.0 * params.theta * params.theta);
  const double a = params.alpha;
  for (double t : times) {
    if (!(t >= 0.0)) throw ValidationError("certified_curve: times must be nonnegative");
    const double bound = params.d0 * std::exp(-2.0 * a * t);
    const double target = bound / (2.0 * params.theta * params.theta);
    cc.times.push_back(t);
    cc.entropy_bound.push_back(bound);
    const bool on = target <= f_max;
    cc.on_branch.push_back(on);
    cc.a_cert.push_back(on ? invert_modulus(c, target) : kNaN);
    double env;
    if (cc.k_const == 0.0) {
      env = 0.0;
    } else if (t == 0.0) {
      env = kInf;
    } else {
      env = std::sqrt(2.0 * cc.k_const / (a * t)) * std::exp(-a * t);
    }
    cc.envelope.push_back(env);
    if (!cc.t0) {
      // log(C e^{alpha t} / sqrt(2K)) >= alpha t / 2.
      const bool valid = cc.k_const == 0.0 ||
                         std::log(c / std::sqrt(2.0 * cc.k_const)) + 0.5 * a * t >= 0.0;
      if (valid) cc.t0 = t;
    }
  }
  double best = -kInf;
  for (std::size_t i = 0; i < cc.times.size(); ++i) {
    if (!cc.on_branch[i]) continue;
    const double t = cc.times[i];
    best = std::max(best, cc.a_cert[i] * std::sqrt(a * t) * std::exp(a * t));
  }
  if (best > -kInf) {
    cc.c_prime = best;
  } else {
    std::ostringstream os;
    os.precision(17);
    os << "certified_curve: no grid time lies on the local branch (need D0 e^{-2 alpha t} <= "
       << 2.0 * params.theta * params.theta * f_max << ")";
    cc.diagnostic = os.str();
  }
  return cc;
}

WindowResult dominance_window(double gamma_max, double k, double a_theta, double c0, double eps0,
                              double eps_bar) {
  WindowResult w;
  // Relative slack absorbs round-off when k = 2 Gamma_max holds exactly, as for a qubit.
  if (!(k >= 2.0 * gamma_max * (1.0 - kRateRelTol))) {
    w.failed_hypothesis = "k >= 2 Gamma_max";
    return w;
  }
  const double margin = a_theta * c0 - eps0;
  if (!(margin > eps_bar)) {
    w.failed_hypothesis = "A_theta c0 - eps0 > eps_bar";
    return w;
  }
  if (gamma_max == 0.0 || eps_bar == 0.0) {
    w.t_star = kInf;
  } else {
    w.t_star = std::log(margin / eps_bar) / (2.0 * gamma_max);
  }
  return w;
}

LowTemperatureWindow low_temperature_window(double beta, double delta_e, double eta_up, double eta,
                                            double gamma_max, double a_theta, double c0,
                                            double eps0) {
  LowTemperatureWindow w;
  if (!(eta > 0.0)) {
    w.failed_hypothesis = "eta > 0";
    w.eps_bar_upper = kInf;
    return w;
  }
  w.eps_bar_upper = (eta_up / eta) * std::exp(-beta * delta_e);
  if (!(delta_e > 0.0)) {
    w.failed_hypothesis = "delta_E > 0";
    return w;
  }
  const double margin = a_theta * c0 - eps0;
  if (!(margin > 0.0)) {
    w.failed_hypothesis = "A_theta c0 > eps0";
    return w;
  }
  if (!(margin > w.eps_bar_upper)) {
    w.failed_hypothesis = "A_theta c0 - eps0 > (eta_up / eta) e^{-beta delta_E}";
    return w;
  }
  if (gamma_max == 0.0 || eta_up == 0.0) {
    w.t_star_lower = kInf;
  } else {
    w.t_star_lower = (beta * delta_e - std::log((eta_up / eta) / margin)) / (2.0 * gamma_max);
  }
  return w;
}

LowTemperatureInputs low_temperature_inputs(const DaviesModel& model, const RateParams& rates) {
  LowTemperatureInputs in;
  in.delta_e = kInf;
  for (Index p : rates.p_levels) {
    double inflow = 0.0;
    for (Index e : rates.q_levels) {
      inflow += rates.w(p, e);
      if (rates.w(e, p) != 0.0) {
        in.has_transitions = true;
        in.delta_e = std::min(in.delta_e, model.energies(e) - model.energies(p));
      }
    }
    in.eta_up = std::max(in.eta_up, inflow);
  }
  if (!in.has_transitions) in.delta_e = kNaN;
  in.mu_bound = in.has_transitions ? std::exp(-model.beta * in.delta_e) * in.eta_up : 0.0;
  return in;
}

DensityMatrix pure_coherent_state(double eps0, const Vector& u_dir, const Vector& v_dir,
                                  const SupportSplit& split) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw ValidationError("pure_coherent_state: eps0 must lie in (0, 1)");
  const Index d = split.dim();
  if (u_dir.size() != d || v_dir.size() != d) {
    throw ValidationError("pure_coherent_state: direction dimension mismatch");
  }
  if (std::abs(u_dir.norm() - 1.0) > 1e-10 || std::abs(v_dir.norm() - 1.0) > 1e-10) {
    throw ValidationError("pure_coherent_state: directions must be unit vectors");
  }
  if ((split.q * u_dir).norm() > 1e-10) throw ValidationError("pure_coherent_state: u is not in PH");
  if ((split.p * v_dir).norm() > 1e-10) throw ValidationError("pure_coherent_state: v is not in QH");
  const Vector psi = std::sqrt(1.0 - eps0) * u_dir + std::sqrt(eps0) * v_dir;
  return DensityMatrix(Matrix(psi * psi.adjoint()));
}

DensityMatrix pure_coherent_state(double eps0, const SupportSplit& split) {
  if (split.r < 1 || split.d_q < 1) {
    throw ValidationError("pure_coherent_state: both PH and QH must be nonzero");
  }
  return pure_coherent_state(eps0, split.basis_p.col(0), split.basis_q.col(0), split);
}

std::optional<double> fit_alpha(std::span<const double> times, std::span<const double> entropies) {
  if (times.size() != entropies.size()) throw ValidationError("fit_alpha: length mismatch");
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double y = entropies[i];
    if (!(y > 0.0) || !std::isfinite(y)) continue;
    const double ly = std::log(y);
    n += 1;
    sx += times[i];
    sy += ly;
    sxx += times[i] * times[i];
    sxy += times[i] * ly;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den <= 0.0) return std::nullopt;
  const double slope = (n * sxy - sx * sy) / den;
  return -0.5 * slope;
}

}  // namespace bcert
