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

// Entropy-to-activation certification. Given an entropy decay premise
// D(rho_t || sigma_eps) <= D0 e^{-2 alpha t} and the modulus
//
//   D(rho || sigma_eps) >= 2 theta^2 A^2 log(sqrt(a0) / A),
//
// the certified activation a_cert(t) is the local inverse of
// f(x) = x^2 log(C / x) (C = sqrt(a0)) at D0 e^{-2 alpha t} / (2 theta^2).
// Also provides the locality (LC) and coherence-dominance (CD) checks and
// the closed-form windows on which (CD) is guaranteed.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcert/activation.hpp"
#include "bcert/davies.hpp"
#include "bcert/linalg.hpp"

namespace bcert {

struct CertParams {
  double alpha = 0.0;
  double d0 = 0.0;
  double theta = 0.0;
  double a_theta = 0.0;  // theta^-2 - 1
  double a0 = 0.0;
  double delta0 = 0.0;
  double epsilon = 0.0;
  double lambda_star = 0.0;
  Index d_q = 0;

  /// Validates and assembles the parameters. Without an explicit delta0 the
  /// largest radius compatible with the static locality condition is used:
  /// min(delta0 of `local`, a0/2 - lambda_star d_Q), or delta0 of `local`
  /// when that difference is not positive.
  static CertParams make(double alpha, double d0, double theta, const LocalConstants& local,
                         const RegularizedState& reg, Index d_q,
                         std::optional<double> delta0 = std::nullopt);

  /// lambda_star d_Q + delta0 <= a0 / 2.
  bool lc_static_ok() const;
};

struct ConditionFlags {
  std::vector<bool> lc_ok;  // ||rho_t - sigma_eps||_1 <= delta0
  std::vector<bool> cd_ok;  // e^{-kt} eps0 + eps_bar (1 - e^{-kt}) <= A_theta e^{-2 Gamma_max t} c0
  std::vector<double> cd_lhs;
  std::vector<double> cd_rhs;
  bool lc_static_ok = false;
};

/// Evaluates (LC) and (CD) at every time of an annotated trajectory; c0 and
/// eps0 are read from its first point.
ConditionFlags check_conditions(const Trajectory& traj, const CertParams& params,
                                const RateParams& rates, const SecularTable& secular);

/// Left side and right side of (CD) at time t.
std::pair<double, double> cd_sides(const RateParams& rates, double gamma_max, double a_theta,
                                   double c0, double eps0, double t);

/// 2 theta^2 A^2 log(sqrt(a0) / A); zero at A = 0. DomainError for A >= sqrt(a0).
double modulus_lower(double a_func, double theta, double a0);

/// Unique x in [0, C / sqrt(e)] with x^2 log(C / x) = target, by bisection.
/// BranchError when target exceeds C^2 / (2e).
double invert_modulus(double c, double target);

struct CertCurve {
  std::vector<double> times;
  std::vector<double> entropy_bound;  // D0 e^{-2 alpha t}
  std::vector<double> a_cert;         // NaN where off-branch
  std::vector<bool> on_branch;
  std::vector<double> envelope;       // sqrt(2K / (alpha t)) e^{-alpha t}
  double k_const = 0.0;               // K = D0 / (2 theta^2)
  std::optional<double> t0;
  std::optional<double> c_prime;      // max of a_cert sqrt(alpha t) e^{alpha t} on-branch
  std::string diagnostic;             // set when no grid time is on-branch
};

CertCurve certified_curve(const CertParams& params, std::span<const double> times);

struct WindowResult {
  std::optional<double> t_star;
  std::string failed_hypothesis;  // empty when the window exists

  bool empty() const { return !t_star.has_value(); }
};

/// T* = log((A_theta c0 - eps0) / eps_bar) / (2 Gamma_max), under
/// k >= 2 Gamma_max (to relative 1e-12) and A_theta c0 - eps0 > eps_bar, checked in that order.
WindowResult dominance_window(double gamma_max, double k, double a_theta, double c0, double eps0,
                              double eps_bar);

struct LowTemperatureWindow {
  std::optional<double> t_star_lower;
  double eps_bar_upper = 0.0;  // (eta_up / eta) e^{-beta dE}
  std::string failed_hypothesis;

  bool empty() const { return !t_star_lower.has_value(); }
};

/// Lower bound on T* from detailed balance:
/// (beta dE - log((eta_up / eta) / (A_theta c0 - eps0))) / (2 Gamma_max).
LowTemperatureWindow low_temperature_window(double beta, double delta_e, double eta_up, double eta,
                                            double gamma_max, double a_theta, double c0,
                                            double eps0);

/// Detailed-balance quantities of a rate table.
struct LowTemperatureInputs {
  double delta_e = 0.0;  // min E_e - E_p over p in P, e in Q with W_ep != 0
  double eta_up = 0.0;   // max_p sum_e W_pe
  double mu_bound = 0.0; // e^{-beta dE} eta_up, an upper bound for mu
  bool has_transitions = false;
};

LowTemperatureInputs low_temperature_inputs(const DaviesModel& model, const RateParams& rates);

/// |psi><psi| with psi = sqrt(1 - eps0) u + sqrt(eps0) v for unit u in PH, v in QH.
DensityMatrix pure_coherent_state(double eps0, const Vector& u_dir, const Vector& v_dir,
                                  const SupportSplit& split);
/// Same with u, v the first basis vectors of PH and QH.
DensityMatrix pure_coherent_state(double eps0, const SupportSplit& split);

/// Least-squares decay rate alpha from log D(rho_t || sigma_eps) = log D0 - 2 alpha t over
/// points with finite positive entropy. Diagnostic only.
std::optional<double> fit_alpha(std::span<const double> times, std::span<const double> entropies);

}  // namespace bcert
