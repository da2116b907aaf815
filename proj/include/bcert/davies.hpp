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

// Davies generators built from a Hamiltonian spectrum, system couplings and
// a bath rate function:
//
//   L(rho) = -i[H + H_LS, rho]
//            + sum_{alpha, omega} gamma(omega) (A rho A^dag - {A^dag A, rho}/2),
//   A_alpha(omega) = sum_{E_m - E_n = omega} Pi_n S_alpha Pi_m.
//
// The Liouvillian acts on column-stacked vec(rho): vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcert/activation.hpp"
#include "bcert/entropy.hpp"
#include "bcert/linalg.hpp"

namespace bcert {

/// Bath spectral function gamma(omega) >= 0.
class RateModel {
 public:
  enum class Kind { fermi, ohmic, tabulated };

  /// 1 / (1 + exp(-beta omega)); satisfies gamma(-w) = exp(-beta w) gamma(w).
  static RateModel fermi(double beta);
  /// omega / (1 - exp(-beta omega)), with gamma(0) = 1 / beta.
  static RateModel ohmic(double beta);
  /// Piecewise-linear interpolation through (omega, gamma) nodes, constant
  /// beyond the end nodes.
  static RateModel tabulated(std::vector<std::pair<double, double>> nodes);

  double operator()(double omega) const;
  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  std::string name() const;
  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

 private:
  Kind kind_ = Kind::fermi;
  double beta_ = 1.0;
  std::vector<std::pair<double, double>> nodes_;
};

struct DaviesInput {
  RealVector energies;                      // E_m
  Matrix eigenbasis;                        // columns |m>; identity when empty
  std::vector<HermitianMatrix> couplings;   // S_alpha
  double beta = 1.0;
  RateModel rate = RateModel::fermi(1.0);
  std::optional<HermitianMatrix> lamb_shift;  // must commute with H
  std::optional<double> freq_tol;             // default 1e-9 * max|E_m|
};

struct BohrFrequency {
  double omega = 0.0;
  std::vector<std::pair<Index, Index>> pairs;  // (m, n) with E_m - E_n = omega
};

struct LindbladOperator {
  std::size_t coupling = 0;
  double omega = 0.0;
  double rate = 0.0;  // gamma(omega)
  Matrix op;          // A_alpha(omega)
};

/// Immutable generator data; shareable across concurrent evolutions.
struct DaviesModel {
  Index dim = 0;
  RealVector energies;
  Matrix eigenbasis;
  std::vector<HermitianMatrix> couplings;
  double beta = 1.0;
  RateModel rate = RateModel::fermi(1.0);
  HermitianMatrix hamiltonian;
  HermitianMatrix lamb_shift;
  double freq_tol = 0.0;
  std::vector<BohrFrequency> bohr_frequencies;
  std::vector<LindbladOperator> lindblad_ops;
  Matrix liouvillian;  // d^2 x d^2

  /// L(X) for any d x d matrix X.
  Matrix apply(const Matrix& x) const;
  /// |m><n| in the working basis.
  Matrix level_operator(Index m, Index n) const;
  /// Gibbs state exp(-beta H) / Z.
  DensityMatrix gibbs_state() const;
};

/// Classical rate parameters. W(n, m) is the transition rate m -> n.
struct RateParams {
  RealMatrix w;
  double mu = 0.0;
  double eta = 0.0;
  double k = 0.0;
  double eps_bar = 0.0;
  std::vector<Index> p_levels;
  std::vector<Index> q_levels;
};

struct DaviesBuild {
  DaviesModel model;
  RateParams rates;
};

/// Builds the generator and the cross-boundary rate parameters. P and Q must
/// be unions of energy eigenspaces.
DaviesBuild build_davies(const DaviesInput& input, const SupportSplit& split);

/// Indices of the energy levels lying in PH and QH; throws when a level is
/// split between them or a degenerate eigenspace straddles the boundary.
std::pair<std::vector<Index>, std::vector<Index>> boundary_levels(const DaviesModel& model,
                                                                  const SupportSplit& split);

struct SecularTable {
  std::vector<Index> p_levels;
  std::vector<Index> q_levels;
  RealMatrix gamma_pe;   // rows p, cols e
  RealMatrix omega_pe;   // E_p - E_e
  RealMatrix residuals;  // ||L(|p><e|) + (Gamma + i omega)|p><e|||_F
  double gamma_max = 0.0;
  double max_residual = 0.0;
  bool distinct_ok = false;
  bool secular_ok = false;  // max_residual <= tol

  bool ok() const { return distinct_ok && secular_ok; }
};

/// Extracts the eigenvalue -Gamma_pe - i omega_pe of every cross coherence
/// |p><e| by projection and records how far |p><e| is from an eigenoperator.
SecularTable verify_secular(const DaviesModel& model, const SupportSplit& split, double tol = 1e-9,
                            std::optional<double> freq_tol = std::nullopt);

struct TrajectoryPoint {
  ActivationReport activation;
  double trace_dist = 0.0;          // ||rho_t - sigma_eps||_1
  ExtendedReal rel_entropy = 0.0;   // D(rho_t || sigma_eps)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<TrajectoryPoint> points;  // filled by annotate()
};

enum class EvolutionMethod { automatic, spectral, scaling_squaring };

/// Applies e^{tL} for a fixed generator. The spectral route diagonalizes L
/// once; scaling-and-squaring exponentiates t L per call.
class Propagator {
 public:
  Propagator(const Matrix& liouvillian, EvolutionMethod method = EvolutionMethod::automatic);

  /// e^{tL} applied to X.
  Matrix apply(double t, const Matrix& x) const;
  EvolutionMethod method() const { return method_; }
  /// Largest real part in the spectrum of L.
  double spectral_abscissa() const { return abscissa_; }

 private:
  Index dim_ = 0;
  Matrix liouvillian_;
  EvolutionMethod method_;
  Eigen::VectorXcd eigenvalues_;
  Matrix eigenvectors_;
  Eigen::PartialPivLU<Matrix> lu_;
  double abscissa_ = 0.0;
};

/// rho_t for every t in `times` (ascending, times[0] = 0). States are
/// re-symmetrized; eigenvalues in [-1e-8, 0) are clipped and renormalized.
Trajectory evolve(const DaviesModel& model, const DensityMatrix& rho0, std::span<const double> times,
                  EvolutionMethod method = EvolutionMethod::automatic);

/// Fills per-time activation, trace distance and relative entropy against sigma_eps.
void annotate(Trajectory& traj, const SupportSplit& split, const DensityMatrix& sigma_eps);

struct DynamicalBounds {
  double c_lower = 0.0;
  double eps_q_upper = 0.0;
  double r2_lower = 0.0;
};

/// c(rho_t) >= e^{-2 Gamma_max t} c0, eps_Q(rho_t) <= e^{-kt} eps0 + eps_bar (1 - e^{-kt})
/// and the induced ratio bound.
DynamicalBounds dynamical_bounds(const RateParams& rates, const SecularTable& secular, double c0,
                                 double eps0, double t);

}  // namespace bcert
