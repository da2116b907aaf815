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

// Quantum-information functionals: relative entropy with support handling,
// pinching channels, coherence entropy, fidelity, the log-mean kernel and the
// Bogoliubov-Kubo-Mori (BKM) form together with its Taylor-remainder integral.
// All logarithms are natural.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcert/linalg.hpp"

namespace bcert {

/// A real number or +infinity. Infinity is a tag, never a sentinel float.
class ExtendedReal {
 public:
  constexpr ExtendedReal(double v) : value_(v), infinite_(false) {}  // NOLINT
  static constexpr ExtendedReal infinity() { return ExtendedReal(); }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }
  /// Finite value; throws DomainError on infinity.
  double value() const;
  constexpr double value_or(double fallback) const { return infinite_ ? fallback : value_; }

  /// this >= bound - slack.
  constexpr bool at_least(double bound, double slack = 0.0) const {
    return infinite_ || value_ >= bound - slack;
  }
  /// this <= bound + slack.
  constexpr bool at_most(double bound, double slack = 0.0) const {
    return !infinite_ && value_ <= bound + slack;
  }

  std::string to_string() const;

 private:
  constexpr ExtendedReal() : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_;
};

/// Mutually orthogonal projectors summing to the identity.
class PinchingSpec {
 public:
  /// Validates P_i P_j = 0 (i != j), P_i^2 = P_i and sum P_i = I within 1e-11.
  explicit PinchingSpec(std::vector<Matrix> projectors);
  /// The two-block family {P, I - P}.
  static PinchingSpec two_block(const Matrix& p);

  const std::vector<Matrix>& projectors() const { return projectors_; }
  Index dim() const { return projectors_.front().rows(); }
  std::size_t size() const { return projectors_.size(); }

  /// sum_i P_i X P_i for any square matrix X.
  Matrix apply(const Matrix& x) const;
  /// True when X equals its pinching within tol (max-entry norm).
  bool is_fixed_point(const Matrix& x, double tol) const;

 private:
  std::vector<Matrix> projectors_;
};

/// Default support tolerance: 1e-10 * dim.
double default_support_tolerance(Index dim);

/// D(rho||sigma) = Tr[rho (log rho - log sigma)] on supp(sigma). Returns
/// infinity when rho puts weight > supp_tol outside supp(sigma).
ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              std::optional<double> supp_tol = std::nullopt);

/// Tr[X (log X - log Y)] for PSD X, Y that need not have unit trace; used for
/// per-block divergences D(M_j||D_j).
ExtendedReal relative_entropy_psd(const HermitianMatrix& x, const HermitianMatrix& y,
                                  std::optional<double> supp_tol = std::nullopt);

/// Tr[X log X] with 0 log 0 = 0.
double trace_x_log_x(const HermitianMatrix& x);

DensityMatrix pinch(const DensityMatrix& rho, const PinchingSpec& spec);

/// D(rho || pinch(rho)) = Tr[rho log rho] - Tr[pinch(rho) log pinch(rho)].
ExtendedReal coherence_entropy(const DensityMatrix& rho, const PinchingSpec& spec);

/// Root fidelity Tr sqrt(sqrt(X) Y sqrt(X)) for PSD X, Y; F(X, X) = Tr X.
/// Computed as the sum of singular values of sqrt(X) sqrt(Y).
double fidelity(const HermitianMatrix& x, const HermitianMatrix& y);

/// (Tr X + Tr Y) / 2 - F(X, Y), evaluated as min_V ||sqrt(X) - sqrt(Y) V||_F^2 / 2
/// so that it keeps full relative accuracy when X and Y nearly coincide.
double bures_defect(const HermitianMatrix& x, const HermitianMatrix& y);

/// Log-mean kernel L(x, y) = (log x - log y)/(x - y), L(x, x) = 1/x.
double log_mean(double x, double y);

/// H_M(Y, Y) = sum_ij |<i|Y|j>|^2 L(lambda_i, lambda_j) in the eigenbasis of M.
double bkm_form(const HermitianMatrix& m, const HermitianMatrix& y);

struct QuadratureStats {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// int_0^1 (1 - t) H_{D0 + tY}(Y, Y) dt by adaptive Gauss-Kronrod (7/15)
/// refinement to relative tolerance rel_tol, capped at 2^14 integrand
/// evaluations. D0 must be diagonal and positive definite and D0 + Y PSD.
double bkm_integral(const HermitianMatrix& d0, const HermitianMatrix& y, double rel_tol = 1e-8);
QuadratureStats bkm_integral_stats(const HermitianMatrix& d0, const HermitianMatrix& y,
                                   double rel_tol = 1e-8);

/// D(rho||sigma) - ||rho - sigma||_1^2 / 2; infinite when the entropy is.
ExtendedReal pinsker_gap(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace bcert
