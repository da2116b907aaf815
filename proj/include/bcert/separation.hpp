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

// Coherence/population separation of relative entropy against a
// block-diagonal reference, its ordered multi-sector version built from a
// chain of two-block pinchings, the Petz recovery map of the pinching
// channel, and the comparison of the coherence bound with the
// fidelity-of-recovery remainder -2 log F(rho, R(pinch(rho))).

#pragma once

#include <optional>
#include <vector>

#include "bcert/activation.hpp"
#include "bcert/entropy.hpp"
#include "bcert/linalg.hpp"

namespace bcert {

struct CpsReport {
  ExtendedReal d_total = 0.0;  // D(rho || sigma)
  ExtendedReal d_coh = 0.0;    // D(rho || pinch(rho))
  ExtendedReal d_pop = 0.0;    // D(pinch(rho) || sigma)
  double residual = 0.0;       // |d_total - d_coh - d_pop|; NaN unless all finite
  std::optional<double> coercivity_bound;
  bool regime_ok = false;
};

/// D(rho || sigma) = D(rho || pinch(rho)) + D(pinch(rho) || sigma) with each
/// term computed independently. sigma must be block diagonal for the split.
CpsReport cps_decompose(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const SupportSplit& split, double a0);

/// rho^(K) = rho, rho^(m-1) = E_m(rho^(m)) with E_m(X) = P_m X P_m + (I - P_m) X (I - P_m).
/// Per-step vectors are indexed by m - 2 for m = 2..K.
struct SectorChain {
  std::vector<Matrix> projectors;         // P_1..P_K
  std::vector<DensityMatrix> states;      // states[m - 1] = rho^(m), m = 1..K
  std::vector<double> c_m;                // ||(I - P_m) rho^(m) P_m||_2^2
  std::vector<double> c_m_direct;         // sum_{i<m} ||P_i rho P_m||_2^2
  std::vector<double> block_residual;     // ||(I - P_m) rho^(m) P_m - sum_{i<m} P_i rho P_m||_F
  std::vector<double> a_m;                // lambda_min of rho^(m) on ran(I - P_m)
  std::vector<double> a_active;           // lambda_min of rho on ran(P_1 + ... + P_{m-1})
  std::vector<double> eps_m;              // Tr(P_m rho P_m)
  std::vector<bool> conditions_ok;        // a_m > 0 and eps_m <= a_m / 2
  std::vector<bool> active_conditions_ok; // same with a_active

  std::size_t sectors() const { return projectors.size(); }
};

SectorChain sequential_pinch_chain(const DensityMatrix& rho, const std::vector<Matrix>& projectors);

struct MultiSectorBound {
  /// sum_m C_m log(a_active_m / eps_m) + D(Pi_K rho || sigma).
  double bound = 0.0;
  bool applicable = false;
  /// Same with the full-complement constants a_m.
  std::optional<double> literal_bound;
  bool literal_applicable = false;
  ExtendedReal d_total = 0.0;                // D(rho || sigma)
  ExtendedReal d_pop = 0.0;                  // D(Pi_K rho || sigma)
  std::vector<ExtendedReal> step_entropies;  // D(rho^(m) || rho^(m-1))
  double telescoping_residual = 0.0;         // |D(rho || Pi_K rho) - sum_m step entropies|
};

MultiSectorBound multi_sector_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const SectorChain& chain);

/// sigma^{1/2} pinch(sigma^{-1/2} X sigma^{-1/2}) sigma^{1/2} for faithful block-diagonal sigma.
HermitianMatrix petz_recovery(const DensityMatrix& sigma, const SupportSplit& split,
                              const HermitianMatrix& x);

struct FrReport {
  double ours = 0.0;          // c log(a0 / eps_Q)
  double fr_remainder = 0.0;  // -2 log F(rho, R(pinch(rho)))
  ExtendedReal ratio = 0.0;   // ours / fr_remainder; infinite when the remainder is <= 1e-14
  bool in_class = false;      // eps_Q <= a0 e^{-4 / a0}
  double ratio_floor = 0.0;   // a0 log(a0 / eps_Q) / 4
  double class_threshold = 0.0;
  double fidelity = 0.0;      // F(rho, R(pinch(rho)))
  double fidelity_defect = 0.0;  // 1 - F, computed directly
  double c = 0.0;
  double eps_q = 0.0;
};

/// a0 e^{-4 / a0}.
double near_boundary_threshold(double a0);

/// Requires lambda_min(P rho P) >= a0 on PH.
FrReport fr_compare(const DensityMatrix& rho, const DensityMatrix& sigma, const SupportSplit& split,
                    double a0);

/// Orthonormal basis of the range of an orthogonal projector.
Matrix projector_range(const Matrix& p);

}  // namespace bcert
