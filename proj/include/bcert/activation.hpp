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

// Boundary geometry of a rank-deficient reference state sigma: the support
// split P (+) Q, the regularized state sigma_eps = (1 - eps) sigma + (eps/d) I,
// the 2x2 block decomposition of a state relative to the split, the
// activation functional and the coherence coercivity bound
//
//   D(rho || pinch(rho)) >= c(rho) log(a0 / eps_Q(rho)),
//
// valid when lambda_min(P rho P) >= a0 on PH and eps_Q(rho) <= a0 / 2.

#pragma once

#include <optional>
#include <vector>

#include "bcert/entropy.hpp"
#include "bcert/linalg.hpp"

namespace bcert {

/// Orthogonal decomposition H = PH (+) QH with orthonormal bases for both
/// ranges. basis_p spans PH, basis_q spans QH.
struct SupportSplit {
  Matrix p;
  Matrix q;
  Matrix basis_p;  // d x r
  Matrix basis_q;  // d x d_q
  Index r = 0;
  Index d_q = 0;

  Index dim() const { return p.rows(); }
  /// [basis_p basis_q], a unitary adapted to P (+) Q.
  Matrix basis() const;
  PinchingSpec pinching() const { return PinchingSpec::two_block(p); }
};

/// Split whose P spans the eigenvectors of sigma with eigenvalue > supp_tol,
/// ordered by descending eigenvalue.
SupportSplit split_from_sigma(const DensityMatrix& sigma, std::optional<double> supp_tol = std::nullopt);

/// Split from explicit orthonormal bases of PH and QH (together a basis of H).
SupportSplit split_from_bases(const Matrix& basis_p, const Matrix& basis_q);

/// Split whose P is spanned by the listed columns of a unitary eigenbasis.
SupportSplit split_from_levels(const Matrix& eigenbasis, const std::vector<Index>& support_levels);

struct RegularizedState {
  DensityMatrix sigma_eps;
  double epsilon = 0.0;
  double lambda_star = 0.0;  // epsilon / d
};

/// sigma_eps = (1 - epsilon) sigma + (epsilon / d) I for rank-deficient sigma.
RegularizedState regularize(const DensityMatrix& sigma, double epsilon,
                            std::optional<double> supp_tol = std::nullopt);

struct BlockDecomposition {
  Matrix a;  // r x r, P rho P in basis_p coordinates
  Matrix b;  // r x d_q, P rho Q
  Matrix c;  // d_q x d_q, Q rho Q

  /// Rebuilds the full operator in the original basis.
  Matrix reassemble(const SupportSplit& split) const;
};

BlockDecomposition block_decompose(const HermitianMatrix& rho, const SupportSplit& split);

struct ActivationReport {
  double c = 0.0;       // ||P rho Q||_2^2
  double eps_q = 0.0;   // Tr(Q rho Q)
  double a_func = 0.0;  // sqrt(c + eps_q)
  double r2 = 0.0;      // c / (c + eps_q), or 0
};

ActivationReport activation(const DensityMatrix& rho, const SupportSplit& split);

struct LocalConstants {
  double a0 = 0.0;
  double delta0 = 0.0;
};

/// a0 = lambda_min(P sigma_eps P on PH) / 2 and delta0 = a0.
LocalConstants local_constants(const RegularizedState& reg, const SupportSplit& split);

/// One 2x2 block of the SVD reduction: M_j = [[a, s], [s, c]] against
/// D_j = diag(a, c) on span{u_j, v_j}.
struct SvdBlock {
  double a = 0.0;
  double c = 0.0;
  double s = 0.0;
  ExtendedReal entropy = 0.0;  // D(M_j || D_j)
};

struct CoercivityResult {
  /// c log(a0 / eps_Q) inside the regime, 0 when c == 0, empty otherwise.
  std::optional<double> bound;
  bool regime_ok = false;
  double lambda_min_a = 0.0;
  ActivationReport activation;
  std::vector<SvdBlock> svd_blocks;

  /// sum_j D(M_j || D_j).
  ExtendedReal block_entropy_sum() const;
};

/// Coherence coercivity bound together with the SVD block data used to
/// derive it. regime_ok reports lambda_min(P rho P) >= a0 and eps_Q <= a0/2.
CoercivityResult bkm_coercivity(const DensityMatrix& rho, const SupportSplit& split, double a0);

/// Same reduction for an arbitrary off-diagonal block: the 2x2 SVD blocks of
/// `b` against compressions `a`, `c`.
std::vector<SvdBlock> svd_blocks(const Matrix& a, const Matrix& b, const Matrix& c);

}  // namespace bcert
