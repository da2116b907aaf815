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

#include "bcert/activation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bcert {

namespace {

constexpr double kBasisTol = 1e-11;
// Singular values below this are dropped from the SVD reduction.
constexpr double kSingularFloor = 1e-12;

}  // namespace

Matrix SupportSplit::basis() const {
  Matrix v(basis_p.rows(), r + d_q);
  v << basis_p, basis_q;
  return v;
}

SupportSplit split_from_bases(const Matrix& basis_p, const Matrix& basis_q) {
  const Index d = basis_p.rows();
  if (basis_q.rows() != d) throw ValidationError("SupportSplit: basis row counts differ");
  if (basis_p.cols() + basis_q.cols() != d) {
    throw ValidationError("SupportSplit: bases do not span the full space");
  }
  SupportSplit s;
  s.basis_p = basis_p;
  s.basis_q = basis_q;
  s.r = basis_p.cols();
  s.d_q = basis_q.cols();
  const Matrix v = s.basis();
  if ((v.adjoint() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kBasisTol) {
    throw ValidationError("SupportSplit: combined basis is not orthonormal");
  }
  s.p = basis_p * basis_p.adjoint();
  s.q = basis_q * basis_q.adjoint();
  return s;
}

SupportSplit split_from_sigma(const DensityMatrix& sigma, std::optional<double> supp_tol) {
  const double tol = supp_tol.value_or(default_support_tolerance(sigma.dim()));
  const SpectralDecomposition ed = eig_hermitian(sigma.hermitian());
  const Index d = sigma.dim();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  // Descending eigenvalue; ties keep the solver's order.
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return ed.eigenvalues(i) > ed.eigenvalues(j); });
  std::vector<Index> in_p, in_q;
  for (Index k : order) (ed.eigenvalues(k) > tol ? in_p : in_q).push_back(k);
  Matrix bp(d, static_cast<Index>(in_p.size()));
  Matrix bq(d, static_cast<Index>(in_q.size()));
  for (std::size_t i = 0; i < in_p.size(); ++i) bp.col(static_cast<Index>(i)) = ed.eigenvectors.col(in_p[i]);
  for (std::size_t i = 0; i < in_q.size(); ++i) bq.col(static_cast<Index>(i)) = ed.eigenvectors.col(in_q[i]);
  return split_from_bases(bp, bq);
}

SupportSplit split_from_levels(const Matrix& eigenbasis, const std::vector<Index>& support_levels) {
  const Index d = eigenbasis.rows();
  std::vector<bool> in_p(static_cast<std::size_t>(d), false);
  for (Index l : support_levels) {
    if (l < 0 || l >= d) throw ValidationError("split_from_levels: level index out of range");
    if (in_p[static_cast<std::size_t>(l)]) throw ValidationError("split_from_levels: repeated level");
    in_p[static_cast<std::size_t>(l)] = true;
  }
  Matrix bp(d, static_cast<Index>(support_levels.size()));
  Matrix bq(d, d - static_cast<Index>(support_levels.size()));
  Index ip = 0, iq = 0;
  for (Index l = 0; l < d; ++l) {
    if (in_p[static_cast<std::size_t>(l)]) {
      bp.col(ip++) = eigenbasis.col(l);
    } else {
      bq.col(iq++) = eigenbasis.col(l);
    }
  }
  return split_from_bases(bp, bq);
}

RegularizedState regularize(const DensityMatrix& sigma, double epsilon,
                            std::optional<double> supp_tol) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("regularize: epsilon must lie in (0, 1)");
  }
  const Index d = sigma.dim();
  const double tol = supp_tol.value_or(default_support_tolerance(d));
  if (min_eigenvalue(sigma.hermitian()) > tol) {
    throw ValidationError("regularize: sigma is full rank; the boundary regime needs rank < d");
  }
  const double lambda_star = epsilon / static_cast<double>(d);
  Matrix m = (1.0 - epsilon) * sigma.matrix();
  m.diagonal().array() += lambda_star;
  return {DensityMatrix(m), epsilon, lambda_star};
}

Matrix BlockDecomposition::reassemble(const SupportSplit& split) const {
  const Index d = split.dim();
  Matrix blocks(d, d);
  blocks.topLeftCorner(split.r, split.r) = a;
  blocks.topRightCorner(split.r, split.d_q) = b;
  blocks.bottomLeftCorner(split.d_q, split.r) = b.adjoint();
  blocks.bottomRightCorner(split.d_q, split.d_q) = c;
  const Matrix v = split.basis();
  return v * blocks * v.adjoint();
}

BlockDecomposition block_decompose(const HermitianMatrix& rho, const SupportSplit& split) {
  if (rho.dim() != split.dim()) throw ValidationError("block_decompose: dimension mismatch");
  const Matrix& m = rho.matrix();
  return {split.basis_p.adjoint() * m * split.basis_p, split.basis_p.adjoint() * m * split.basis_q,
          split.basis_q.adjoint() * m * split.basis_q};
}

ActivationReport activation(const DensityMatrix& rho, const SupportSplit& split) {
  const BlockDecomposition blocks = block_decompose(rho.hermitian(), split);
  ActivationReport rep;
  rep.c = blocks.b.squaredNorm();
  rep.eps_q = std::clamp(blocks.c.trace().real(), 0.0, 1.0);
  const double total = rep.c + rep.eps_q;
  rep.a_func = std::sqrt(total);
  rep.r2 = total > 0.0 ? rep.c / total : 0.0;
  return rep;
}

LocalConstants local_constants(const RegularizedState& reg, const SupportSplit& split) {
  if (split.r < 1) throw ValidationError("local_constants: empty support");
  const double lmin = min_eigenvalue(compress(reg.sigma_eps.hermitian(), split.basis_p));
  return {0.5 * lmin, 0.5 * lmin};
}

std::vector<SvdBlock> svd_blocks(const Matrix& a, const Matrix& b, const Matrix& c) {
  std::vector<SvdBlock> out;
  if (b.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  for (Index j = 0; j < sv.size(); ++j) {
    if (sv(j) < kSingularFloor) continue;
    const Vector u = svd.matrixU().col(j);
    const Vector v = svd.matrixV().col(j);
    SvdBlock blk;
    blk.s = sv(j);
    blk.a = (u.adjoint() * a * u)(0, 0).real();
    blk.c = (v.adjoint() * c * v)(0, 0).real();
    Matrix mj(2, 2), dj = Matrix::Zero(2, 2);
    mj << blk.a, blk.s, blk.s, blk.c;
    dj(0, 0) = blk.a;
    dj(1, 1) = blk.c;
    blk.entropy = relative_entropy_psd(HermitianMatrix(mj), HermitianMatrix(dj));
    out.push_back(blk);
  }
  return out;
}

ExtendedReal CoercivityResult::block_entropy_sum() const {
  double s = 0.0;
  for (const SvdBlock& b : svd_blocks) {
    if (b.entropy.is_infinite()) return ExtendedReal::infinity();
    s += b.entropy.value();
  }
  return s;
}

CoercivityResult bkm_coercivity(const DensityMatrix& rho, const SupportSplit& split, double a0) {
  if (split.r < 1) throw ValidationError("bkm_coercivity: empty support");
  if (!(a0 > 0.0)) throw ValidationError("bkm_coercivity: a0 must be positive");
  const BlockDecomposition blocks = block_decompose(rho.hermitian(), split);
  CoercivityResult res;
  res.activation = activation(rho, split);
  res.lambda_min_a = min_eigenvalue(HermitianMatrix(blocks.a));
  res.svd_blocks = svd_blocks(blocks.a, blocks.b, blocks.c);
  const double c = res.activation.c;
  const double eps_q = res.activation.eps_q;
  res.regime_ok = res.lambda_min_a >= a0 - 1e-12 && eps_q <= 0.5 * a0 && !(eps_q <= 0.0 && c > 0.0);
  if (c == 0.0) {
    res.bound = 0.0;
  } else if (res.regime_ok) {
    res.bound = c * std::log(a0 / eps_q);
  }
  return res;
}

}  // namespace bcert
