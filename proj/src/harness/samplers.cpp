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

#include "bcert/harness/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bcert::harness {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

// Density matrix on C^n mixed towards I/n so that it is well conditioned.
Matrix conditioned_density(Index n, Rng& rng, double mix) {
  const Matrix g = random_ginibre(n, n, rng);
  Matrix t = g * g.adjoint();
  t /= t.trace().real();
  return (1.0 - mix) * t + (mix / static_cast<double>(n)) * Matrix::Identity(n, n);
}

Matrix psd_sqrt(const Matrix& m) {
  return matrix_sqrt(HermitianMatrix(Matrix(0.5 * (m + m.adjoint())))).matrix();
}

}  // namespace

SupportSplit random_split(Index dim, Index r, Rng& rng) {
  if (r < 1 || r >= dim) throw ValidationError("random_split: need 1 <= r < dim");
  const Matrix u = random_unitary(dim, rng);
  return split_from_bases(u.leftCols(r), u.rightCols(dim - r));
}

DensityMatrix random_block_diagonal(const SupportSplit& split, Rng& rng) {
  const double wp = uniform(rng, 0.2, 0.8);
  Matrix blocks = Matrix::Zero(split.dim(), split.dim());
  blocks.topLeftCorner(split.r, split.r) = wp * conditioned_density(split.r, rng, 0.2);
  if (split.d_q > 0) {
    blocks.bottomRightCorner(split.d_q, split.d_q) = (1.0 - wp) * conditioned_density(split.d_q, rng, 0.2);
  }
  const Matrix v = split.basis();
  return DensityMatrix(Matrix(v * blocks * v.adjoint()));
}

DensityMatrix random_block_diagonal(const std::vector<Matrix>& projectors, Rng& rng) {
  std::vector<double> w;
  for (std::size_t i = 0; i < projectors.size(); ++i) w.push_back(uniform(rng, 0.2, 1.0));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const Index d = projectors.front().rows();
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    // Sandwich a random state by the projector, then renormalize the block.
    const Matrix blk = projectors[i] * conditioned_density(d, rng, 0.2) * projectors[i];
    out += (w[i] / total) * blk / blk.trace().real();
  }
  return DensityMatrix(out);
}

DensityMatrix sample_regime_state(const SupportSplit& split, double a0, double eps_max, Rng& rng) {
  const Index r = split.r, dq = split.d_q;
  if (r < 1 || dq < 1) throw ValidationError("sample_regime_state: both blocks must be nonzero");
  if (!(a0 > 0.0)) throw ValidationError("sample_regime_state: a0 must be positive");
  if (!(eps_max > 0.0 && eps_max <= 0.5 * a0)) {
    throw ValidationError("sample_regime_state: need 0 < eps_max <= a0 / 2");
  }
  if (static_cast<double>(r) * a0 + eps_max >= 1.0) {
    throw ValidationError("sample_regime_state: r a0 + eps_max must stay below 1");
  }
  const Matrix v = split.basis();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double eps_q = eps_max * std::pow(10.0, -3.0 * uniform(rng, 0.0, 1.0));
    const Matrix a = a0 * Matrix::Identity(r, r) +
                     (1.0 - eps_q - static_cast<double>(r) * a0) * conditioned_density(r, rng, 0.1);
    const Matrix c = eps_q * conditioned_density(dq, rng, 0.1);
    const Vector x = random_unit_vector(r, rng);
    const Vector y = random_unit_vector(dq, rng);
    const double kappa = uniform(rng, 0.05, 0.95);
    const Matrix b = kappa * psd_sqrt(a) * x * y.adjoint() * psd_sqrt(c);
    Matrix blocks(r + dq, r + dq);
    blocks.topLeftCorner(r, r) = a;
    blocks.topRightCorner(r, dq) = b;
    blocks.bottomLeftCorner(dq, r) = b.adjoint();
    blocks.bottomRightCorner(dq, dq) = c;
    const Matrix m = v * blocks * v.adjoint();
    const HermitianMatrix h(Matrix(0.5 * (m + m.adjoint())));
    if (min_eigenvalue(h) < 0.0) continue;
    const DensityMatrix rho(h);
    const BlockDecomposition bd = block_decompose(rho.hermitian(), split);
    const ActivationReport act = activation(rho, split);
    if (min_eigenvalue(HermitianMatrix(bd.a)) < a0) continue;
    if (!(act.eps_q > 0.0 && act.eps_q <= eps_max)) continue;
    if (!(act.c > 0.0)) continue;
    return rho;
  }
  std::ostringstream os;
  os << "sample_regime_state: 10^4 rejections (r = " << r << ", d_Q = " << dq << ", a0 = " << a0
     << ", eps_max = " << eps_max << ")";
  throw ValidationError(os.str());
}

DensityMatrix sample_regime_state(const SupportSplit& split, double a0, double eps_max,
                                  std::uint64_t seed) {
  Rng rng(seed);
  return sample_regime_state(split, a0, eps_max, rng);
}

HierarchyInstance sample_geometric_hierarchy(Index sectors, Rng& rng, double q) {
  if (sectors < 2) throw ValidationError("sample_geometric_hierarchy: need at least two sectors");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("sample_geometric_hierarchy: q must lie in (0, 1)");
  std::vector<Index> dims;
  for (Index k = 0; k < sectors; ++k) dims.push_back(uniform_index(rng, 1, 2));
  const Index d = std::accumulate(dims.begin(), dims.end(), Index{0});
  std::vector<double> w;
  for (Index k = 0; k < sectors; ++k) w.push_back(std::pow(q, static_cast<double>(k)));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  HierarchyInstance inst;
  inst.q = q;
  Matrix g = Matrix::Zero(d, d);
  Matrix sigma = Matrix::Zero(d, d);
  std::vector<std::pair<Index, Index>> ranges;
  Index off = 0;
  for (Index k = 0; k < sectors; ++k) {
    const Index n = dims[static_cast<std::size_t>(k)];
    const double wk = w[static_cast<std::size_t>(k)] / total;
    const Matrix dk = wk * conditioned_density(n, rng, 0.9);
    g.block(off, off, n, n) = psd_sqrt(dk);
    sigma.block(off, off, n, n) = wk * conditioned_density(n, rng, 0.5);
    Matrix p = Matrix::Zero(d, d);
    p.block(off, off, n, n) = Matrix::Identity(n, n);
    inst.projectors.push_back(p);
    ranges.emplace_back(off, n);
    off += n;
  }
  Matrix h = random_hermitian(d, rng).matrix();
  for (const auto& [o, n] : ranges) h.block(o, o, n, n).setZero();
  const double op = eig_hermitian(HermitianMatrix(h)).eigenvalues.cwiseAbs().maxCoeff();
  if (op > 0.0) h /= op;
  inst.kappa = uniform(rng, 0.1, 0.5);
  const Matrix rho = g * (Matrix::Identity(d, d) + inst.kappa * h) * g;
  inst.rho = DensityMatrix(Matrix(rho / rho.trace().real()));
  inst.sigma = DensityMatrix(sigma);
  return inst;
}

Scenario random_secular_scenario(Index dim, Rng& rng) {
  if (dim < 2) throw ValidationError("random_secular_scenario: need dim >= 2");
  Scenario s;
  s.name = "random-secular";
  // Generic spacings in [0.5, 1.5]; Bohr frequencies are distinct with probability one.
  s.energies = RealVector(dim);
  double e = 0.0;
  for (Index i = 0; i < dim; ++i) {
    s.energies(i) = e;
    e += uniform(rng, 0.5, 1.5);
  }
  const Index ncoup = uniform_index(rng, 1, 2);
  for (Index a = 0; a < ncoup; ++a) {
    Matrix c = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < i; ++j) {
        const double x = uniform(rng, -1.0, 1.0);
        c(i, j) = x;
        c(j, i) = x;
      }
      c(i, i) = uniform(rng, -0.5, 0.5);
    }
    s.couplings.push_back(c);
  }
  s.beta = uniform(rng, 0.5, 4.0);
  // Support on the lowest levels.
  const Index r = uniform_index(rng, 1, dim - 1);
  for (Index l = 0; l < r; ++l) s.support_levels.push_back(l);
  s.initial_state.kind = InitialStateSpec::Kind::pure_coherent;
  s.initial_state.eps0 = uniform(rng, 0.01, 0.5);
  // Random directions inside PH and QH so that several coherence modes are populated.
  const Vector up = random_unit_vector(r, rng);
  const Vector vq = random_unit_vector(dim - r, rng);
  Vector u = Vector::Zero(dim), v = Vector::Zero(dim);
  u.head(r) = up;
  v.tail(dim - r) = vq;
  s.initial_state.u = u;
  s.initial_state.v = v;
  s.theta = uniform(rng, 0.2, 0.6);
  s.alpha = 0.1;
  s.seed = rng();
  return s;
}

}  // namespace bcert::harness
