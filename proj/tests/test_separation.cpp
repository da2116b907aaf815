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


#include <cmath>
#include <vector>

#include "doctest.h"

#include "bcert/harness/samplers.hpp"
#include "bcert/separation.hpp"

using namespace bcert;

namespace {

Matrix diag_projector(Index d, std::initializer_list<Index> levels) {
  Matrix p = Matrix::Zero(d, d);
  for (Index l : levels) p(l, l) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("projector_range spans the projector") {
  const Matrix p = diag_projector(4, {1, 3});
  const Matrix w = projector_range(p);
  CHECK(w.cols() == 2);
  CHECK((w * w.adjoint() - p).norm() < 1e-14);
}

TEST_CASE("two-block separation identity on random pairs") {
  Rng rng(61);
  for (int t = 0; t < 200; ++t) {
    const Index d = 3 + t % 6;
    const SupportSplit split = harness::random_split(d, 1 + t % (d - 1), rng);
    const DensityMatrix rho = random_density(d, 1 + t % d, rng);
    const DensityMatrix sigma = harness::random_block_diagonal(split, rng);
    const CpsReport rep = cps_decompose(rho, sigma, split, 0.1);
    CHECK(rep.residual <= 1e-9);
  }
}

TEST_CASE("separation requires a block-diagonal reference") {
  const SupportSplit split = split_from_levels(Matrix::Identity(3, 3), {0});
  Vector plus = Vector::Ones(3);
  const DensityMatrix coherent = DensityMatrix::pure(plus);
  const DensityMatrix mixed(Matrix(0.5 * coherent.matrix() + 0.5 * DensityMatrix::maximally_mixed(3).matrix()));
  CHECK_THROWS_AS(cps_decompose(coherent, mixed, split, 0.1), ValidationError);
  CHECK_THROWS_AS(petz_recovery(mixed, split, coherent), ValidationError);
  Vector e0 = Vector::Zero(3);
  e0(0) = 1.0;
  CHECK_THROWS_AS(petz_recovery(DensityMatrix::pure(e0), split, coherent), DomainError);
}

TEST_CASE("sequential pinching chain identities for K = 3, 4") {
  Rng rng(62);
  for (int t = 0; t < 100; ++t) {
    const Index k = 3 + t % 2;
    const Index d = k + t % 3;
    const Matrix u = random_unitary(d, rng);
    std::vector<Matrix> family;
    Index col = 0;
    for (Index s = 0; s < k; ++s) {
      const Index size = s == k - 1 ? d - col : 1;
      family.push_back(u.middleCols(col, size) * u.middleCols(col, size).adjoint());
      col += size;
    }
    const DensityMatrix rho = random_density(d, d, rng);
    const SectorChain ch = sequential_pinch_chain(rho, family);
    REQUIRE(ch.c_m.size() == static_cast<std::size_t>(k - 1));
    for (std::size_t i = 0; i < ch.c_m.size(); ++i) {
      CHECK(std::abs(ch.c_m[i] - ch.c_m_direct[i]) <= 1e-11);
      CHECK(ch.block_residual[i] <= 1e-11);
    }
    // The first state of the chain is the full pinching.
    CHECK((ch.states.front().matrix() - PinchingSpec(family).apply(rho.matrix())).norm() < 1e-12);
    const DensityMatrix sigma = harness::random_block_diagonal(family, rng);
    CHECK(multi_sector_bound(rho, sigma, ch).telescoping_residual <= 1e-9);
  }
  CHECK_THROWS_AS(sequential_pinch_chain(DensityMatrix::maximally_mixed(2), {Matrix(Matrix::Identity(2, 2))}),
                  ValidationError);
}

TEST_CASE("multi-sector bound on geometric hierarchies") {
  Rng rng(63);
  for (int t = 0; t < 100; ++t) {
    const Index k = 2 + t % 3;
    const harness::HierarchyInstance h = harness::sample_geometric_hierarchy(k, rng);
    const SectorChain ch = sequential_pinch_chain(h.rho, h.projectors);
    const MultiSectorBound mb = multi_sector_bound(h.rho, h.sigma, ch);
    REQUIRE(mb.applicable);
    CHECK(mb.d_total.value() >= mb.bound - 1e-9);
  }
}

TEST_CASE("with three or more sectors the complement constants make the literal conditions fail") {
  // a_m is taken on ran(I - P_m), which contains the later, lightly weighted
  // sectors, so eps_m <= a_m / 2 cannot hold for the middle sectors of a
  // geometric hierarchy. The bound with constants on the earlier sectors applies.
  Rng rng(64);
  int literal = 0;
  for (int t = 0; t < 50; ++t) {
    const harness::HierarchyInstance h = harness::sample_geometric_hierarchy(3 + t % 2, rng);
    const SectorChain ch = sequential_pinch_chain(h.rho, h.projectors);
    const MultiSectorBound mb = multi_sector_bound(h.rho, h.sigma, ch);
    CHECK(mb.applicable);
    literal += mb.literal_applicable ? 1 : 0;
  }
  CHECK(literal == 0);
}

TEST_CASE("Petz recovery fixes pinched states and sigma") {
  Rng rng(65);
  for (int t = 0; t < 100; ++t) {
    const Index d = 3 + t % 5;
    const SupportSplit split = harness::random_split(d, 1 + t % (d - 1), rng);
    const DensityMatrix sigma = harness::random_block_diagonal(split, rng);
    const DensityMatrix rho = random_density(d, d, rng);
    const DensityMatrix pr = pinch(rho, split.pinching());
    CHECK((petz_recovery(sigma, split, pr).matrix() - pr.matrix()).norm() <= 1e-10);
    CHECK((petz_recovery(sigma, split, sigma).matrix() - sigma.matrix()).norm() <= 1e-10);
    const HermitianMatrix x = random_hermitian(d, rng);
    CHECK(std::abs(petz_recovery(sigma, split, x).trace() - x.trace()) <= 1e-11);
  }
}

TEST_CASE("near-boundary threshold for a0 = 0.8") {
  const double thr = near_boundary_threshold(0.8);
  CHECK(thr == doctest::Approx(0.8 * std::exp(-5.0)).epsilon(1e-15));
  CHECK(thr == doctest::Approx(5.39e-3).epsilon(1e-3));
  CHECK(std::round(thr * 1e3) == 5.0);
}

TEST_CASE("fr_compare on the coherence-free and near-boundary cases") {
  const SupportSplit split = split_from_levels(Matrix::Identity(3, 3), {0});
  RealVector w(3);
  w << 0.6, 0.3, 0.1;
  const DensityMatrix sigma(HermitianMatrix::diagonal(w));
  RealVector pw(3);
  pw << 0.9, 0.06, 0.04;
  const FrReport zero = fr_compare(DensityMatrix(HermitianMatrix::diagonal(pw)), sigma, split, 0.8);
  CHECK(zero.c == 0.0);
  CHECK(zero.ours == 0.0);
  CHECK(zero.fr_remainder == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(zero.ratio.is_infinite());

  Rng rng(66);
  for (int t = 0; t < 100; ++t) {
    const Index d = 3 + t % 5;
    const Index r = 1 + t % 2;
    const SupportSplit sp = harness::random_split(d, r, rng);
    const DensityMatrix sg = harness::random_block_diagonal(sp, rng);
    const double a0 = 0.7 / static_cast<double>(r);
    const DensityMatrix rho = harness::sample_regime_state(sp, a0, near_boundary_threshold(a0), rng);
    const FrReport fr = fr_compare(rho, sg, sp, a0);
    REQUIRE(fr.in_class);
    CHECK(fr.ours >= fr.fr_remainder - 1e-9);
    CHECK(fr.ratio.value_or(1e300) >= fr.ratio_floor - 1e-9);
    CHECK(fr.c / a0 >= fr.fidelity_defect - 1e-10);
  }
  CHECK_THROWS_AS(fr_compare(DensityMatrix::maximally_mixed(3), sigma, split, 0.8), ValidationError);
  CHECK_THROWS_AS(fr_compare(DensityMatrix::maximally_mixed(3), sigma, split, 0.0), ValidationError);
}
