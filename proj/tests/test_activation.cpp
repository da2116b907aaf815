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

#include "doctest.h"

#include "bcert/activation.hpp"
#include "bcert/certification.hpp"
#include "bcert/harness/samplers.hpp"

using namespace bcert;

namespace {

Vector basis_vector(Index d, Index i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("split_from_sigma finds the support") {
  const DensityMatrix sigma = DensityMatrix::pure(basis_vector(3, 1));
  const SupportSplit split = split_from_sigma(sigma);
  CHECK(split.r == 1);
  CHECK(split.d_q == 2);
  CHECK(std::abs(split.p(1, 1) - 1.0) < 1e-14);
  CHECK((split.p + split.q - Matrix::Identity(3, 3)).norm() < 1e-14);
  const Matrix u = split.basis();
  CHECK((u.adjoint() * u - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("split_from_levels and split_from_bases validate") {
  const Matrix id = Matrix::Identity(4, 4);
  const SupportSplit s = split_from_levels(id, {0, 2});
  CHECK(s.r == 2);
  CHECK(s.p(2, 2) == Complex(1.0));
  CHECK(s.q(1, 1) == Complex(1.0));
  CHECK_THROWS_AS(split_from_levels(id, {0, 4}), ValidationError);
  CHECK_THROWS_AS(split_from_levels(id, {1, 1}), ValidationError);
  CHECK_THROWS_AS(split_from_bases(id.leftCols(2), id.rightCols(1)), ValidationError);
  Matrix skew = id.rightCols(2);
  skew(0, 0) = 1.0;
  CHECK_THROWS_AS(split_from_bases(id.leftCols(2), skew), ValidationError);
}

TEST_CASE("regularize places eps/d on the kernel") {
  const DensityMatrix sigma = DensityMatrix::pure(basis_vector(3, 0));
  const RegularizedState reg = regularize(sigma, 0.3);
  CHECK(reg.lambda_star == doctest::Approx(0.1));
  CHECK(reg.sigma_eps.matrix()(0, 0).real() == doctest::Approx(0.7 + 0.1));
  CHECK(reg.sigma_eps.matrix()(2, 2).real() == doctest::Approx(0.1));
  CHECK_THROWS_AS(regularize(sigma, 0.0), ValidationError);
  CHECK_THROWS_AS(regularize(sigma, 1.0), ValidationError);
  CHECK_THROWS_AS(regularize(DensityMatrix::maximally_mixed(3), 0.1), ValidationError);
  const LocalConstants lc = local_constants(reg, split_from_sigma(sigma));
  CHECK(lc.a0 == doctest::Approx(0.4));
  CHECK(lc.delta0 == doctest::Approx(0.4));
}

TEST_CASE("activation of a pure coherent state") {
  const SupportSplit split = split_from_levels(Matrix::Identity(3, 3), {0});
  for (double eps0 : {0.01, 0.1, 0.4}) {
    const DensityMatrix rho = pure_coherent_state(eps0, split);
    const ActivationReport a = activation(rho, split);
    CHECK(a.c == doctest::Approx(eps0 * (1.0 - eps0)).epsilon(1e-13));
    CHECK(a.eps_q == doctest::Approx(eps0).epsilon(1e-13));
    CHECK(a.a_func * a.a_func == doctest::Approx(a.c + a.eps_q).epsilon(1e-13));
    CHECK(a.r2 == doctest::Approx((1.0 - eps0) / (2.0 - eps0)).epsilon(1e-13));
  }
  const ActivationReport zero = activation(DensityMatrix::pure(basis_vector(3, 0)), split);
  CHECK(zero.c == 0.0);
  CHECK(zero.r2 == 0.0);
}

TEST_CASE("block decomposition reassembles in a rotated basis") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const Index d = 3 + t % 5;
    const SupportSplit split = harness::random_split(d, 1 + t % (d - 1), rng);
    const DensityMatrix rho = random_density(d, d, rng);
    const BlockDecomposition b = block_decompose(rho, split);
    CHECK(b.a.rows() == split.r);
    CHECK(b.c.rows() == split.d_q);
    CHECK((b.reassemble(split) - rho.matrix()).norm() < 1e-13);
    CHECK(b.b.squaredNorm() == doctest::Approx((split.p * rho.matrix() * split.q).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("coercivity bound and SVD blocks in the regime") {
  Rng rng(32);
  for (int t = 0; t < 100; ++t) {
    const Index d = 3 + t % 5;
    const SupportSplit split = harness::random_split(d, 1 + t % (d - 1), rng);
    const double a0 = 0.4 / static_cast<double>(split.r);
    const DensityMatrix rho = harness::sample_regime_state(split, a0, 0.25 * a0, rng);
    const CoercivityResult co = bkm_coercivity(rho, split, a0);
    REQUIRE(co.regime_ok);
    REQUIRE(co.bound.has_value());
    CHECK(*co.bound == doctest::Approx(co.activation.c * std::log(a0 / co.activation.eps_q)));
    for (const SvdBlock& b : co.svd_blocks) CHECK(b.s * b.s <= b.a * b.c + 1e-14);
    const double dcoh = relative_entropy(rho, pinch(rho, split.pinching())).value();
    CHECK(dcoh >= co.block_entropy_sum().value() - 1e-9);
    CHECK(co.block_entropy_sum().value() >= *co.bound - 1e-9);
  }
}

TEST_CASE("coercivity outside the regime reports no bound") {
  const SupportSplit split = split_from_levels(Matrix::Identity(2, 2), {0});
  const DensityMatrix rho = pure_coherent_state(0.4, split);
  const CoercivityResult co = bkm_coercivity(rho, split, 0.3);
  CHECK_FALSE(co.regime_ok);
  CHECK_FALSE(co.bound.has_value());
  const CoercivityResult classical = bkm_coercivity(DensityMatrix::maximally_mixed(2), split, 0.3);
  CHECK(classical.bound.has_value());
  CHECK(*classical.bound == 0.0);
  CHECK_THROWS_AS(bkm_coercivity(rho, split, 0.0), ValidationError);
}
