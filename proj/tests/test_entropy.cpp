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
#include <limits>

#include "doctest.h"

#include "bcert/entropy.hpp"
#include "bcert/harness/samplers.hpp"
#include "oracles.hpp"

using namespace bcert;

namespace {

Matrix diag_projector(Index d, std::initializer_list<Index> levels) {
  Matrix p = Matrix::Zero(d, d);
  for (Index l : levels) p(l, l) = 1.0;
  return p;
}

HermitianMatrix diag2(double a, double c) {
  RealVector v(2);
  v << a, c;
  return HermitianMatrix::diagonal(v);
}

HermitianMatrix offdiag2(Complex s) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = s;
  m(1, 0) = std::conj(s);
  return HermitianMatrix(m);
}

}  // namespace

TEST_CASE("ExtendedReal semantics") {
  const ExtendedReal inf = ExtendedReal::infinity();
  CHECK(inf.is_infinite());
  CHECK_THROWS_AS(inf.value(), DomainError);
  CHECK(inf.value_or(3.0) == 3.0);
  CHECK(inf.at_least(1e300));
  CHECK_FALSE(inf.at_most(1e300));
  const ExtendedReal x = 1.5;
  CHECK(x.at_least(1.6, 0.2));
  CHECK_FALSE(x.at_least(1.6));
  CHECK(x.at_most(1.5));
  CHECK(inf.to_string() == "inf");
}

TEST_CASE("PinchingSpec rejects invalid families") {
  CHECK_THROWS_AS(PinchingSpec(std::vector<Matrix>{}), ValidationError);
  CHECK_THROWS_AS(PinchingSpec({diag_projector(3, {0}), diag_projector(3, {1})}), ValidationError);
  CHECK_THROWS_AS(PinchingSpec({diag_projector(3, {0, 1}), diag_projector(3, {1, 2})}), ValidationError);
  Matrix not_proj = diag_projector(2, {0});
  not_proj(0, 0) = 0.5;
  CHECK_THROWS_AS(PinchingSpec({not_proj, diag_projector(2, {1})}), ValidationError);
  const PinchingSpec ok = PinchingSpec::two_block(diag_projector(3, {0}));
  CHECK(ok.size() == 2);
  Matrix x = Matrix::Ones(3, 3);
  const Matrix px = ok.apply(x);
  CHECK(px(0, 1) == Complex(0.0));
  CHECK(px(1, 2) == Complex(1.0));
  CHECK(ok.is_fixed_point(px, 0.0));
  CHECK_FALSE(ok.is_fixed_point(x, 0.5));
}

TEST_CASE("relative entropy matches the long-double oracle") {
  Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const Index d = 2 + t % 6;
    const DensityMatrix rho = random_density(d, 1 + t % d, rng);
    const DensityMatrix sigma = random_density(d, d, rng);
    const double got = relative_entropy(rho, sigma).value();
    const double ref = static_cast<double>(oracle::relative_entropy(rho.matrix(), sigma.matrix()));
    CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("relative entropy edge cases") {
  const DensityMatrix rho = random_density(3, 3, 5);
  CHECK(std::abs(relative_entropy(rho, rho).value()) < 1e-13);
  Vector e0 = Vector::Zero(3), e1 = Vector::Zero(3);
  e0(0) = 1.0;
  e1(1) = 1.0;
  CHECK(relative_entropy(DensityMatrix::pure(e0), DensityMatrix::pure(e1)).is_infinite());
  CHECK(relative_entropy(rho, DensityMatrix::pure(e0)).is_infinite());
  // Pure state against the maximally mixed state gives log d.
  CHECK(relative_entropy(DensityMatrix::pure(e0), DensityMatrix::maximally_mixed(3)).value() ==
        doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK_THROWS_AS(relative_entropy(rho, DensityMatrix::maximally_mixed(2)), ValidationError);
}

TEST_CASE("coherence entropy of |+> with a two-block pinching is log 2") {
  Vector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix rho = DensityMatrix::pure(plus);
  const PinchingSpec spec = PinchingSpec::two_block(diag_projector(2, {0}));
  CHECK(coherence_entropy(rho, spec).value() == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  const DensityMatrix pr = pinch(rho, spec);
  CHECK(pr.matrix()(0, 1) == Complex(0.0));
  CHECK(pr.matrix()(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("fidelity on closed-form cases") {
  Rng rng(22);
  const DensityMatrix rho = random_density(4, 4, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(bures_defect(rho, rho) < 1e-13);
  // Pure states: F = |<psi|phi>|.
  const Vector psi = random_unit_vector(4, rng), phi = random_unit_vector(4, rng);
  const double overlap = std::abs(psi.dot(phi));
  CHECK(fidelity(DensityMatrix::pure(psi), DensityMatrix::pure(phi)) == doctest::Approx(overlap).epsilon(1e-10));
  // Commuting states: F = sum_i sqrt(p_i q_i) and the defect equals half the squared Hellinger distance.
  RealVector p(3), q(3);
  p << 0.5, 0.3, 0.2;
  q << 0.5, 0.3 + 1e-7, 0.2 - 1e-7;
  double f = 0.0, hell = 0.0;
  for (Index i = 0; i < 3; ++i) {
    f += std::sqrt(p(i) * q(i));
    hell += std::pow(std::sqrt(p(i)) - std::sqrt(q(i)), 2);
  }
  const HermitianMatrix hp = HermitianMatrix::diagonal(p), hq = HermitianMatrix::diagonal(q);
  CHECK(fidelity(hp, hq) == doctest::Approx(f).epsilon(1e-14));
  CHECK(bures_defect(hp, hq) == doctest::Approx(0.5 * hell).epsilon(1e-8));
  CHECK_THROWS_AS(fidelity(hp, HermitianMatrix::identity(2)), ValidationError);
}

TEST_CASE("property: fidelity is symmetric and bounded") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 5;
    const DensityMatrix a = random_density(d, 1 + t % d, rng);
    const DensityMatrix b = random_density(d, d, rng);
    const double fab = fidelity(a, b);
    CHECK(fab == doctest::Approx(fidelity(b, a)).epsilon(1e-10));
    CHECK(fab <= 1.0 + 1e-12);
    CHECK(fab >= 0.0);
    CHECK(1.0 - fab == doctest::Approx(bures_defect(a, b)).epsilon(1e-8).scale(1.0));
    // Fuchs-van de Graaf.
    const double td = 0.5 * trace_distance(a, b);
    CHECK(1.0 - fab <= td + 1e-10);
    CHECK(td <= std::sqrt(1.0 - fab * fab) + 1e-10);
  }
}

TEST_CASE("log mean values") {
  CHECK(log_mean(2.0, 2.0) == doctest::Approx(0.5));
  CHECK(log_mean(1.0, std::exp(1.0)) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
  CHECK(log_mean(3.0, 0.1) == doctest::Approx(log_mean(0.1, 3.0)));
  CHECK(log_mean(1.0, 1.0 + 1e-10) == doctest::Approx(1.0 - 0.5e-10).epsilon(1e-15));
  CHECK(log_mean(1.0, 1.5) == doctest::Approx(std::log(1.5) / 0.5).epsilon(1e-15));
  CHECK_THROWS_AS(log_mean(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_mean(1.0, -1.0), DomainError);
}

TEST_CASE("property: log mean lies between geometric and arithmetic means") {
  Rng rng(24);
  std::uniform_real_distribution<double> u(-6.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const double x = std::pow(10.0, u(rng)), y = std::pow(10.0, u(rng));
    const double inv = 1.0 / log_mean(x, y);  // logarithmic mean
    CHECK(inv >= std::sqrt(x * y) * (1 - 1e-12));
    CHECK(inv <= 0.5 * (x + y) * (1 + 1e-12));
  }
}

TEST_CASE("bkm form is the log-mean weighted sum on a diagonal base") {
  const HermitianMatrix m = diag2(0.7, 0.3);
  const HermitianMatrix y = offdiag2(Complex(0.1, 0.05));
  const double expected = 2.0 * std::norm(Complex(0.1, 0.05)) * log_mean(0.7, 0.3);
  CHECK(bkm_form(m, y) == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(bkm_form(diag2(1.0, 0.0), y), DomainError);
}

TEST_CASE("bkm integral equals the closed-form 2x2 remainder") {
  Rng rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double a = std::pow(10.0, -3.0 * u(rng)), c = std::pow(10.0, -3.0 * u(rng));
    const double s = std::sqrt(a * c) * u(rng);
    const double got = bkm_integral(diag2(a, c), offdiag2(std::polar(s, 6.0 * u(rng))));
    const double ref = static_cast<double>(oracle::taylor_remainder_2x2(a, c, s));
    CHECK(std::abs(got - ref) <= 1e-8);
    CHECK(got >= s * s * log_mean(a, c) - 1e-9);
  }
  const QuadratureStats st = bkm_integral_stats(diag2(0.5, 0.5), offdiag2(0.25));
  CHECK(st.evaluations >= 15);
  CHECK(st.error_estimate <= 1e-8 * st.value + 1e-15);
}

TEST_CASE("bkm integral validates its inputs") {
  CHECK_THROWS_AS(bkm_integral(diag2(0.5, 0.5), offdiag2(0.1), 0.0), ValidationError);
  CHECK_THROWS_AS(bkm_integral(diag2(0.5, 0.0), offdiag2(0.1)), ValidationError);
  Matrix nd = Matrix::Identity(2, 2) * 0.5;
  nd(0, 1) = nd(1, 0) = 0.1;
  CHECK_THROWS_AS(bkm_integral(HermitianMatrix(nd), offdiag2(0.1)), ValidationError);
  CHECK_THROWS_AS(bkm_integral(diag2(0.5, 0.5), diag2(0.1, 0.0)), ValidationError);
  // s^2 > ac leaves D0 + Y indefinite.
  CHECK_THROWS_AS(bkm_integral(diag2(0.1, 0.1), offdiag2(0.2)), ValidationError);
}

TEST_CASE("property: Pinsker gap is nonnegative and trace_x_log_x matches the spectrum") {
  Rng rng(26);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 6;
    const DensityMatrix a = random_density(d, 1 + t % d, rng), b = random_density(d, d, rng);
    CHECK(pinsker_gap(a, b).value() >= -1e-12);
    double ref = 0.0;
    for (auto v : oracle::eigenvalues(a.matrix())) {
      if (v > 0) ref += static_cast<double>(v * std::log(v));
    }
    CHECK(trace_x_log_x(a) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("property: pinching obeys data processing") {
  Rng rng(27);
  for (int t = 0; t < 100; ++t) {
    const Index d = 3 + t % 5;
    const SupportSplit split = harness::random_split(d, 1 + t % (d - 1), rng);
    const DensityMatrix a = random_density(d, d, rng), b = random_density(d, d, rng);
    const PinchingSpec spec = split.pinching();
    CHECK(relative_entropy(pinch(a, spec), pinch(b, spec)).value() <= relative_entropy(a, b).value() + 1e-10);
  }
}
