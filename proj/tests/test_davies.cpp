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

#include "bcert/davies.hpp"
#include "bcert/harness/samplers.hpp"
#include "bcert/harness/scenario.hpp"

using namespace bcert;

namespace {

Matrix sigma_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

DaviesBuild qubit(double beta) {
  DaviesInput in;
  in.energies = RealVector(2);
  in.energies << 0.0, 1.0;
  in.couplings = {HermitianMatrix(sigma_x())};
  in.beta = beta;
  in.rate = RateModel::fermi(beta);
  return build_davies(in, split_from_levels(Matrix::Identity(2, 2), {0}));
}

}  // namespace

TEST_CASE("rate models satisfy detailed balance") {
  for (double beta : {0.3, 1.0, 5.0}) {
    const RateModel f = RateModel::fermi(beta), o = RateModel::ohmic(beta);
    for (double w : {0.1, 0.7, 2.5}) {
      CHECK(f(-w) == doctest::Approx(std::exp(-beta * w) * f(w)).epsilon(1e-13));
      CHECK(o(-w) == doctest::Approx(std::exp(-beta * w) * o(w)).epsilon(1e-13));
    }
    CHECK(o(0.0) == doctest::Approx(1.0 / beta));
    CHECK(f(0.0) == doctest::Approx(0.5));
  }
  // No overflow for extreme arguments.
  CHECK(RateModel::fermi(100.0)(-50.0) >= 0.0);
  CHECK(RateModel::fermi(100.0)(50.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(RateModel::fermi(0.0), ValidationError);
  CHECK_THROWS_AS(RateModel::ohmic(-1.0), ValidationError);
}

TEST_CASE("tabulated rates interpolate and clamp") {
  const RateModel t = RateModel::tabulated({{1.0, 0.8}, {-1.0, 0.2}});
  CHECK(t(0.0) == doctest::Approx(0.5));
  CHECK(t(-3.0) == doctest::Approx(0.2));
  CHECK(t(3.0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(RateModel::tabulated({}), ValidationError);
  CHECK_THROWS_AS(RateModel::tabulated({{0.0, -1.0}}), ValidationError);
  CHECK_THROWS_AS(RateModel::tabulated({{0.0, 1.0}, {0.0, 2.0}}), ValidationError);
}

TEST_CASE("qubit rates at beta = ln 3 match hand values") {
  const DaviesBuild b = qubit(std::log(3.0));
  const RateParams& r = b.rates;
  CHECK(r.w(0, 1) == doctest::Approx(0.75).epsilon(1e-14));  // 1 -> 0
  CHECK(r.w(1, 0) == doctest::Approx(0.25).epsilon(1e-14));  // 0 -> 1
  CHECK(r.mu == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.eta == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(r.k == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.eps_bar == doctest::Approx(0.25).epsilon(1e-14));
  const SupportSplit split = split_from_levels(Matrix::Identity(2, 2), {0});
  const SecularTable st = verify_secular(b.model, split);
  CHECK(st.ok());
  CHECK(st.max_residual <= 1e-12);
  CHECK(st.gamma_pe(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(st.omega_pe(0, 0) == doctest::Approx(-1.0));
  CHECK(st.gamma_max == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("Gibbs state is stationary and the generator is trace preserving") {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const harness::Scenario s = harness::random_secular_scenario(2 + t % 5, rng);
    const harness::ScenarioSetup st = harness::prepare(s);
    const DaviesModel& m = st.davies.model;
    CHECK(m.apply(m.gibbs_state().matrix()).norm() < 1e-10);
    const HermitianMatrix x = random_hermitian(m.dim, rng);
    CHECK(std::abs(m.apply(x.matrix()).trace()) < 1e-12);
    CHECK(hermitian_defect(m.apply(x.matrix())) < 1e-12);
    // Lindblad operators reassemble every coupling.
    for (std::size_t a = 0; a < m.couplings.size(); ++a) {
      Matrix sum = Matrix::Zero(m.dim, m.dim);
      for (const LindbladOperator& op : m.lindblad_ops) {
        if (op.coupling == a) sum += op.op;
      }
      CHECK((sum - m.couplings[a].matrix()).norm() < 1e-12);
    }
  }
}

TEST_CASE("degenerate cross-boundary gaps are detected") {
  const harness::ScenarioSetup st = harness::prepare(harness::load_scenario(BCERT_SCENARIO_DIR "/degenerate_gap.json"));
  CHECK_FALSE(st.secular.distinct_ok);
  CHECK_FALSE(st.secular.ok());
}

TEST_CASE("the four-level two-sector model is secular") {
  const harness::ScenarioSetup st = harness::prepare(harness::load_scenario(BCERT_SCENARIO_DIR "/two_sector.json"));
  CHECK(st.davies.model.dim == 4);
  CHECK(st.secular.ok());
  CHECK(st.secular.max_residual <= 1e-10);
  CHECK(st.secular.gamma_pe.rows() == 2);
  CHECK(st.secular.gamma_pe.cols() == 2);
}

TEST_CASE("build_davies input validation") {
  DaviesInput in;
  in.energies = RealVector(2);
  in.energies << 0.0, 1.0;
  in.couplings = {HermitianMatrix(sigma_x())};
  const SupportSplit split = split_from_levels(Matrix::Identity(2, 2), {0});
  in.beta = -1.0;
  CHECK_THROWS_AS(build_davies(in, split), ValidationError);
  in.beta = 1.0;
  in.lamb_shift = HermitianMatrix(sigma_x());
  CHECK_THROWS_AS(build_davies(in, split), ValidationError);
  in.lamb_shift.reset();
  in.couplings = {HermitianMatrix::identity(3)};
  CHECK_THROWS_AS(build_davies(in, split), ValidationError);
  in.couplings = {HermitianMatrix(sigma_x())};
  Matrix rotated(2, 2);
  rotated << 1.0, 1.0, 1.0, -1.0;
  in.eigenbasis = rotated / std::sqrt(2.0);
  // Energy levels of the rotated basis straddle P and Q.
  CHECK_THROWS_AS(build_davies(in, split), ValidationError);
}

TEST_CASE("evolve validates times and both propagators agree") {
  const DaviesBuild b = qubit(2.0);
  const SupportSplit split = split_from_levels(Matrix::Identity(2, 2), {0});
  const DensityMatrix rho0 = DensityMatrix::maximally_mixed(2);
  const std::vector<double> bad1{0.5, 1.0}, bad2{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(evolve(b.model, rho0, bad1), ValidationError);
  CHECK_THROWS_AS(evolve(b.model, rho0, bad2), ValidationError);
  Vector plus(2);
  plus << 1.0, 1.0;
  const std::vector<double> times{0.0, 0.3, 1.0, 4.0};
  const Trajectory a = evolve(b.model, DensityMatrix::pure(plus), times, EvolutionMethod::spectral);
  const Trajectory c = evolve(b.model, DensityMatrix::pure(plus), times, EvolutionMethod::scaling_squaring);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK((a.states[i].matrix() - c.states[i].matrix()).norm() < 1e-10);
  }
  // The off-diagonal element decays as e^{-Gamma t} with Gamma = (W_up + W_down)/2.
  const double gamma = 0.5 * (b.rates.w(0, 1) + b.rates.w(1, 0));
  CHECK(std::abs(a.states[2].matrix()(0, 1)) == doctest::Approx(0.5 * std::exp(-gamma)).epsilon(1e-10));
  Propagator p(b.model.liouvillian);
  CHECK(p.spectral_abscissa() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("dynamical bounds at t = 0 and in the long-time limit") {
  const DaviesBuild b = qubit(std::log(3.0));
  const SecularTable st = verify_secular(b.model, split_from_levels(Matrix::Identity(2, 2), {0}));
  const DynamicalBounds at0 = dynamical_bounds(b.rates, st, 0.09, 0.1, 0.0);
  CHECK(at0.c_lower == doctest::Approx(0.09));
  CHECK(at0.eps_q_upper == doctest::Approx(0.1));
  CHECK(at0.r2_lower == doctest::Approx(0.09 / 0.19));
  const DynamicalBounds late = dynamical_bounds(b.rates, st, 0.09, 0.1, 200.0);
  CHECK(late.c_lower < 1e-80);
  CHECK(late.eps_q_upper == doctest::Approx(0.25));
  CHECK_THROWS_AS(dynamical_bounds(b.rates, st, 0.09, 0.1, -1.0), ValidationError);
}
