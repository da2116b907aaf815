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

#include "bcert/separation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bcert {

namespace {

constexpr double kBlockTol = 1e-11;
constexpr double kRemainderFloor = 1e-14;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_fixed(const PinchingSpec& spec, const Matrix& sigma, const char* who) {
  if (!spec.is_fixed_point(sigma, kBlockTol)) {
    throw ValidationError(std::string(who) + ": reference state is not block diagonal");
  }
}

}  // namespace

Matrix projector_range(const Matrix& p) {
  const SpectralDecomposition ed = eig_hermitian(HermitianMatrix(p));
  Index rank = 0;
  for (Index i = 0; i < ed.eigenvalues.size(); ++i) rank += ed.eigenvalues(i) > 0.5 ? 1 : 0;
  // Eigenvalues are ascending, so the range is spanned by the last columns.
  return ed.eigenvectors.rightCols(rank);
}

CpsReport cps_decompose(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const SupportSplit& split, double a0) {
  if (rho.dim() != split.dim() || sigma.dim() != split.dim()) {
    throw ValidationError("cps_decompose: dimension mismatch");
  }
  const PinchingSpec spec = split.pinching();
  require_fixed(spec, sigma.matrix(), "cps_decompose");
  const DensityMatrix pinched = pinch(rho, spec);
  CpsReport rep;
  rep.d_total = relative_entropy(rho, sigma);
  rep.d_coh = relative_entropy(rho, pinched);
  rep.d_pop = relative_entropy(pinched, sigma);
  if (rep.d_total.is_finite() && rep.d_coh.is_finite() && rep.d_pop.is_finite()) {
    rep.residual = std::abs(rep.d_total.value() - rep.d_coh.value() - rep.d_pop.value());
  } else {
    rep.residual = kNaN;
  }
  const CoercivityResult co = bkm_coercivity(rho, split, a0);
  rep.coercivity_bound = co.bound;
  rep.regime_ok = co.regime_ok;
  return rep;
}

SectorChain sequential_pinch_chain(const DensityMatrix& rho, const std::vector<Matrix>& projectors) {
  const PinchingSpec family(projectors);  // validates the projector family
  if (family.dim() != rho.dim()) throw ValidationError("sequential_pinch_chain: dimension mismatch");
  const std::size_t k = projectors.size();
  if (k < 2) throw ValidationError("sequential_pinch_chain: need at least two sectors");
  const Index d = rho.dim();
  const Matrix id = Matrix::Identity(d, d);

  SectorChain ch;
  ch.projectors = projectors;
  ch.states.resize(k);
  ch.states[k - 1] = rho;
  for (std::size_t m = k; m >= 2; --m) {
    const Matrix& pm = projectors[m - 1];
    const Matrix qm = id - pm;
    const Matrix& x = ch.states[m - 1].matrix();
    ch.states[m - 2] = DensityMatrix(Matrix(pm * x * pm + qm * x * qm));
  }

  const Matrix& r = rho.matrix();
  for (std::size_t m = 2; m <= k; ++m) {
    const Matrix& pm = projectors[m - 1];
    const Matrix qm = id - pm;
    const Matrix& xm = ch.states[m - 1].matrix();
    const Matrix off = qm * xm * pm;
    Matrix direct = Matrix::Zero(d, d);
    double c_direct = 0.0;
    Matrix lower = Matrix::Zero(d, d);
    for (std::size_t i = 1; i < m; ++i) {
      const Matrix blk = projectors[i - 1] * r * pm;
      direct += blk;
      c_direct += blk.squaredNorm();
      lower += projectors[i - 1];
    }
    ch.c_m.push_back(off.squaredNorm());
    ch.c_m_direct.push_back(c_direct);
    ch.block_residual.push_back((off - direct).norm());

    const Matrix w_comp = projector_range(qm);
    ch.a_m.push_back(min_eigenvalue(compress(ch.states[m - 1].hermitian(), w_comp)));
    const Matrix w_lower = projector_range(lower);
    ch.a_active.push_back(min_eigenvalue(compress(rho.hermitian(), w_lower)));
    ch.eps_m.push_back((pm * r * pm).trace().real());
    const double am = ch.a_m.back(), aa = ch.a_active.back(), em = ch.eps_m.back();
    ch.conditions_ok.push_back(am > 0.0 && em <= 0.5 * am);
    ch.active_conditions_ok.push_back(aa > 0.0 && em <= 0.5 * aa);
  }
  return ch;
}

MultiSectorBound multi_sector_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const SectorChain& chain) {
  const PinchingSpec family(chain.projectors);
  if (sigma.dim() != rho.dim() || family.dim() != rho.dim()) {
    throw ValidationError("multi_sector_bound: dimension mismatch");
  }
  require_fixed(family, sigma.matrix(), "multi_sector_bound");
  const std::size_t k = chain.sectors();
  MultiSectorBound out;
  const DensityMatrix pinched = pinch(rho, family);
  out.d_total = relative_entropy(rho, sigma);
  out.d_pop = relative_entropy(pinched, sigma);
  const ExtendedReal d_coh = relative_entropy(rho, pinched);

  double step_sum = 0.0;
  bool steps_finite = true;
  for (std::size_t m = 2; m <= k; ++m) {
    const ExtendedReal s = relative_entropy(chain.states[m - 1], chain.states[m - 2]);
    out.step_entropies.push_back(s);
    if (s.is_finite()) {
      step_sum += s.value();
    } else {
      steps_finite = false;
    }
  }
  out.telescoping_residual =
      steps_finite && d_coh.is_finite() ? std::abs(d_coh.value() - step_sum) : kNaN;

  auto assemble = [&](const std::vector<double>& a, const std::vector<bool>& ok,
                      bool& applicable) -> double {
    applicable = out.d_pop.is_finite();
    double b = 0.0;
    for (std::size_t i = 0; i + 2 <= k; ++i) {
      if (!ok[i]) applicable = false;
      const double cm = chain.c_m[i];
      const double em = chain.eps_m[i];
      if (cm == 0.0) continue;
      if (!(em > 0.0)) {
        applicable = false;
        continue;
      }
      b += cm * std::log(a[i] / em);
    }
    return applicable ? b + out.d_pop.value() : kNaN;
  };
  bool lit_ok = false;
  const double lit = assemble(chain.a_m, chain.conditions_ok, lit_ok);
  out.literal_applicable = lit_ok;
  if (lit_ok) out.literal_bound = lit;
  out.bound = assemble(chain.a_active, chain.active_conditions_ok, out.applicable);
  return out;
}

HermitianMatrix petz_recovery(const DensityMatrix& sigma, const SupportSplit& split,
                              const HermitianMatrix& x) {
  if (sigma.dim() != split.dim() || x.dim() != split.dim()) {
    throw ValidationError("petz_recovery: dimension mismatch");
  }
  const PinchingSpec spec = split.pinching();
  require_fixed(spec, sigma.matrix(), "petz_recovery");
  const SpectralDecomposition ed = eig_hermitian(sigma.hermitian());
  if (!(ed.eigenvalues(0) > tol::kPsd)) {
    std::ostringstream os;
    os << "petz_recovery: reference state is not faithful (lambda_min = " << ed.eigenvalues(0) << ")";
    throw DomainError(os.str());
  }
  const HermitianMatrix s_half = matrix_function(ed, [](double v) { return std::sqrt(v); });
  const HermitianMatrix s_inv_half = matrix_function(ed, [](double v) { return 1.0 / std::sqrt(v); });
  const Matrix inner = spec.apply(s_inv_half.matrix() * x.matrix() * s_inv_half.matrix());
  return HermitianMatrix(Matrix(s_half.matrix() * inner * s_half.matrix()));
}

double near_boundary_threshold(double a0) { return a0 * std::exp(-4.0 / a0); }

FrReport fr_compare(const DensityMatrix& rho, const DensityMatrix& sigma, const SupportSplit& split,
                    double a0) {
  if (!(a0 > 0.0)) throw ValidationError("fr_compare: a0 must be positive");
  const BlockDecomposition blocks = block_decompose(rho.hermitian(), split);
  const double lmin = min_eigenvalue(HermitianMatrix(blocks.a));
  if (lmin < a0 - 1e-12) {
    std::ostringstream os;
    os << "fr_compare: lambda_min(P rho P) = " << lmin << " is below a0 = " << a0;
    throw ValidationError(os.str());
  }
  const ActivationReport act = activation(rho, split);
  FrReport rep;
  rep.c = act.c;
  rep.eps_q = act.eps_q;
  rep.class_threshold = near_boundary_threshold(a0);
  rep.in_class = act.eps_q <= rep.class_threshold;
  if (act.c == 0.0) {
    rep.ours = 0.0;
  } else if (act.eps_q > 0.0) {
    rep.ours = act.c * std::log(a0 / act.eps_q);
  } else {
    rep.ours = std::numeric_limits<double>::infinity();
  }
  rep.ratio_floor = act.eps_q > 0.0 ? 0.25 * a0 * std::log(a0 / act.eps_q)
                                    : std::numeric_limits<double>::infinity();
  const DensityMatrix pinched = pinch(rho, split.pinching());
  const HermitianMatrix recovered = petz_recovery(sigma, split, pinched.hermitian());
  rep.fidelity_defect = bures_defect(rho.hermitian(), recovered);
  rep.fidelity = 1.0 - rep.fidelity_defect;
  rep.fr_remainder = -2.0 * std::log1p(-rep.fidelity_defect);
  if (rep.fr_remainder > kRemainderFloor && std::isfinite(rep.ours)) {
    rep.ratio = rep.ours / rep.fr_remainder;
  } else {
    rep.ratio = ExtendedReal::infinity();
  }
  return rep;
}

}  // namespace bcert
