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

#include "bcert/davies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace bcert {

namespace {

constexpr double kUnitaryTol = 1e-11;
constexpr double kAlignmentTol = 1e-9;
constexpr double kSpectralReconstructionTol = 1e-10;
constexpr double kBlowUpTol = 1e-8;
constexpr double kTraceDriftTol = 1e-9;
constexpr double kNegativityTol = 1e-8;
constexpr Index kSpectralMaxSize = 1024;

// B^T (x) A, the matrix of X -> A X B on column-stacked vec(X).
Matrix superop(const Matrix& a, const Matrix& b) {
  const Index n = a.rows();
  const Matrix bt = b.transpose();
  Matrix out(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out.block(i * n, j * n, n, n) = bt(i, j) * a;
  }
  return out;
}

Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Matrix unvec(const Vector& v, Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

double default_freq_tol(const RealVector& energies) {
  const double emax = energies.size() == 0 ? 0.0 : energies.cwiseAbs().maxCoeff();
  return std::max(1e-9 * emax, 1e-12);
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Rate models

RateModel RateModel::fermi(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("RateModel: beta must be positive");
  RateModel r;
  r.kind_ = Kind::fermi;
  r.beta_ = beta;
  return r;
}

RateModel RateModel::ohmic(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("RateModel: beta must be positive");
  RateModel r;
  r.kind_ = Kind::ohmic;
  r.beta_ = beta;
  return r;
}

RateModel RateModel::tabulated(std::vector<std::pair<double, double>> nodes) {
  if (nodes.empty()) throw ValidationError("RateModel: empty rate table");
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i].first) || !std::isfinite(nodes[i].second)) {
      throw ValidationError("RateModel: non-finite rate table entry");
    }
    if (nodes[i].second < 0.0) throw ValidationError("RateModel: negative rate in table");
    if (i > 0 && nodes[i].first == nodes[i - 1].first) {
      throw ValidationError("RateModel: repeated frequency in rate table");
    }
  }
  RateModel r;
  r.kind_ = Kind::tabulated;
  r.beta_ = std::numeric_limits<double>::quiet_NaN();
  r.nodes_ = std::move(nodes);
  return r;
}

double RateModel::operator()(double omega) const {
  switch (kind_) {
    case Kind::fermi: {
      const double x = beta_ * omega;
      // Split by sign so exp never overflows.
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
      const double e = std::exp(x);
      return e / (1.0 + e);
    }
    case Kind::ohmic: {
      const double x = beta_ * omega;
      if (std::abs(x) < 1e-8) return (1.0 + 0.5 * x) / beta_;
      return omega / -std::expm1(-x);
    }
    case Kind::tabulated: {
      if (omega <= nodes_.front().first) return nodes_.front().second;
      if (omega >= nodes_.back().first) return nodes_.back().second;
      auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), omega,
                                 [](double w, const auto& n) { return w < n.first; });
      auto lo = hi - 1;
      const double s = (omega - lo->first) / (hi->first - lo->first);
      return (1.0 - s) * lo->second + s * hi->second;
    }
  }
  return 0.0;
}

std::string RateModel::name() const {
  switch (kind_) {
    case Kind::fermi:
      return "fermi";
    case Kind::ohmic:
      return "ohmic";
    case Kind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Model

Matrix DaviesModel::apply(const Matrix& x) const {
  if (x.rows() != dim || x.cols() != dim) throw ValidationError("DaviesModel::apply: shape mismatch");
  return unvec(liouvillian * vec(x), dim);
}

Matrix DaviesModel::level_operator(Index m, Index n) const {
  return eigenbasis.col(m) * eigenbasis.col(n).adjoint();
}

DensityMatrix DaviesModel::gibbs_state() const {
  const double emin = energies.minCoeff();
  RealVector w(dim);
  for (Index i = 0; i < dim; ++i) w(i) = std::exp(-beta * (energies(i) - emin));
  w /= w.sum();
  return DensityMatrix(Matrix(eigenbasis * w.cast<Complex>().asDiagonal() * eigenbasis.adjoint()));
}

std::pair<std::vector<Index>, std::vector<Index>> boundary_levels(const DaviesModel& model,
                                                                  const SupportSplit& split) {
  if (split.dim() != model.dim) throw ValidationError("boundary_levels: dimension mismatch");
  std::vector<Index> p_levels, q_levels;
  for (Index m = 0; m < model.dim; ++m) {
    const double wp = (split.p * model.eigenbasis.col(m)).squaredNorm();
    if (wp >= 1.0 - kAlignmentTol) {
      p_levels.push_back(m);
    } else if (wp <= kAlignmentTol) {
      q_levels.push_back(m);
    } else {
      throw ValidationError("boundary_levels: energy level " + std::to_string(m) +
                            " is split between P and Q (weight in P " + format_double(wp) + ")");
    }
  }
  for (Index p : p_levels) {
    for (Index e : q_levels) {
      if (std::abs(model.energies(p) - model.energies(e)) <= model.freq_tol) {
        throw ValidationError("boundary_levels: degenerate eigenspace at E = " +
                              format_double(model.energies(p)) + " straddles P and Q");
      }
    }
  }
  return {p_levels, q_levels};
}

DaviesBuild build_davies(const DaviesInput& input, const SupportSplit& split) {
  const Index d = input.energies.size();
  if (d < 1) throw ValidationError("build_davies: empty spectrum");
  if (!input.energies.allFinite()) throw ValidationError("build_davies: non-finite energy");
  if (!(input.beta > 0.0)) throw ValidationError("build_davies: beta must be positive");

  DaviesModel m;
  m.dim = d;
  m.energies = input.energies;
  m.beta = input.beta;
  m.rate = input.rate;
  m.freq_tol = input.freq_tol.value_or(default_freq_tol(input.energies));
  if (!(m.freq_tol > 0.0)) throw ValidationError("build_davies: freq_tol must be positive");
  if (input.eigenbasis.size() == 0) {
    m.eigenbasis = Matrix::Identity(d, d);
  } else {
    if (input.eigenbasis.rows() != d || input.eigenbasis.cols() != d) {
      throw ValidationError("build_davies: eigenbasis shape does not match the spectrum");
    }
    const Matrix gram = input.eigenbasis.adjoint() * input.eigenbasis;
    if ((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kUnitaryTol) {
      throw ValidationError("build_davies: eigenbasis is not unitary");
    }
    m.eigenbasis = input.eigenbasis;
  }
  const Matrix& u = m.eigenbasis;
  m.hamiltonian =
      HermitianMatrix(Matrix(u * input.energies.cast<Complex>().asDiagonal() * u.adjoint()));
  m.lamb_shift = input.lamb_shift.value_or(HermitianMatrix::zero(d));
  if (m.lamb_shift.dim() != d) throw ValidationError("build_davies: Lamb shift dimension mismatch");
  {
    const Matrix comm = m.hamiltonian.matrix() * m.lamb_shift.matrix() -
                        m.lamb_shift.matrix() * m.hamiltonian.matrix();
    const double scale = std::max(1.0, m.hamiltonian.matrix().cwiseAbs().maxCoeff() *
                                           m.lamb_shift.matrix().cwiseAbs().maxCoeff());
    if (comm.cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw ValidationError("build_davies: Lamb shift does not commute with H");
    }
  }
  for (const HermitianMatrix& s : input.couplings) {
    if (s.dim() != d) throw ValidationError("build_davies: coupling dimension mismatch");
  }
  m.couplings = input.couplings;

  // Bohr frequencies: cluster all level differences E_m - E_n.
  std::vector<std::pair<double, std::pair<Index, Index>>> diffs;
  diffs.reserve(static_cast<std::size_t>(d * d));
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) diffs.push_back({m.energies(a) - m.energies(b), {a, b}});
  }
  std::stable_sort(diffs.begin(), diffs.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < diffs.size();) {
    BohrFrequency bf;
    double sum = 0.0;
    std::size_t j = i;
    while (j < diffs.size() && diffs[j].first - diffs[i].first <= m.freq_tol) {
      bf.pairs.push_back(diffs[j].second);
      sum += diffs[j].first;
      ++j;
    }
    bf.omega = sum / static_cast<double>(j - i);
    m.bohr_frequencies.push_back(std::move(bf));
    i = j;
  }

  // Coupling matrix elements <n|S|m> in the energy basis.
  std::vector<Matrix> s_energy;
  for (const HermitianMatrix& s : m.couplings) s_energy.push_back(u.adjoint() * s.matrix() * u);

  const Index d2 = d * d;
  const Matrix id = Matrix::Identity(d, d);
  m.liouvillian = Matrix::Zero(d2, d2);
  for (std::size_t alpha = 0; alpha < s_energy.size(); ++alpha) {
    for (const BohrFrequency& bf : m.bohr_frequencies) {
      const double g = m.rate(bf.omega);
      if (!(g >= 0.0) || !std::isfinite(g)) {
        throw ValidationError("build_davies: rate model returned " + format_double(g) +
                              " at omega = " + format_double(bf.omega));
      }
      Matrix a_energy = Matrix::Zero(d, d);
      for (const auto& [mm, nn] : bf.pairs) a_energy(nn, mm) = s_energy[alpha](nn, mm);
      if (a_energy.cwiseAbs().maxCoeff() == 0.0) continue;
      LindbladOperator op;
      op.coupling = alpha;
      op.omega = bf.omega;
      op.rate = g;
      op.op = u * a_energy * u.adjoint();
      if (g > 0.0) {
        const Matrix ada = op.op.adjoint() * op.op;
        m.liouvillian += g * (superop(op.op, op.op.adjoint()) - 0.5 * superop(ada, id) -
                              0.5 * superop(id, ada));
      }
      m.lindblad_ops.push_back(std::move(op));
    }
  }
  const Matrix h_total = m.hamiltonian.matrix() + m.lamb_shift.matrix();
  m.liouvillian += Complex(0.0, -1.0) * (superop(h_total, id) - superop(id, h_total));

  DaviesBuild out;
  const auto [p_levels, q_levels] = boundary_levels(m, split);
  RateParams& rp = out.rates;
  rp.p_levels = p_levels;
  rp.q_levels = q_levels;
  rp.w = RealMatrix::Zero(d, d);
  for (std::size_t alpha = 0; alpha < s_energy.size(); ++alpha) {
    for (Index mm = 0; mm < d; ++mm) {
      for (Index nn = 0; nn < d; ++nn) {
        if (mm == nn) continue;
        rp.w(nn, mm) += m.rate(m.energies(mm) - m.energies(nn)) * std::norm(s_energy[alpha](nn, mm));
      }
    }
  }
  rp.mu = 0.0;
  for (Index p : p_levels) {
    double s = 0.0;
    for (Index e : q_levels) s += rp.w(e, p);
    rp.mu = std::max(rp.mu, s);
  }
  rp.eta = 0.0;
  if (!q_levels.empty() && !p_levels.empty()) {
    rp.eta = std::numeric_limits<double>::infinity();
    for (Index e : q_levels) {
      double s = 0.0;
      for (Index p : p_levels) s += rp.w(p, e);
      rp.eta = std::min(rp.eta, s);
    }
  }
  rp.k = rp.mu + rp.eta;
  rp.eps_bar = rp.k > 0.0 ? rp.mu / rp.k : 0.0;
  out.model = std::move(m);
  return out;
}

SecularTable verify_secular(const DaviesModel& model, const SupportSplit& split, double tol,
                            std::optional<double> freq_tol) {
  const double ftol = freq_tol.value_or(model.freq_tol);
  const auto [p_levels, q_levels] = boundary_levels(model, split);
  SecularTable t;
  t.p_levels = p_levels;
  t.q_levels = q_levels;
  const Index np = static_cast<Index>(p_levels.size());
  const Index nq = static_cast<Index>(q_levels.size());
  t.gamma_pe = RealMatrix::Zero(np, nq);
  t.omega_pe = RealMatrix::Zero(np, nq);
  t.residuals = RealMatrix::Zero(np, nq);
  for (Index i = 0; i < np; ++i) {
    for (Index j = 0; j < nq; ++j) {
      const Index p = p_levels[static_cast<std::size_t>(i)];
      const Index e = q_levels[static_cast<std::size_t>(j)];
      const Matrix x = model.level_operator(p, e);
      const Matrix lx = model.apply(x);
      // <X, L(X)>_HS with ||X||_F = 1.
      const Complex lambda = (x.adjoint() * lx).trace();
      t.gamma_pe(i, j) = -lambda.real();
      t.omega_pe(i, j) = model.energies(p) - model.energies(e);
      t.residuals(i, j) = (lx - lambda * x).norm();
    }
  }
  t.gamma_max = t.gamma_pe.size() == 0 ? 0.0 : t.gamma_pe.maxCoeff();
  t.max_residual = t.residuals.size() == 0 ? 0.0 : t.residuals.maxCoeff();
  t.secular_ok = t.max_residual <= tol;
  std::vector<double> omegas(t.omega_pe.data(), t.omega_pe.data() + t.omega_pe.size());
  std::sort(omegas.begin(), omegas.end());
  t.distinct_ok = true;
  for (std::size_t k = 1; k < omegas.size(); ++k) {
    if (omegas[k] - omegas[k - 1] <= ftol) t.distinct_ok = false;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Evolution

Propagator::Propagator(const Matrix& liouvillian, EvolutionMethod method)
    : liouvillian_(liouvillian), method_(method) {
  const Index n = liouvillian.rows();
  if (n != liouvillian.cols()) throw ValidationError("Propagator: generator is not square");
  dim_ = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (dim_ * dim_ != n) throw ValidationError("Propagator: generator size is not a square");

  const bool try_spectral = method == EvolutionMethod::spectral ||
                            (method == EvolutionMethod::automatic && n <= kSpectralMaxSize);
  Eigen::ComplexEigenSolver<Matrix> solver(liouvillian, try_spectral);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Propagator: eigen-decomposition of the generator failed");
  }
  eigenvalues_ = solver.eigenvalues();
  abscissa_ = eigenvalues_.real().maxCoeff();
  if (abscissa_ > kBlowUpTol) {
    std::ostringstream os;
    os << "Propagator: generator has an eigenvalue with positive real part " << abscissa_
       << "; e^{tL} would blow up";
    throw NumericalError(os.str());
  }
  method_ = EvolutionMethod::scaling_squaring;
  if (try_spectral) {
    eigenvectors_ = solver.eigenvectors();
    lu_.compute(eigenvectors_);
    const Matrix recon = eigenvectors_ * eigenvalues_.asDiagonal() * lu_.inverse();
    const double scale = std::max(1.0, liouvillian.norm());
    const double err = (recon - liouvillian).norm() / scale;
    if (err <= kSpectralReconstructionTol) {
      method_ = EvolutionMethod::spectral;
    } else if (method == EvolutionMethod::spectral) {
      std::ostringstream os;
      os << "Propagator: generator is too far from diagonalizable for the spectral route "
         << "(relative reconstruction error " << err << ")";
      throw NumericalError(os.str());
    } else {
      eigenvectors_.resize(0, 0);
    }
  }
}

Matrix Propagator::apply(double t, const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw ValidationError("Propagator: state shape mismatch");
  if (t == 0.0) return x;
  Vector v;
  if (method_ == EvolutionMethod::spectral) {
    Vector coeff = lu_.solve(vec(x));
    for (Index i = 0; i < coeff.size(); ++i) coeff(i) *= std::exp(eigenvalues_(i) * t);
    v = eigenvectors_ * coeff;
  } else {
    const Matrix e = (t * liouvillian_).exp();
    v = e * vec(x);
  }
  return unvec(v, dim_);
}

Trajectory evolve(const DaviesModel& model, const DensityMatrix& rho0, std::span<const double> times,
                  EvolutionMethod method) {
  if (rho0.dim() != model.dim) throw ValidationError("evolve: state dimension mismatch");
  if (times.empty() || times.front() != 0.0) throw ValidationError("evolve: times must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ValidationError("evolve: times must be strictly ascending");
  }
  const Propagator prop(model.liouvillian, method);
  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  traj.states.push_back(rho0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    Matrix x = prop.apply(times[i], rho0.matrix());
    x = 0.5 * (x + x.adjoint()).eval();
    const double tr = x.trace().real();
    if (std::abs(tr - 1.0) > kTraceDriftTol) {
      std::ostringstream os;
      os << "evolve: trace drifted to " << tr << " at t = " << times[i];
      throw NumericalError(os.str());
    }
    SpectralDecomposition ed = eig_hermitian(HermitianMatrix(x));
    if (ed.eigenvalues(0) < -kNegativityTol) {
      std::ostringstream os;
      os << "evolve: state lost positivity (lambda_min = " << ed.eigenvalues(0) << ") at t = " << times[i];
      throw NumericalError(os.str());
    }
    if (ed.eigenvalues(0) < 0.0) {
      ed.eigenvalues = ed.eigenvalues.cwiseMax(0.0);
      ed.eigenvalues /= ed.eigenvalues.sum();
      x = ed.reconstruct();
    } else {
      x /= tr;
    }
    traj.states.emplace_back(x);
  }
  return traj;
}

void annotate(Trajectory& traj, const SupportSplit& split, const DensityMatrix& sigma_eps) {
  traj.points.clear();
  traj.points.reserve(traj.states.size());
  for (const DensityMatrix& rho : traj.states) {
    TrajectoryPoint pt;
    pt.activation = activation(rho, split);
    pt.trace_dist = trace_distance(rho, sigma_eps);
    pt.rel_entropy = relative_entropy(rho, sigma_eps);
    traj.points.push_back(pt);
  }
}

DynamicalBounds dynamical_bounds(const RateParams& rates, const SecularTable& secular, double c0,
                                 double eps0, double t) {
  if (!(t >= 0.0)) throw ValidationError("dynamical_bounds: t must be nonnegative");
  DynamicalBounds b;
  b.c_lower = std::exp(-2.0 * secular.gamma_max * t) * c0;
  const double decay = std::exp(-rates.k * t);
  b.eps_q_upper = decay * eps0 + rates.eps_bar * (1.0 - decay);
  const double denom = b.c_lower + b.eps_q_upper;
  b.r2_lower = denom > 0.0 ? b.c_lower / denom : 0.0;
  return b;
}

}  // namespace bcert
