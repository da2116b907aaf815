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

#include "bcert/entropy.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "bcert/quadrature.hpp"

namespace bcert {

namespace {

constexpr double kProjectorTol = 1e-11;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) throw DomainError("ExtendedReal: value requested from +infinity");
  return value_;
}

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value_, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

PinchingSpec::PinchingSpec(std::vector<Matrix> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw ValidationError("PinchingSpec: empty projector family");
  const Index d = projectors_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const Matrix& p = projectors_[i];
    if (p.rows() != d || p.cols() != d) {
      throw ValidationError("PinchingSpec: projector dimensions disagree");
    }
    if (max_abs(p * p - p) > kProjectorTol || hermitian_defect(p) > kProjectorTol) {
      throw ValidationError("PinchingSpec: P_" + std::to_string(i) + " is not an orthogonal projector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(p * projectors_[j]) > kProjectorTol) {
        throw ValidationError("PinchingSpec: P_" + std::to_string(j) + " and P_" +
                              std::to_string(i) + " are not orthogonal");
      }
    }
    sum += p;
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > kProjectorTol) {
    throw ValidationError("PinchingSpec: projectors do not sum to the identity");
  }
}

PinchingSpec PinchingSpec::two_block(const Matrix& p) {
  return PinchingSpec({p, Matrix::Identity(p.rows(), p.cols()) - p});
}

Matrix PinchingSpec::apply(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& p : projectors_) out += p * x * p;
  return out;
}

bool PinchingSpec::is_fixed_point(const Matrix& x, double tol) const {
  return max_abs(apply(x) - x) <= tol;
}

double default_support_tolerance(Index dim) { return 1e-10 * static_cast<double>(dim); }

double trace_x_log_x(const HermitianMatrix& x) {
  const RealVector ev = eig_hermitian(x).eigenvalues;
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 0.0) s += ev(i) * std::log(ev(i));
  }
  return s;
}

ExtendedReal relative_entropy_psd(const HermitianMatrix& x, const HermitianMatrix& y,
                                  std::optional<double> supp_tol) {
  if (x.dim() != y.dim()) throw ValidationError("relative_entropy: dimension mismatch");
  const double tol = supp_tol.value_or(default_support_tolerance(x.dim()));
  const SpectralDecomposition ey = eig_hermitian(y);
  // Diagonal of X in the eigenbasis of Y.
  const Matrix xt = ey.eigenvectors.adjoint() * x.matrix() * ey.eigenvectors;
  double outside = 0.0;
  double cross = 0.0;
  for (Index k = 0; k < ey.eigenvalues.size(); ++k) {
    const double w = xt(k, k).real();
    if (ey.eigenvalues(k) > tol) {
      cross += w * std::log(ey.eigenvalues(k));
    } else {
      outside += w;
    }
  }
  if (outside > tol) return ExtendedReal::infinity();
  return trace_x_log_x(x) - cross;
}

ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              std::optional<double> supp_tol) {
  return relative_entropy_psd(rho.hermitian(), sigma.hermitian(), supp_tol);
}

DensityMatrix pinch(const DensityMatrix& rho, const PinchingSpec& spec) {
  if (spec.dim() != rho.dim()) throw ValidationError("pinch: dimension mismatch");
  return DensityMatrix(spec.apply(rho.matrix()));
}

ExtendedReal coherence_entropy(const DensityMatrix& rho, const PinchingSpec& spec) {
  const DensityMatrix pinched = pinch(rho, spec);
  return trace_x_log_x(rho.hermitian()) - trace_x_log_x(pinched.hermitian());
}

namespace {

// PSD square root in which eigenvalues below the round-off floor of the
// spectrum are set to zero.
Matrix resolved_sqrt(const HermitianMatrix& x, const char* who) {
  const SpectralDecomposition ed = eig_hermitian(x);
  const double top = ed.eigenvalues.cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, top);
  if (ed.eigenvalues(0) < -tol::kPsd * scale) {
    std::ostringstream os;
    os << who << ": argument is not positive semidefinite (lambda_min = " << ed.eigenvalues(0) << ")";
    throw DomainError(os.str());
  }
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(x.dim()) * top;
  RealVector s(ed.eigenvalues.size());
  for (Index i = 0; i < s.size(); ++i) {
    s(i) = ed.eigenvalues(i) > floor ? std::sqrt(ed.eigenvalues(i)) : 0.0;
  }
  return ed.eigenvectors * s.cast<Complex>().asDiagonal() * ed.eigenvectors.adjoint();
}

}  // namespace

double fidelity(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim()) throw ValidationError("fidelity: dimension mismatch");
  const Matrix k = resolved_sqrt(x, "fidelity") * resolved_sqrt(y, "fidelity");
  // Nuclear norm of sqrt(X) sqrt(Y).
  return Eigen::JacobiSVD<Matrix>(k).singularValues().sum();
}

double bures_defect(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim()) throw ValidationError("bures_defect: dimension mismatch");
  const Matrix sx = resolved_sqrt(x, "bures_defect");
  const Matrix sy = resolved_sqrt(y, "bures_defect");
  const Eigen::JacobiSVD<Matrix> svd(sx * sy, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // sqrt(X) sqrt(Y) = U S W^dag; V = W U^dag attains max Re Tr(sqrt(X) sqrt(Y) V) = F.
  const Matrix v = svd.matrixV() * svd.matrixU().adjoint();
  return 0.5 * (sx - sy * v).squaredNorm();
}

double log_mean(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    std::ostringstream os;
    os << "log_mean: arguments must be positive (got " << x << ", " << y << ")";
    throw DomainError(os.str());
  }
  const double diff = x - y;
  if (std::abs(diff) <= 1e-8 * std::max(x, y)) {
    // (1/m)(1 + u^2/3) with m the arithmetic mean and u = (x - y)/(x + y).
    const double m = 0.5 * (x + y);
    const double u = diff / (x + y);
    return (1.0 + u * u / 3.0) / m;
  }
  const double ratio = x / y;
  if (ratio > 0.5 && ratio < 2.0) {
    // log x - log y = 2 artanh(u) avoids cancellation for nearby arguments.
    return 2.0 * std::atanh(diff / (x + y)) / diff;
  }
  return (std::log(x) - std::log(y)) / diff;
}

double bkm_form(const HermitianMatrix& m, const HermitianMatrix& y) {
  if (m.dim() != y.dim()) throw ValidationError("bkm_form: dimension mismatch");
  const SpectralDecomposition ed = eig_hermitian(m);
  if (!(ed.eigenvalues(0) > 0.0)) {
    std::ostringstream os;
    os << "bkm_form: M is not positive definite (lambda_min = " << ed.eigenvalues(0) << ")";
    throw DomainError(os.str());
  }
  const Matrix yt = ed.eigenvectors.adjoint() * y.matrix() * ed.eigenvectors;
  double h = 0.0;
  for (Index i = 0; i < yt.rows(); ++i) {
    for (Index j = 0; j < yt.cols(); ++j) {
      h += std::norm(yt(i, j)) * log_mean(ed.eigenvalues(i), ed.eigenvalues(j));
    }
  }
  return h;
}

QuadratureStats bkm_integral_stats(const HermitianMatrix& d0, const HermitianMatrix& y,
                                   double rel_tol) {
  if (d0.dim() != y.dim()) throw ValidationError("bkm_integral: dimension mismatch");
  if (!(rel_tol > 0.0)) throw ValidationError("bkm_integral: rel_tol must be positive");
  const Matrix& dm = d0.matrix();
  const double scale = max_abs(dm);
  const Matrix off = dm - Matrix(dm.diagonal().asDiagonal());
  if (max_abs(off) > 1e-14 * scale) throw ValidationError("bkm_integral: D0 is not diagonal");
  if (!(dm.diagonal().real().minCoeff() > 0.0)) {
    throw ValidationError("bkm_integral: D0 is not positive definite");
  }
  if (y.matrix().diagonal().cwiseAbs().maxCoeff() > 1e-14 * std::max(scale, 1.0)) {
    throw ValidationError("bkm_integral: Y must have zero diagonal");
  }
  const double lmin_end = min_eigenvalue(d0 + y);
  if (lmin_end < -1e-12 * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << "bkm_integral: D0 + Y is not PSD (lambda_min = " << lmin_end << ")";
    throw ValidationError(os.str());
  }
  QuadratureStats stats;
  if (max_abs(y.matrix()) == 0.0) return stats;

  auto integrand = [&](double t) {
    const HermitianMatrix mt(Matrix(dm + t * y.matrix()));
    return (1.0 - t) * bkm_form(mt, y);
  };
  const quadrature::Result r = quadrature::integrate(integrand, 0.0, 1.0, rel_tol);
  stats.value = r.value;
  stats.error_estimate = r.error;
  stats.evaluations = r.evaluations;
  stats.intervals = r.intervals;
  return stats;
}

double bkm_integral(const HermitianMatrix& d0, const HermitianMatrix& y, double rel_tol) {
  return bkm_integral_stats(d0, y, rel_tol).value;
}

ExtendedReal pinsker_gap(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const ExtendedReal d = relative_entropy(rho, sigma);
  if (d.is_infinite()) return d;
  const double tn = trace_distance(rho, sigma);
  return d.value() - 0.5 * tn * tn;
}

}  // namespace bcert
