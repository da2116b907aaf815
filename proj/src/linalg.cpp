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

#include "bcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bcert {

double hermitian_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("HermitianMatrix: matrix is not square");
  }
  if (m.rows() == 0) {
    throw ValidationError("HermitianMatrix: empty matrix");
  }
  if (!m.allFinite()) {
    throw ValidationError("HermitianMatrix: non-finite entry");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double defect = hermitian_defect(m);
  if (defect > tol::kHermitian * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: asymmetry " << defect << " exceeds " << tol::kHermitian
       << " * max|entry| = " << tol::kHermitian * scale;
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& diag) {
  return HermitianMatrix(Matrix(diag.cast<Complex>().asDiagonal()));
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(Matrix(a.m_ + b.m_));
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(Matrix(a.m_ - b.m_));
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(Matrix(s * a.m_));
}

DensityMatrix::DensityMatrix(const HermitianMatrix& h) : h_(h) {
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1 by more than " << tol::kTrace;
    throw ValidationError(os.str());
  }
  const double lmin = min_eigenvalue(h);
  if (lmin < -tol::kPsd) {
    std::ostringstream os;
    os << "DensityMatrix: eigenvalue " << lmin << " below " << -tol::kPsd;
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw ValidationError("DensityMatrix::pure: zero vector");
  const Vector u = psi / n;
  return DensityMatrix(Matrix(u * u.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix(Matrix::Identity(dim, dim) / static_cast<double>(dim)));
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

HermitianMatrix matrix_function(const SpectralDecomposition& ed,
                                const std::function<double(double)>& f, double clip_floor) {
  if (clip_floor < 0.0) throw ValidationError("matrix_function: clip_floor must be >= 0");
  RealVector fv(ed.eigenvalues.size());
  for (Index i = 0; i < fv.size(); ++i) {
    double lambda = ed.eigenvalues(i);
    if (clip_floor > 0.0 && lambda < clip_floor) lambda = clip_floor;
    fv(i) = f(lambda);
    if (!std::isfinite(fv(i))) {
      std::ostringstream os;
      os << "matrix_function: f undefined at eigenvalue " << lambda;
      throw DomainError(os.str());
    }
  }
  return HermitianMatrix(
      Matrix(ed.eigenvectors * fv.cast<Complex>().asDiagonal() * ed.eigenvectors.adjoint()));
}

HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                                double clip_floor) {
  return matrix_function(eig_hermitian(m), f, clip_floor);
}

HermitianMatrix matrix_log(const HermitianMatrix& m, double clip_floor) {
  return matrix_function(
      m,
      [](double x) {
        return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
      },
      clip_floor);
}

HermitianMatrix matrix_exp(const HermitianMatrix& m) {
  return matrix_function(m, [](double x) { return std::exp(x); });
}

HermitianMatrix matrix_sqrt(const HermitianMatrix& m, double psd_tol) {
  return matrix_function(m, [psd_tol](double x) {
    if (x >= 0.0) return std::sqrt(x);
    return x >= -psd_tol ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  });
}

HermitianMatrix matrix_inv_sqrt(const HermitianMatrix& m) {
  return matrix_function(m, [](double x) {
    return x > 0.0 ? 1.0 / std::sqrt(x) : std::numeric_limits<double>::infinity();
  });
}

Norms norms(const HermitianMatrix& m) {
  const RealVector ev = eig_hermitian(m).eigenvalues;
  Norms n;
  n.trace_norm = ev.cwiseAbs().sum();
  n.frobenius = std::sqrt(ev.squaredNorm());
  n.op = ev.cwiseAbs().maxCoeff();
  return n;
}

double trace_distance(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  return norms(rho - sigma).trace_norm;
}

double min_eigenvalue(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

HermitianMatrix compress(const HermitianMatrix& m, const Matrix& w) {
  return HermitianMatrix(Matrix(w.adjoint() * m.matrix() * w));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 finalizer applied to a mixed word.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ index);
}

Matrix random_ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Fill in a fixed order so outputs depend only on the generator state.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

HermitianMatrix random_hermitian(Index dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  return HermitianMatrix(Matrix(0.5 * (g + g.adjoint())));
}

Matrix random_unitary(Index dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Vector random_unit_vector(Index dim, Rng& rng) {
  Vector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density(Index dim, Index rank, Rng& rng) {
  if (dim < 1) throw ValidationError("random_density: dim must be >= 1");
  if (rank < 1 || rank > dim) {
    throw ValidationError("random_density: rank must satisfy 1 <= rank <= dim");
  }
  const Matrix g = random_ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

}  // namespace bcert
