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

// Dense complex Hermitian matrix substrate: strong types for Hermitian and
// density matrices, spectral decomposition, spectral matrix functions, norms
// and seeded random ensembles. Everything here is a pure function.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "bcert/errors.hpp"

namespace bcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

namespace tol {
/// Relative asymmetry absorbed by symmetrization.
inline constexpr double kHermitian = 1e-12;
/// Most negative eigenvalue a density matrix may carry.
inline constexpr double kPsd = 1e-10;
/// Allowed deviation of a density matrix trace from one.
inline constexpr double kTrace = 1e-10;
}  // namespace tol

/// Complex matrix that is Hermitian up to float noise. Construction
/// symmetrizes inputs whose asymmetry is at most 1e-12 * max|entry| and
/// rejects anything worse.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  static HermitianMatrix zero(Index dim);
  static HermitianMatrix identity(Index dim);
  /// Wraps a real diagonal.
  static HermitianMatrix diagonal(const RealVector& diag);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  Complex trace() const { return m_.trace(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  Matrix m_;
};

/// Positive semidefinite Hermitian matrix of unit trace.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const HermitianMatrix& h);
  explicit DensityMatrix(const Matrix& m) : DensityMatrix(HermitianMatrix(m)) {}

  /// Pure state |psi><psi| after normalizing psi.
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return h_.dim(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const Matrix& matrix() const { return h_.matrix(); }
  operator const HermitianMatrix&() const { return h_; }

 private:
  HermitianMatrix h_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns

  Matrix reconstruct() const;
};

SpectralDecomposition eig_hermitian(const HermitianMatrix& m);

/// U f(Lambda) U^dagger. When clip_floor > 0, eigenvalues below it are raised
/// to clip_floor before f is applied. A non-finite f value is a DomainError.
HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                                double clip_floor = 0.0);
HermitianMatrix matrix_function(const SpectralDecomposition& ed,
                                const std::function<double(double)>& f, double clip_floor = 0.0);

/// Natural logarithm; strict (DomainError on a zero eigenvalue) unless clip_floor > 0.
HermitianMatrix matrix_log(const HermitianMatrix& m, double clip_floor = 0.0);
HermitianMatrix matrix_exp(const HermitianMatrix& m);
/// Square root of a PSD matrix; eigenvalues in [-psd_tol, 0) are treated as 0.
HermitianMatrix matrix_sqrt(const HermitianMatrix& m, double psd_tol = tol::kPsd);
/// Inverse square root of a positive definite matrix.
HermitianMatrix matrix_inv_sqrt(const HermitianMatrix& m);

struct Norms {
  double trace_norm = 0.0;
  double frobenius = 0.0;
  double op = 0.0;
};

Norms norms(const HermitianMatrix& m);

/// ||rho - sigma||_1.
double trace_distance(const HermitianMatrix& rho, const HermitianMatrix& sigma);

double min_eigenvalue(const HermitianMatrix& m);

/// max_ij |a_ij - conj(a_ji)|.
double hermitian_defect(const Matrix& m);

/// Compression W^dagger M W onto the span of the orthonormal columns of W.
HermitianMatrix compress(const HermitianMatrix& m, const Matrix& w);

/// Mixes (seed, stream, index) into a 64-bit seed; used for per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

/// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary
/// parts N(0, 1)).
Matrix random_ginibre(Index rows, Index cols, Rng& rng);
HermitianMatrix random_hermitian(Index dim, Rng& rng);
Matrix random_unitary(Index dim, Rng& rng);
Vector random_unit_vector(Index dim, Rng& rng);

/// G G^dagger / Tr(G G^dagger) with G a dim x rank complex Gaussian matrix.
DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed);
DensityMatrix random_density(Index dim, Index rank, Rng& rng);

}  // namespace bcert
