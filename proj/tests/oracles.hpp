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

// Independent reference implementations for tests. Nothing here calls the
// library's spectral code: Hermitian matrices are mapped to their real
// symmetric embedding [[X, -Y], [Y, X]] and diagonalized by cyclic Jacobi
// rotations in long double.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using LD = long double;
using LMatrix = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<LD, Eigen::Dynamic, 1>;

struct Eigh {
  LVector values;
  LMatrix vectors;  // columns
};

inline Eigh jacobi(LMatrix a) {
  const Eigen::Index n = a.rows();
  LMatrix v = LMatrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    LD off = 0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-38L) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300L) continue;
        const LD theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const LD t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const LD c = 1 / std::sqrt(t * t + 1);
        const LD s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const LD akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const LD apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const LD vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {a.diagonal(), v};
}

inline LMatrix embed(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  LMatrix e(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const LD x = h(i, j).real(), y = h(i, j).imag();
      e(i, j) = x;
      e(i, j + n) = -y;
      e(i + n, j) = y;
      e(i + n, j + n) = x;
    }
  }
  return e;
}

/// Eigenvalues of a Hermitian matrix, ascending. The embedding doubles each
/// eigenvalue; every second one is kept.
inline std::vector<LD> eigenvalues(const Eigen::MatrixXcd& h) {
  const Eigh ed = jacobi(embed(h));
  std::vector<LD> ev(ed.values.data(), ed.values.data() + ed.values.size());
  std::sort(ev.begin(), ev.end());
  std::vector<LD> out;
  for (std::size_t i = 0; i < ev.size(); i += 2) out.push_back(ev[i]);
  return out;
}

/// f applied spectrally to the embedding of h.
inline LMatrix spectral_apply(const Eigen::MatrixXcd& h, const std::function<LD(LD)>& f) {
  const Eigh ed = jacobi(embed(h));
  LVector fv(ed.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(ed.values(i));
  return ed.vectors * fv.asDiagonal() * ed.vectors.transpose();
}

/// Tr[rho (log rho - log sigma)] for faithful sigma; 0 log 0 = 0.
inline LD relative_entropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  LD xlogx = 0;
  for (LD v : eigenvalues(rho)) {
    if (v > 0) xlogx += v * std::log(v);
  }
  const LMatrix log_sigma = spectral_apply(sigma, [](LD v) { return std::log(v); });
  // Traces over the embedding count every term twice.
  const LD cross = (embed(rho) * log_sigma).trace() / 2;
  return xlogx - cross;
}

/// D(D0 + Y || D0) for D0 = diag(a, c), Y = [[0, s], [conj s, 0]] from the
/// closed-form eigenvalues of a 2x2 matrix.
inline LD taylor_remainder_2x2(LD a, LD c, LD s_abs) {
  const LD mean = (a + c) / 2, half = (a - c) / 2;
  const LD rad = std::sqrt(half * half + s_abs * s_abs);
  const LD l1 = mean + rad, l2 = mean - rad;
  LD xlogx = 0;
  if (l1 > 0) xlogx += l1 * std::log(l1);
  if (l2 > 0) xlogx += l2 * std::log(l2);
  // The diagonal of D0 + Y equals that of D0.
  return xlogx - a * std::log(a) - c * std::log(c);
}

}  // namespace oracle
