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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bcert/errors.hpp"

namespace bcert::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

namespace detail {

// Kronrod abscissae on [-1, 1] (positive half) and weights; the odd-indexed
// abscissae are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error, abs_value;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename F>
Interval gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature on [a, b]. Bisects the
/// interval with the largest error estimate until the summed estimate drops
/// below rel_tol * |I| (or the round-off floor). Throws NumericalError with
/// diagnostics if max_evaluations is reached first.
template <typename F>
Result integrate(F&& f, double a, double b, double rel_tol, int max_evaluations = 1 << 14) {
  std::vector<detail::Interval> heap;
  heap.push_back(detail::gk15(f, a, b));
  Result out;
  out.evaluations = 15;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (;;) {
    double value = 0.0, error = 0.0, abs_value = 0.0;
    for (const auto& iv : heap) {
      value += iv.value;
      error += iv.error;
      abs_value += iv.abs_value;
    }
    out.value = value;
    out.error = error;
    out.intervals = static_cast<int>(heap.size());
    if (!std::isfinite(value)) {
      throw NumericalError("quadrature: integrand produced a non-finite value");
    }
    if (error <= rel_tol * std::abs(value) || error <= 50.0 * eps * abs_value) return out;
    if (out.evaluations + 30 > max_evaluations) {
      std::ostringstream os;
      os << "quadrature: no convergence after " << out.evaluations
         << " evaluations; estimate " << value << ", error " << error << ", requested relative "
         << rel_tol << ", worst interval [" << heap.front().a << ", " << heap.front().b << "]";
      throw NumericalError(os.str());
    }
    std::pop_heap(heap.begin(), heap.end());
    const detail::Interval worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::gk15(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(detail::gk15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end());
    out.evaluations += 30;
  }
}

}  // namespace bcert::quadrature
