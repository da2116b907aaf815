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

// Seeded instance generators for the verification suites.

#pragma once

#include <cstdint>
#include <vector>

#include "bcert/activation.hpp"
#include "bcert/harness/scenario.hpp"
#include "bcert/linalg.hpp"

namespace bcert::harness {

/// Random split of C^d into a Haar-random r-dimensional P and its complement.
SupportSplit random_split(Index dim, Index r, Rng& rng);

/// Full-rank state that is block diagonal for `split`, with block weights
/// drawn uniformly.
DensityMatrix random_block_diagonal(const SupportSplit& split, Rng& rng);

/// Full-rank state block diagonal for an arbitrary projector family.
DensityMatrix random_block_diagonal(const std::vector<Matrix>& projectors, Rng& rng);

/// State with lambda_min(P rho P) >= a0, 0 < eps_Q <= eps_max and c > 0.
/// eps_Q is log-uniform over three decades below eps_max; the blocks are
///   A = a0 I + (1 - eps_Q - r a0) tau_P,  C = eps_Q tau_Q,
///   B = kappa A^{1/2} x y^dag C^{1/2},  0 < kappa < 1,
/// which is PSD by construction. Every draw is re-checked and redrawn when
/// a predicate fails; ValidationError after 10^4 rejections.
DensityMatrix sample_regime_state(const SupportSplit& split, double a0, double eps_max, Rng& rng);
DensityMatrix sample_regime_state(const SupportSplit& split, double a0, double eps_max,
                                  std::uint64_t seed);

struct HierarchyInstance {
  std::vector<Matrix> projectors;  // sector projectors P_1..P_K in the standard basis
  DensityMatrix rho;
  DensityMatrix sigma;  // full rank, block diagonal for the sector family
  double q = 0.1;
  double kappa = 0.0;
};

/// K sectors of dimension 1 or 2 with weights proportional to q^{k-1} and
/// rho = G (I + kappa H) G, G = (+)_k D_k^{1/2}, H Hermitian, off-block,
/// ||H||_op <= 1, kappa in [0.1, 0.5].
HierarchyInstance sample_geometric_hierarchy(Index sectors, Rng& rng, double q = 0.1);

/// Random model with distinct generic energies on d levels, one or two
/// random real couplings, Fermi rates and a pure coherent initial state.
Scenario random_secular_scenario(Index dim, Rng& rng);

}  // namespace bcert::harness
