# Copyright 2026 The bcert Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Activation certificates for Davies semigroups near the boundary of the state space."""

from ._core import (
    DomainError,
    SecularRefusal,
    ValidationError,
    activation,
    bkm_integral,
    certify_csv,
    coherence_entropy,
    dominance_window,
    evolve_csv,
    fidelity,
    invert_modulus,
    log_mean,
    modulus_lower,
    near_boundary_threshold,
    relative_entropy,
    verify,
)

__all__ = [
    "DomainError",
    "SecularRefusal",
    "ValidationError",
    "activation",
    "bkm_integral",
    "certify_csv",
    "coherence_entropy",
    "dominance_window",
    "evolve_csv",
    "fidelity",
    "invert_modulus",
    "log_mean",
    "modulus_lower",
    "near_boundary_threshold",
    "relative_entropy",
    "verify",
]
