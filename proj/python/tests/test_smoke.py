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

import math
import os
from pathlib import Path

import numpy as np
import pytest

import bcert

SCENARIOS = Path(os.environ.get("BCERT_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def pure(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def test_relative_entropy_against_numpy():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    sigma = np.diag([0.5, 0.3, 0.2]).astype(complex)
    w, v = np.linalg.eigh(rho)
    log_rho = v @ np.diag(np.log(w)) @ v.conj().T
    expected = np.trace(rho @ (log_rho - np.diag(np.log([0.5, 0.3, 0.2])))).real
    assert bcert.relative_entropy(rho, sigma) == pytest.approx(expected, abs=1e-12)
    assert math.isinf(bcert.relative_entropy(np.eye(2) / 2, pure([1, 0])))


def test_activation_of_pure_coherent_state():
    eps0 = 0.1
    rho = pure([math.sqrt(1 - eps0), math.sqrt(eps0)])
    p = np.diag([1.0, 0.0])
    a = bcert.activation(rho, p)
    assert a["c"] == pytest.approx(eps0 * (1 - eps0))
    assert a["eps_q"] == pytest.approx(eps0)
    assert a["a_func"] ** 2 == pytest.approx(a["c"] + a["eps_q"])
    assert bcert.coherence_entropy(pure([1, 1]), p) == pytest.approx(math.log(2))


def test_scalar_helpers():
    assert bcert.log_mean(1.0, math.e) == pytest.approx(1 / (math.e - 1))
    assert bcert.near_boundary_threshold(0.8) == pytest.approx(0.8 * math.exp(-5))
    x = bcert.invert_modulus(0.7, 0.01)
    assert x * x * math.log(0.7 / x) == pytest.approx(0.01)
    assert bcert.dominance_window(0.6, 1.0, 3.0, 0.0099, 0.01, 1e-3) is None
    t = bcert.dominance_window(0.5, 1.0, 3.0, 0.0099, 0.01, 1e-3)
    assert t == pytest.approx(math.log(0.0197 / 1e-3))
    d0 = np.diag([0.6, 0.4])
    y = np.array([[0, 0.2], [0.2, 0]])
    assert bcert.bkm_integral(d0, y) == pytest.approx(bcert.relative_entropy(d0 + y, d0), abs=1e-9)
    assert bcert.fidelity(pure([1, 0]), pure([1, 1])) == pytest.approx(math.sqrt(0.5))


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        bcert.relative_entropy(np.eye(2), np.eye(2) / 2)
    with pytest.raises(bcert.DomainError):
        bcert.log_mean(0.0, 1.0)
    with pytest.raises(bcert.SecularRefusal):
        bcert.evolve_csv(str(SCENARIOS / "degenerate_gap.json"))


def test_verify_is_deterministic():
    ok_a, text_a = bcert.verify("entropy", 10, 5)
    ok_b, text_b = bcert.verify("entropy", 10, 5, threads=1)
    assert ok_a and ok_b
    assert text_a == text_b


def test_scenario_commands():
    code, csv = bcert.evolve_csv(str(SCENARIOS / "qubit_golden.json"))
    assert code == 0
    lines = csv.splitlines()
    assert lines[0] == "t,trace_dist,rel_entropy,c,eps_Q,A,R2,c_lower,epsQ_upper,lc_ok,cd_ok"
    assert len(lines) == 201
    code, csv = bcert.certify_csv(str(SCENARIOS / "qubit_golden.json"))
    assert code == 0
    assert csv.startswith("t,entropy_bound,a_cert,envelope,on_branch,T_star,t0,c_prime")
