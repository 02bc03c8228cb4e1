import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdiscord import _accel, _kernels, qlinalg
from superdiscord import measurements as ms

from conftest import random_state

IMPLEMENTATIONS = {
    "numba": _kernels.conditional_entropy_numba,
    "numpy": _kernels.conditional_entropy_numpy,
}


def reference_conditional_entropy(rho, theta, phi, x):
    """Average conditional entropy via explicit operators and partial traces."""
    d = ms.BlochDirection.from_angles(theta, phi)
    total = 0.0
    for outcome in "+-":
        try:
            res = ms.conditional_state_weak(rho, d, x, outcome)
        except ms.ZeroProbability:
            continue
        total += res.probability * qlinalg.von_neumann_entropy(res.state)
    return total


@pytest.mark.parametrize("name", sorted(IMPLEMENTATIONS))
@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 4.0, math.inf])
def test_kernel_matches_reference(name, x, rng):
    kernel = IMPLEMENTATIONS[name]
    rho = np.ascontiguousarray(random_state(rng))
    th = rng.uniform(0, math.pi, 25)
    ph = rng.uniform(0, 2 * math.pi, 25)
    got = kernel(rho, th, ph, ms.strength_tanh(x))
    want = [reference_conditional_entropy(rho, a, b, x) for a, b in zip(th, ph)]
    np.testing.assert_allclose(got, want, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.floats(0.0, 1.0))
def test_backends_agree(seed, rank, t):
    rng = np.random.default_rng(seed)
    rho = np.ascontiguousarray(random_state(rng, rank))
    th = rng.uniform(0, math.pi, 64)
    ph = rng.uniform(0, 2 * math.pi, 64)
    a = _kernels.conditional_entropy_numba(rho, th, ph, t)
    b = _kernels.conditional_entropy_numpy(rho, th, ph, t)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_pure_product_skips_zero_probability_outcome():
    rho = np.diag([1.0, 0, 0, 0]).astype(complex)
    th = np.array([0.0])
    ph = np.array([0.0])
    for kernel in IMPLEMENTATIONS.values():
        assert kernel(rho, th, ph, 1.0)[0] == pytest.approx(0.0, abs=1e-15)


def test_dispatch_follows_flag(monkeypatch):
    rho = qlinalg.validate_state(np.eye(4) / 4)
    th = np.array([0.3])
    ph = np.array([0.2])
    for flag in (True, False):
        monkeypatch.setattr(_accel, "USE_NUMBA", flag)
        assert _kernels.conditional_entropy(rho, th, ph, 0.5)[0] == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("value,expected", [("1", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(value, expected):
    env = dict(os.environ, SUPERDISCORD_DISABLE_NUMBA=value)
    out = subprocess.run(
        [sys.executable, "-c", "import superdiscord; print(superdiscord.backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected
