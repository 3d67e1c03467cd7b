import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aip import kernels

BACKENDS = ["python"] + (["compiled"] if kernels.compiled_available() else [])


def _system(seed, h, k, m):
    r = np.random.default_rng(seed)
    A = (r.standard_normal((h, h)) + 1j * r.standard_normal((h, h))) / (2 * np.sqrt(h))
    R = r.standard_normal((h, k)) + 1j * r.standard_normal((h, k))
    z = 0.9 * np.sqrt(r.uniform(size=m)) * np.exp(2j * np.pi * r.uniform(size=m))
    return A, R, z


@pytest.mark.parametrize("backend", BACKENDS)
@given(seed=st.integers(0, 10_000), h=st.integers(1, 7), k=st.integers(1, 4), m=st.integers(1, 9))
def test_resolvent_matches_dense_solve(backend, seed, h, k, m):
    A, R, z = _system(seed, h, k, m)
    X = kernels.get_backend(backend).resolvent_solve(A, R, z)
    for i, zi in enumerate(z):
        assert np.allclose(X[i], np.linalg.solve(np.eye(h) - zi * A, R), atol=1e-10)


@pytest.mark.parametrize("backend", BACKENDS)
def test_transfer_matches_formula(backend, rng):
    h, p, q = 4, 3, 2
    A, _, z = _system(7, h, 1, 6)
    B = rng.standard_normal((h, q)) + 0j
    C = rng.standard_normal((p, h)) + 0j
    D = rng.standard_normal((p, q)) + 0j
    out = kernels.get_backend(backend).transfer_eval(A, B, C, D, z)
    assert out.shape == (6, p, q)
    for i, zi in enumerate(z):
        ref = D + zi * C @ np.linalg.solve(np.eye(h) - zi * A, B)
        assert np.allclose(out[i], ref, atol=1e-12)


def test_backends_agree():
    if not kernels.compiled_available():
        pytest.skip("compiled kernels not built")
    A, R, z = _system(3, 6, 3, 40)
    a = kernels.get_backend("compiled").resolvent_solve(A, R, z)
    b = kernels.get_backend("python").resolvent_solve(A, R, z)
    assert np.allclose(a, b, atol=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_env_forces_python_fallback():
    env = dict(os.environ, AIP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from aip import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_large_state_uses_numpy(monkeypatch):
    calls = []
    monkeypatch.setattr(kernels._kernels_py, "resolvent_solve",
                        lambda A, R, z: calls.append(len(A)) or np.zeros((1, len(A), 1)))
    A, R, z = _system(1, kernels.COMPILED_MAX_STATE + 1, 1, 1)
    kernels.resolvent_solve(A, R, z)
    assert calls == [kernels.COMPILED_MAX_STATE + 1]
