import json
import os
import subprocess
import sys

import numpy as np
import pytest

from entgeo import _jit, kernels
from entgeo.kernels import backend_module
from entgeo.rng import SplitMix64
from entgeo.states import random_density

from conftest import random_hermitian

needs_numba = pytest.mark.skipif(not _jit.HAVE_NUMBA, reason="numba not installed")
DIMS = np.array([2, 2], dtype=np.int64)


def _theta(k, dims, seed):
    return SplitMix64(seed).normal(k * (1 + 2 * int(sum(dims))))


@pytest.mark.parametrize("name", ["numpy", pytest.param("numba", marks=needs_numba)])
def test_jacobi_backend(name):
    mod = backend_module(name)
    for dim in (1, 2, 5, 12):
        h = random_hermitian(dim, dim)
        w, v, sweeps, ok = mod.jacobi_eigh(h, 100, 1e-12)
        assert ok and sweeps >= 0
        assert np.allclose(np.sort(w), np.linalg.eigvalsh(h), atol=1e-11)
        assert np.allclose((v * w) @ v.conj().T, h, atol=1e-11)


@needs_numba
def test_backends_agree_on_objective():
    rho = random_density([2, 3], 6, 4).density()
    dims = np.array([2, 3], dtype=np.int64)
    for normalized in (False, True):
        theta = _theta(9, dims, 7)
        a = backend_module("numpy").ensemble_objective(theta, rho, dims, 9, normalized, 1e-3, True, 100)
        b = backend_module("numba").ensemble_objective(theta, rho, dims, 9, normalized, 1e-3, True, 100)
        assert a[0] == pytest.approx(b[0], rel=1e-10)
        assert a[1] == pytest.approx(b[1], rel=1e-10)
        assert np.allclose(a[3], b[3], atol=1e-9)


@pytest.mark.parametrize("normalized", [False, True])
def test_gradient_matches_finite_differences(normalized):
    rho = random_density([2, 2], 4, 2).density()
    theta = _theta(4, DIMS, 3)
    mu = 1e-2
    _, _, _, grad = kernels.ensemble_objective(theta, rho, DIMS, 4, normalized, mu, True, 100)
    h = 1e-6
    for idx in range(0, theta.size, 3):
        e = np.zeros_like(theta)
        e[idx] = h
        up = kernels.ensemble_objective(theta + e, rho, DIMS, 4, normalized, mu, False, 100)[0]
        dn = kernels.ensemble_objective(theta - e, rho, DIMS, 4, normalized, mu, False, 100)[0]
        assert grad[idx] == pytest.approx((up - dn) / (2 * h), abs=1e-6)


def test_objective_exact_value_is_trace_norm():
    from entgeo.linalg import trace_norm
    from entgeo.optimizer import ProductEnsemble, _unpack

    rho = random_density([2, 2], 3, 8).density()
    theta = _theta(5, DIMS, 9)
    _, exact, _, _ = kernels.ensemble_objective(theta, rho, DIMS, 5, False, 1e-3, False, 100)
    w2, kets = _unpack(theta, [2, 2], 5)
    assert exact == pytest.approx(trace_norm(rho - ProductEnsemble(w2, kets).assemble()), abs=1e-10)


@needs_numba
def test_w_grid_backends_agree():
    grid = np.concatenate([[0.0], np.logspace(-3, 0.5, 12)])
    a = backend_module("numpy").w_grid_min(grid)
    b = backend_module("numba").w_grid_min(grid)
    assert a[0] == pytest.approx(b[0], abs=1e-15)
    assert tuple(a[1]) == tuple(b[1])


_SNIPPET = """
import json
from entgeo import kernels
from entgeo.optimizer import OptimizerConfig, variational_distance
from entgeo.states import named_state, random_pure
rep, _ = variational_distance(random_pure([2, 2], 5), "sep-normalized",
                              OptimizerConfig(ensemble_size=8, restarts=2, max_iters=300, seed=1))
print(json.dumps({"backend": kernels.BACKEND, "value": rep.value}))
"""


def _run_backend(disable):
    env = dict(os.environ, ENTGEO_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", _SNIPPET], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_disable_flag_selects_numpy_backend():
    from entgeo.measures import concurrence_pure
    from entgeo.states import random_pure

    target = concurrence_pure(random_pure([2, 2], 5))
    slow = _run_backend(True)
    assert slow["backend"] == "numpy"
    assert slow["value"] == pytest.approx(target, abs=5e-3)
    if _jit.HAVE_NUMBA:
        fast = _run_backend(False)
        assert fast["backend"] == "numba"
        assert fast["value"] == pytest.approx(slow["value"], abs=5e-3)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("ENTGEO_THREADS", "3")
    assert _jit.thread_count() == 3
    monkeypatch.delenv("ENTGEO_THREADS")
    assert _jit.thread_count() == 1
