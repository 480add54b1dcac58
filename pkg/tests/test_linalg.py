import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entgeo.errors import DimMismatch, NotHermitian
from entgeo.linalg import (embed_local, hermitian_eig, is_hermitian, kron, matrix_sqrt_psd, partial_trace,
                           partial_transpose, trace_norm)
from entgeo.states import named_state

from conftest import random_hermitian


def test_kron_identities():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))
    assert kron(np.eye(2), np.eye(3), np.eye(2)).shape == (12, 12)


def test_eig_small_known():
    assert np.allclose(hermitian_eig(np.diag([1.0, -1.0])).eigenvalues, [1, -1], atol=1e-12)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    e = hermitian_eig(x)
    assert np.allclose(e.eigenvalues, [1, -1], atol=1e-12)
    v = e.eigenvectors[:, 0]
    assert abs(abs(v[0]) - 1 / math.sqrt(2)) < 1e-12


def test_eig_w_marginal():
    w = named_state("w")
    rho_a = partial_trace(w.density(), w.dims, [0])
    assert np.allclose(hermitian_eig(rho_a).eigenvalues, [2 / 3, 1 / 3], atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimMismatch):
        hermitian_eig(np.ones((2, 3)))


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 16), seed=st.integers(0, 2**40))
def test_eig_reconstruction(dim, seed):
    h = random_hermitian(dim, seed)
    e = hermitian_eig(h)
    v = e.eigenvectors
    assert np.all(np.diff(e.eigenvalues) <= 1e-15)
    assert np.max(np.abs(h - (v * e.eigenvalues) @ v.conj().T)) <= 1e-10 * max(1.0, np.abs(h).max()) * dim
    assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10


def test_eig_matches_numpy(herm):
    h = herm(9, 5)
    assert np.allclose(hermitian_eig(h).eigenvalues, np.linalg.eigvalsh(h)[::-1], atol=1e-11)


def test_eig_degenerate_is_deterministic():
    h = np.eye(4)
    a = hermitian_eig(h)
    b = hermitian_eig(h.copy())
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_trace_norm_cases():
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0, abs=1e-12)
    zz = np.zeros((4, 4))
    zz[0, 0] = 1
    # overlap 1/2 between the two pure states
    assert trace_norm(zz - named_state("bell").density()) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert trace_norm(np.zeros((3, 3))) == 0.0


def test_trace_norm_non_hermitian_is_nuclear_norm(herm):
    a = herm(5, 1) + 1j * herm(5, 2) @ herm(5, 3)
    assert trace_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False).sum(), rel=1e-10)


def test_trace_norm_triangle(herm):
    for k in range(10):
        a, b = herm(6, 10 + k), herm(6, 50 + k)
        assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10


def test_partial_trace_and_transpose_bell():
    phi = named_state("bell").density()
    assert np.allclose(partial_trace(phi, [2, 2], [0]), np.eye(2) / 2)
    pt = partial_transpose(phi, [2, 2], 1)
    assert hermitian_eig(pt).eigenvalues[-1] == pytest.approx(-0.5, abs=1e-12)


def test_partial_trace_product(herm):
    a = herm(2, 1)
    b = herm(3, 2)
    b = b @ b
    b /= np.trace(b)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [0]), a, atol=1e-12)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [1]), np.trace(a) * b, atol=1e-12)


def test_partial_trace_dim_errors():
    with pytest.raises(DimMismatch):
        partial_trace(np.eye(4), [2, 3], [0])


def test_embed_local():
    x = np.array([[0, 1], [1, 0]])
    assert np.array_equal(embed_local(x, [2, 3], 0), np.kron(x, np.eye(3)))
    assert np.array_equal(embed_local(np.eye(3), [2, 3], 1), np.eye(6))


def test_matrix_sqrt_psd(herm):
    h = herm(5, 3)
    psd = h @ h
    r = matrix_sqrt_psd(psd)
    assert np.allclose(r @ r, psd, atol=1e-10)
    assert is_hermitian(r)
