import math

import numpy as np
import pytest

from entgeo import channels as ch
from entgeo.errors import BadPOVM, DimMismatch, InvariantViolation
from entgeo.linalg import hermitian_eig, trace_norm
from entgeo.states import named_state, random_density, random_pure, schmidt_ket
from entgeo.verify import naimark_error, random_povm

from conftest import random_hermitian

MAPS = [
    (lambda m: ch.diagonal_twirl_bipartite(m, [2, 2]), 4),
    (lambda m: ch.diagonal_twirl_bipartite(m, [3, 3]), 9),
    (ch.phase_twirl_threequbit, 8),
    (lambda m: ch.permutation_symmetrize(m, [2, 2, 2]), 8),
    (ch.flip_average, 8),
    (ch.ghz_phase_twirl, 8),
    (ch.ghz_symmetrize, 8),
]


@pytest.mark.parametrize("fn, dim", MAPS)
def test_channel_properties(fn, dim):
    for k in range(20):
        a = random_hermitian(dim, 100 + k)
        out = fn(a)
        assert np.max(np.abs(fn(out) - out)) <= 1e-10
        assert abs(np.trace(out) - np.trace(a)) <= 1e-10
        assert trace_norm(out) <= trace_norm(a) + 1e-10
        rho = random_density([dim], 1 + k % dim, 200 + k).density()
        assert hermitian_eig(fn(rho)).eigenvalues[-1] >= -1e-10


def test_diagonal_twirl_pattern():
    m = np.arange(16, dtype=complex).reshape(4, 4)
    out = ch.diagonal_twirl_bipartite(m, [2, 2])
    keep = {(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0)}
    for i in range(4):
        for j in range(4):
            assert out[i, j] == (m[i, j] if (i, j) in keep else 0)
    with pytest.raises(DimMismatch):
        ch.diagonal_twirl_bipartite(np.eye(6), [2, 3])


def test_fixed_points():
    w = named_state("w").density()
    assert np.max(np.abs(ch.phase_twirl_threequbit(w) - w)) <= 1e-12
    psi = schmidt_ket([0.8, 0.6]).density()
    assert np.max(np.abs(ch.diagonal_twirl_bipartite(psi, [2, 2]) - psi)) <= 1e-12
    ghz = named_state("ghz").density()
    assert np.max(np.abs(ch.ghz_symmetrize(ghz) - ghz)) <= 1e-12


def test_ghz_projection_coordinates():
    p = ch.ghz_symmetry_project(named_state("ghz").density())
    assert p.family == "GHZ" and p.values == pytest.approx((0.5, 0.0, 0.5))
    assert ch.ghz_symmetry_project(np.eye(8) / 8).values == pytest.approx((1 / 8, 1 / 8, 0.0))
    assert ch.ghz_symmetry_project(named_state("w").density()).values == pytest.approx((0.0, 1 / 6, 0.0))
    assert np.allclose(ch.ReducedSymmetricParams("GHZ", (0.5, 0.0, 0.5)).matrix(), named_state("ghz").density())


def test_reduced_params_invariants():
    with pytest.raises(InvariantViolation):
        ch.ReducedSymmetricParams("GHZ", (0.1, 0.1, 0.5))
    with pytest.raises(InvariantViolation):
        ch.ReducedSymmetricParams("W", (1, 2, 3))
    w = ch.ReducedSymmetricParams("W", (0, 1, 0, 0)).matrix()
    assert np.allclose(w, named_state("w").density())


def test_permutation_two_sided_keeps_ghz():
    ghz = named_state("ghz").density()
    assert np.allclose(ch.permutation_symmetrize(ghz, [2, 2, 2], two_sided=True), ghz)


def test_pvm_types():
    assert len(ch.PVM.computational(3).projectors) == 3
    with pytest.raises(InvariantViolation):
        ch.PVM((np.diag([1.0, 0.0]),))
    with pytest.raises(BadPOVM):
        ch.POVM((np.diag([0.5, 0.5]),))
    with pytest.raises(BadPOVM):
        ch.POVM((np.diag([1.2, 0.5]), np.diag([-0.2, 0.5])))


def test_apply_local_pvm():
    branches = ch.apply_local_pvm(named_state("bell"), ch.PVM.computational(2), 0)
    assert [p for p, _ in branches] == pytest.approx([0.5, 0.5])
    assert all(b.is_pure for _, b in branches)
    branches = ch.apply_local_pvm(named_state("product", "01"), ch.PVM.computational(2), 1)
    assert len(branches) == 1 and branches[0][0] == pytest.approx(1.0)
    mixed = ch.apply_local_pvm(named_state("werner", 0.5), ch.PVM.computational(2), 1)
    assert sum(p for p, _ in mixed) == pytest.approx(1.0)
    with pytest.raises(DimMismatch):
        ch.apply_local_pvm(named_state("bell"), ch.PVM.computational(3), 0)


def test_naimark_trine():
    dil = ch.naimark_dilate(ch.trine_povm())
    assert dil.isometry.shape == (6, 2)
    assert np.allclose(dil.unitary.conj().T @ dil.unitary, np.eye(6), atol=1e-12)
    assert naimark_error(ch.trine_povm(), 20, 1) <= 1e-10


def test_naimark_projective_passthrough():
    pvm = ch.POVM(ch.PVM.computational(3).projectors)
    dil = ch.naimark_dilate(pvm)
    assert np.array_equal(dil.isometry, np.eye(3))


def test_naimark_random():
    for k in range(5):
        povm = random_povm(2 + k % 3, 2 + k, 10 + k)
        assert naimark_error(povm, 10, k) <= 1e-8


def test_direct_sum_zero():
    out = ch.direct_sum_zero(np.eye(2) / 2, 5)
    assert out.shape == (5, 5) and np.trace(out) == pytest.approx(1.0)
