import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entgeo.errors import BadParams, DimMismatch, InvariantViolation, ParseError
from entgeo.linalg import hermitian_eig, partial_trace
from entgeo.states import (QuantumState, bipartition, complete_basis, ket, load_state, named_state, permute_parties,
                           random_density, random_pure, random_unitary, save_state, schmidt, schmidt_ket,
                           validate_x_params, x_state_matrix)


def test_invariants_rejected():
    with pytest.raises(InvariantViolation):
        QuantumState.pure([1.0, 1.0], [2])
    with pytest.raises(DimMismatch):
        QuantumState.pure([1.0, 0, 0], [2, 2])
    with pytest.raises(InvariantViolation):
        QuantumState.mixed(np.diag([1.5, -0.5]), [2])
    with pytest.raises(InvariantViolation):
        QuantumState.mixed(np.array([[0.5, 0.5], [0, 0.5]]), [2])
    with pytest.raises(BadParams):
        QuantumState("other", (2,), [1, 0])


def test_state_data_is_readonly():
    s = named_state("bell")
    with pytest.raises(ValueError):
        s.data[0] = 0


def test_named_states():
    assert named_state("bell").dims == (2, 2)
    w = named_state("w")
    assert np.allclose(np.abs(w.data[[1, 2, 4]]), 1 / math.sqrt(3))
    rho = named_state("werner", 0.8).density()
    assert rho[0, 0].real == pytest.approx(0.8 / 2 + 0.2 / 4)
    with pytest.raises(BadParams):
        named_state("werner", 1.5)
    with pytest.raises(BadParams):
        named_state("nonsense")


def test_x_state_validation():
    validate_x_params(0.6, 0.3, 0.4)
    with pytest.raises(BadParams):
        validate_x_params(0.5, 0.6, 0.5)
    with pytest.raises(BadParams):
        validate_x_params(0.5, 0.1, 0.6)
    m = x_state_matrix(0.6, 0.2j, 0.4)
    assert m[3, 0] == pytest.approx(-0.2j)


def test_schmidt_of_known_kets():
    sf = schmidt(schmidt_ket([0.8, 0.6]))
    assert np.allclose(sf.coefficients, [0.8, 0.6], atol=1e-12)
    sf = schmidt(named_state("bell"))
    assert np.allclose(sf.coefficients, [1 / math.sqrt(2)] * 2, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(da=st.integers(1, 4), db=st.integers(1, 4), seed=st.integers(0, 2**40))
def test_schmidt_reassembles(da, db, seed):
    psi = random_pure([da, db], seed)
    sf = schmidt(psi)
    assert np.all(np.diff(sf.coefficients) <= 1e-15)
    assert np.sum(sf.coefficients ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(sf.reassemble(), psi.data, atol=1e-10)


def test_complete_basis_is_unitary():
    col = np.array([[1.0], [1.0], [0.0]]) / math.sqrt(2)
    u = complete_basis(col, 3)
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-12)
    assert np.allclose(u[:, :1], col)


def test_ket_helper():
    assert np.array_equal(ket("10"), np.eye(4)[2])
    assert np.array_equal(ket([2, 0], [3, 2]), np.eye(6)[4])


def test_haar_purity_mean():
    # E Tr rho_A^2 = (dA + dB) / (dA dB + 1) for Haar kets
    vals = []
    for k in range(4000):
        psi = random_pure([2, 2], 1000 + k)
        rho_a = partial_trace(psi.density(), [2, 2], [0])
        vals.append(np.trace(rho_a @ rho_a).real)
    assert np.mean(vals) == pytest.approx(0.8, abs=0.01)


def test_random_density_rank_and_validity():
    rho = random_density([2, 2, 2], 8, 3)
    assert rho.dims == (2, 2, 2)
    r1 = random_density([2, 2], 1, 4)
    ev = hermitian_eig(r1.density()).eigenvalues
    assert ev[0] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(BadParams):
        random_density([2, 2], 5, 1)


def test_random_unitary():
    u = random_unitary(4, 9)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    assert np.array_equal(u, random_unitary(4, 9))


def test_save_load_round_trip_is_byte_identical():
    for state in (random_pure([2, 3], 5), random_density([2, 2], 3, 6), named_state("w")):
        blob = save_state(state)
        again = load_state(blob)
        assert save_state(again) == blob
        assert np.array_equal(again.data, state.data)


def test_load_errors_name_the_field():
    with pytest.raises(ParseError) as exc:
        load_state('{"dims": [2], "kind": "pure", "ket": [[1, 0], [0]]}')
    assert exc.value.field == "ket[1]"
    with pytest.raises(ParseError) as exc:
        load_state('{"dims": [2],\n "kind": "pure", "ket": [[1, 0] [0, 0]]}')
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc:
        load_state('{"dims": "2", "ket": []}')
    assert exc.value.field == "dims"
    with pytest.raises(InvariantViolation):
        load_state('{"dims": [2], "kind": "pure", "ket": [[1, 0], [1, 0]]}')


def test_permute_and_bipartition():
    psi = QuantumState.pure(ket("100"), [2, 2, 2])
    moved = permute_parties(psi, [1, 2, 0])
    assert np.array_equal(moved.data, ket("001"))
    mixed = permute_parties(psi.as_mixed(), [1, 2, 0])
    assert np.allclose(mixed.data, np.outer(ket("001"), ket("001")))
    cut = bipartition(named_state("ghz"), [0])
    assert cut.dims == (2, 4)
    assert np.allclose(schmidt(cut).coefficients, [1 / math.sqrt(2)] * 2)


def test_reduced_state():
    w = named_state("w")
    assert np.allclose(w.reduced([0]).data, np.diag([2 / 3, 1 / 3]))
