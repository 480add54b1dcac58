import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entgeo.errors import BadParams, DimMismatch, NotBipartite, NotPure, NotQubits
from entgeo.linalg import kron
from entgeo.measures import (MeasureReport, concurrence_pure, continuity_gap, dbar_sep_two_qubit, dsep_prime_pure,
                             dsep_prime_x_state, monogamy_residual, monogamy_terms, wootters_concurrence,
                             x_state_params)
from entgeo.states import QuantumState, named_state, random_density, random_pure, random_unitary, schmidt_ket


@pytest.mark.parametrize("l1, expected", [
    (1 / math.sqrt(2), 1.0),
    (0.75, 0.9921567416492215),
    (0.9, 0.7846018098373212),
    (0.95, 0.5932748098),
    (1.0, 0.0),
])
def test_dsep_prime_qubit_grid(l1, expected):
    psi = schmidt_ket([l1, math.sqrt(1 - l1 * l1)])
    assert dsep_prime_pure(psi) == pytest.approx(expected, abs=1e-10)


def test_dsep_prime_flat_region_in_higher_dims():
    assert dsep_prime_pure(schmidt_ket([0.5] * 4)) == 1.0
    assert dsep_prime_pure(schmidt_ket([0.6, 0.6, math.sqrt(0.28)])) == 1.0


def test_dsep_prime_scope_errors():
    with pytest.raises(NotPure):
        dsep_prime_pure(named_state("werner", 0.5))
    with pytest.raises(NotBipartite):
        dsep_prime_pure(named_state("ghz"))


def test_concurrence_pure_values():
    assert concurrence_pure(named_state("bell")) == pytest.approx(1.0)
    assert concurrence_pure(named_state("product", "01")) == pytest.approx(0.0, abs=1e-12)
    a = 0.8
    assert concurrence_pure(schmidt_ket([a, 0.6])) == pytest.approx(2 * a * 0.6)


def test_wootters_known_values():
    assert wootters_concurrence(named_state("bell").density()) == pytest.approx(1.0, abs=1e-10)
    assert wootters_concurrence(named_state("werner", 0.8)) == pytest.approx(0.7, abs=1e-10)
    assert wootters_concurrence(named_state("werner", 0.3)) == 0.0
    assert wootters_concurrence(np.eye(4) / 4) == 0.0
    with pytest.raises(DimMismatch):
        wootters_concurrence(np.eye(8) / 8)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**40))
def test_wootters_equals_pure_concurrence(seed):
    psi = random_pure([2, 2], seed)
    assert wootters_concurrence(psi) == pytest.approx(concurrence_pure(psi), abs=1e-7)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**40))
def test_dsep_prime_local_unitary_invariance(seed):
    psi = random_pure([3, 3], seed)
    u = kron(random_unitary(3, seed + 1), random_unitary(3, seed + 2))
    moved = QuantumState.pure(u @ psi.data, [3, 3])
    assert abs(dsep_prime_pure(psi) - dsep_prime_pure(moved)) <= 1e-8


def test_dbar_is_wootters():
    rho = random_density([2, 2], 3, 5)
    assert dbar_sep_two_qubit(rho) == wootters_concurrence(rho)


def test_x_state():
    assert dsep_prime_x_state(0.5, 0.5, 0.5) == pytest.approx(1.0)
    assert dsep_prime_x_state(0.6, 0.2 + 0.1j, 0.4) == pytest.approx(2 * abs(0.2 + 0.1j))
    with pytest.raises(BadParams):
        dsep_prime_x_state(0.5, 0.6, 0.5)
    a0, a1, a2 = x_state_params(named_state("x_state", 0.7, 0.3j, 0.3))
    assert (a0, a2) == pytest.approx((0.7, 0.3)) and a1 == pytest.approx(0.3j)
    assert x_state_params(named_state("werner", 0.5)) is None


def test_monogamy_reference_states():
    assert monogamy_residual(named_state("w")) == pytest.approx(0.0, abs=1e-8)
    assert monogamy_residual(named_state("ghz")) == pytest.approx(1.0, abs=1e-8)
    lhs, pairs = monogamy_terms(named_state("w"))
    assert lhs == pytest.approx(8 / 9) and pairs == pytest.approx([4 / 9, 4 / 9])


def test_monogamy_errors():
    with pytest.raises(NotQubits):
        monogamy_terms(random_pure([3, 2, 2], 1))
    with pytest.raises(NotPure):
        monogamy_terms(random_density([2, 2, 2], 2, 1))
    with pytest.raises(BadParams):
        monogamy_residual(named_state("w"), pivot=1)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(3, 5), seed=st.integers(0, 2**40))
def test_monogamy_nonnegative(n, seed):
    assert monogamy_residual(random_pure([2] * n, seed)) >= -1e-8


def test_continuity_gap_bell_vs_product():
    bell, zero = named_state("bell"), named_state("product", "00")
    gap = continuity_gap(bell, zero, (dsep_prime_pure(bell), dsep_prime_pure(zero)))
    assert gap == pytest.approx(math.sqrt(2) - 1, abs=1e-12)


def test_report_validation():
    rep = MeasureReport("dsep-prime", 1.0, "exact", "analytic")
    assert rep.to_dict()["bound"] == "exact"
    with pytest.raises(BadParams):
        MeasureReport("dsep-prime", -1.0, "exact", "analytic")
    with pytest.raises(BadParams):
        MeasureReport("dsep-prime", 1.0, "rough", "analytic")
