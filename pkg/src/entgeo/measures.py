"""Closed-form entanglement measures and the reports that carry them."""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, DimMismatch, NotBipartite, NotPure, NotQubits
from .linalg import hermitian_eig, matrix_sqrt_psd, partial_trace, trace_norm
from .states import QuantumState, schmidt, validate_x_params

BOUND_KINDS = ("exact", "upper", "lower")
_SY_SY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128)


@dataclass
class MeasureReport:
    measure: str
    value: float
    bound: str
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bound not in BOUND_KINDS:
            raise BadParams(f"bound must be one of {BOUND_KINDS}")
        if not math.isfinite(self.value) or self.value < 0.0:
            raise BadParams(f"measure value must be finite and nonnegative, got {self.value}")

    def to_dict(self):
        return {
            "measure": self.measure,
            "value": self.value,
            "bound": self.bound,
            "method": self.method,
            "diagnostics": self.diagnostics,
        }


def _require_pure_bipartite(state):
    if not state.is_pure:
        raise NotPure("pure bipartite state required")
    if state.n_parties != 2:
        raise NotBipartite(f"expected 2 parties, got {state.n_parties}")


def _two_qubit_density(rho):
    if isinstance(rho, QuantumState):
        if rho.dims != (2, 2):
            raise DimMismatch(f"two-qubit state required, got dims {rho.dims}")
        return rho.density()
    m = np.asarray(rho, dtype=np.complex128)
    if m.shape != (4, 4):
        raise DimMismatch(f"two-qubit operator required, got shape {m.shape}")
    return m


def concurrence_pure(state):
    """sqrt(2 (1 - Tr rho_A^2)) for a bipartite ket."""
    _require_pure_bipartite(state)
    rho_a = partial_trace(state.density(), state.dims, [0])
    purity = float(np.real(np.trace(rho_a @ rho_a)))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def wootters_concurrence(rho):
    """Two-qubit concurrence max(0, mu1 - mu2 - mu3 - mu4).

    The mu_i are square roots of the eigenvalues of rho (sy sy) conj(rho) (sy sy),
    taken here from the Hermitian form sqrt(rho) rho~ sqrt(rho).
    """
    m = _two_qubit_density(rho)
    tilde = _SY_SY @ m.conj() @ _SY_SY
    root = matrix_sqrt_psd(m)
    herm = root @ tilde @ root
    ev = hermitian_eig(0.5 * (herm + herm.conj().T)).eigenvalues
    mu = np.sqrt(np.maximum(ev, 0.0))
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def dsep_prime_pure(state):
    """Distance from a bipartite ket to the separable cone.

    1 when the largest Schmidt amplitude is at most 1/sqrt(2), else
    2 l1 sqrt(1 - l1^2).
    """
    _require_pure_bipartite(state)
    l1 = float(min(1.0, schmidt(state).coefficients[0]))
    if l1 <= 1.0 / math.sqrt(2.0):
        return 1.0
    return 2.0 * l1 * math.sqrt(max(0.0, 1.0 - l1 * l1))


def dsep_prime_x_state(a0, a1, a2):
    validate_x_params(a0, a1, a2)
    return 2.0 * abs(complex(a1))


def x_state_params(rho, tol=1e-12):
    """(a0, a1, a2) if ``rho`` is supported on the |00>,|11> corner, else None."""
    m = _two_qubit_density(rho)
    mask = np.zeros((4, 4), dtype=bool)
    mask[np.ix_([0, 3], [0, 3])] = True
    if np.max(np.abs(m[~mask])) > tol:
        return None
    return float(m[0, 0].real), complex(m[0, 3]), float(m[3, 3].real)


def dbar_sep_two_qubit(rho):
    """Extended (LOCC-preimage) trace distance of a two-qubit state: its concurrence."""
    return wootters_concurrence(rho)


def monogamy_terms(state):
    """(pivot term, [pair terms]) of the squared extended measure with party 0 as pivot."""
    if any(d != 2 for d in state.dims):
        raise NotQubits(f"qubit parties required, got dims {state.dims}")
    n = state.n_parties
    if n < 2:
        raise DimMismatch("at least two qubits required")
    if n == 2:
        c = dbar_sep_two_qubit(state.density())
        return c * c, [c * c]
    if not state.is_pure:
        raise NotPure("mixed pivot cuts beyond two qubits have no closed form")
    rho = state.density()
    rho_a = partial_trace(rho, state.dims, [0])
    lhs = max(0.0, 2.0 * (1.0 - float(np.real(np.trace(rho_a @ rho_a)))))
    pairs = []
    for b in range(1, n):
        c = dbar_sep_two_qubit(partial_trace(rho, state.dims, [0, b]))
        pairs.append(c * c)
    return lhs, pairs


def monogamy_residual(state, pivot=0):
    """D-bar^2(A|rest) - sum_i D-bar^2(rho_{A B_i}); only party 0 may be the pivot."""
    if pivot != 0:
        raise BadParams("the pivot is party 0; permute the state to use another party")
    lhs, pairs = monogamy_terms(state)
    return lhs - sum(pairs)


def continuity_gap(rho, sigma, values):
    """||rho - sigma||_1 - |D'(rho) - D'(sigma)| for two reported measure values."""
    if tuple(rho.dims) != tuple(sigma.dims):
        raise DimMismatch(f"dims differ: {rho.dims} vs {sigma.dims}")
    v_rho, v_sigma = (v.value if isinstance(v, MeasureReport) else float(v) for v in values)
    return trace_norm(rho.density() - sigma.density()) - abs(v_rho - v_sigma)


def analytic_report(measure, value, method="analytic", **diagnostics):
    return MeasureReport(measure, float(value), "exact", method, dict(diagnostics))
