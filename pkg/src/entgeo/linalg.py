"""Dense complex linear algebra on small operators (total dimension up to ~64).

Matrices are plain ``numpy`` complex arrays. Multipartite operators carry
their party dimensions separately as a list of ints; party 0 is the most
significant tensor factor, as produced by ``kron``.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import kernels
from .errors import DimMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SINGULAR_FLOOR = 1e-13
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class HermitianEig:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns
    sweeps: int = 0


def as_matrix(a):
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kron(*ops):
    """Kronecker product of one or more matrices (or vectors)."""
    return reduce(np.kron, [np.asarray(o, dtype=np.complex128) for o in ops])


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and np.max(np.abs(h - h.conj().T), initial=0.0) <= tol


def hermitian_eig(h):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back in descending order. Eigenvalues closer than 1e-12
    are ordered by the real parts of their eigenvectors, lexicographically.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimMismatch(f"matrix is not square: {h.shape}")
    if not is_hermitian(h):
        raise NotHermitian(f"max |h - h^dagger| = {np.max(np.abs(h - h.conj().T)):.3e}")
    h = 0.5 * (h + h.conj().T)
    w, v, sweeps, converged = kernels.jacobi_eigh(h, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL)
    if not converged:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = sorted(range(len(w)), key=lambda i: -w[i])
    # near-ties are reordered by the real parts of their eigenvectors
    final, group = [], [order[0]]
    for i in order[1:] + [None]:
        if i is not None and abs(w[group[-1]] - w[i]) <= _TIE_TOL:
            group.append(i)
            continue
        final.extend(sorted(group, key=lambda j: tuple(v[:, j].real)))
        group = [i]
    idx = np.array(final, dtype=np.int64)
    return HermitianEig(w[idx], v[:, idx], int(sweeps))


def _clamp(vals):
    vals = np.abs(vals)
    vals[vals < SINGULAR_FLOOR] = 0.0
    return vals


def trace_norm(a):
    """Sum of singular values.

    Hermitian input uses the eigenvalue fast path; anything else goes through
    the eigenvalues of a^dagger a.
    """
    a = as_matrix(a)
    if a.shape[0] == a.shape[1] and is_hermitian(a):
        return float(_clamp(hermitian_eig(a).eigenvalues).sum())
    gram = a.conj().T @ a
    ev = hermitian_eig(0.5 * (gram + gram.conj().T)).eigenvalues
    return float(_clamp(np.sqrt(np.maximum(ev, 0.0))).sum())


def _check_dims(m, dims):
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != m.shape[0] or m.shape[0] != m.shape[1]:
        raise DimMismatch(f"dims {dims} do not match matrix of shape {m.shape}")
    return dims


def partial_trace(m, dims, keep):
    """Trace out every party not listed in ``keep``; kept parties stay in their original order."""
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = sorted({int(k) for k in keep})
    if any(k < 0 or k >= n for k in keep):
        raise DimMismatch(f"keep={keep} out of range for {n} parties")
    t = m.reshape(dims + dims)
    # trace highest index first so earlier axis numbers stay valid
    for p in sorted(set(range(n)) - set(keep), reverse=True):
        nleft = t.ndim // 2
        t = np.trace(t, axis1=p, axis2=p + nleft)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def partial_transpose(m, dims, party):
    """Transpose the row/column indices of one party."""
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    party = int(party)
    if not 0 <= party < n:
        raise DimMismatch(f"party {party} out of range for {n} parties")
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[party], axes[party + n] = axes[party + n], axes[party]
    return t.transpose(axes).reshape(m.shape)


def embed_local(op, dims, party):
    """I (x) ... (x) op (x) ... (x) I with ``op`` acting on ``party``."""
    op = as_matrix(op)
    if op.shape != (dims[party], dims[party]):
        raise DimMismatch(f"operator shape {op.shape} does not fit party dimension {dims[party]}")
    factors = [np.eye(d) for d in dims]
    factors[party] = op
    return kron(*factors)


def matrix_sqrt_psd(h):
    eig = hermitian_eig(h)
    vals = np.sqrt(np.maximum(eig.eigenvalues, 0.0))
    return (eig.eigenvectors * vals) @ eig.eigenvectors.conj().T
