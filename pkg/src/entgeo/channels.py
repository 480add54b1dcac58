"""Exact twirls, local projective measurements and Naimark dilation.

Every twirl here is the closed-form average of a unitary group action, applied
as an entry filter or a finite sum; nothing is sampled.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadPOVM, DimMismatch, InvariantViolation
from .linalg import as_matrix, embed_local, hermitian_eig, kron, matrix_sqrt_psd
from .states import QuantumState, complete_basis

MEASUREMENT_TOL = 1e-10
BRANCH_FLOOR = 1e-12

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class PVM:
    projectors: tuple

    def __post_init__(self):
        ps = tuple(as_matrix(p) for p in self.projectors)
        object.__setattr__(self, "projectors", ps)
        if not ps:
            raise InvariantViolation("nonempty")
        d = ps[0].shape[0]
        tol = MEASUREMENT_TOL
        for p in ps:
            if p.shape != (d, d):
                raise DimMismatch("projectors differ in shape")
            if np.max(np.abs(p - p.conj().T)) > tol:
                raise InvariantViolation("hermitian projector")
            if np.max(np.abs(p @ p - p)) > tol:
                raise InvariantViolation("idempotent projector")
        if np.max(np.abs(sum(ps) - np.eye(d))) > tol:
            raise InvariantViolation("completeness")
        for a, b in itertools.combinations(ps, 2):
            if np.max(np.abs(a @ b)) > tol:
                raise InvariantViolation("orthogonality")

    @property
    def dim(self):
        return self.projectors[0].shape[0]

    @classmethod
    def computational(cls, d):
        eye = np.eye(d)
        return cls(tuple(np.outer(eye[k], eye[k]) for k in range(d)))

    @classmethod
    def trivial(cls, d):
        return cls((np.eye(d),))


@dataclass(frozen=True)
class POVM:
    effects: tuple

    def __post_init__(self):
        fs = tuple(as_matrix(f) for f in self.effects)
        object.__setattr__(self, "effects", fs)
        if not fs:
            raise BadPOVM("a POVM needs at least one effect")
        d = fs[0].shape[0]
        for f in fs:
            if f.shape != (d, d):
                raise BadPOVM("effects differ in shape")
            if np.max(np.abs(f - f.conj().T)) > MEASUREMENT_TOL:
                raise BadPOVM("effect is not Hermitian")
            if hermitian_eig(f).eigenvalues[-1] < -MEASUREMENT_TOL:
                raise BadPOVM("effect is not positive semidefinite")
        if np.max(np.abs(sum(fs) - np.eye(d))) > MEASUREMENT_TOL:
            raise BadPOVM("effects do not sum to the identity")

    @property
    def dim(self):
        return self.effects[0].shape[0]

    def is_projective(self):
        return all(np.max(np.abs(f @ f - f)) <= MEASUREMENT_TOL for f in self.effects)


@dataclass(frozen=True)
class ReducedSymmetricParams:
    """Symmetry-reduced coordinates: (m0, m1, m2, m3) for 'W', (m0, m1, n) for 'GHZ'."""

    family: str
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.family == "W":
            if len(vals) != 4 or min(vals) < 0:
                raise InvariantViolation("W parameters are four nonnegative numbers")
        elif self.family == "GHZ":
            if len(vals) != 3 or vals[0] < 0 or vals[1] < 0 or abs(vals[2]) > vals[0] + MEASUREMENT_TOL:
                raise InvariantViolation("GHZ parameters need m0, m1 >= 0 and |n| <= m0")
        else:
            raise InvariantViolation("family is 'W' or 'GHZ'")

    def matrix(self):
        if self.family == "GHZ":
            return ghz_family_matrix(*self.values)
        return w_family_matrix(*self.values)


def ghz_family_matrix(m0, m1, n):
    theta = np.diag([m0] + [m1] * 6 + [m0]).astype(np.complex128)
    theta[0, 7] = theta[7, 0] = n
    return theta


def w_family_matrix(m0, m1, m2, m3):
    s = 1.0 / math.sqrt(3.0)
    w = np.zeros(8, dtype=np.complex128)
    w[[1, 2, 4]] = s
    wbar = np.zeros(8, dtype=np.complex128)
    wbar[[3, 5, 6]] = s
    out = np.zeros((8, 8), dtype=np.complex128)
    out[0, 0] = m0
    out[7, 7] = m3
    return out + m1 * np.outer(w, w) + m2 * np.outer(wbar, wbar)


def _square(m, dim):
    m = as_matrix(m)
    if m.shape != (dim, dim):
        raise DimMismatch(f"expected a {dim}x{dim} operator, got {m.shape}")
    return m


def diagonal_twirl_bipartite(m, dims):
    """Average of (U (x) conj U) m (U (x) conj U)^dagger over diagonal unitaries U.

    Keeps <ij|m|kl> when (i, l) = (j, k) or (i, l) = (k, j), zeroes the rest.
    """
    dims = [int(d) for d in dims]
    if len(dims) != 2 or dims[0] != dims[1]:
        raise DimMismatch(f"equal local dimensions required, got {dims}")
    d = dims[0]
    m = _square(m, d * d)
    i, j, k, l = np.indices((d, d, d, d))
    keep = ((i == j) & (l == k)) | ((i == k) & (l == j))
    return np.where(keep, m.reshape(d, d, d, d), 0.0).reshape(d * d, d * d)


_WEIGHTS = np.array([bin(x).count("1") for x in range(8)])


def phase_twirl_threequbit(m):
    """Average over diag(1, e^{i t})^{(x)3}: drops entries between different Hamming weights."""
    m = _square(m, 8)
    return np.where(_WEIGHTS[:, None] == _WEIGHTS[None, :], m, 0.0)


def _permutation_unitary(perm, dims):
    """V with V |x_1 ... x_N> = |x_perm(1) ... x_perm(N)>."""
    n = len(dims)
    total = math.prod(dims)
    idx = np.arange(total).reshape(dims)
    src = idx.transpose(perm).reshape(-1)
    v = np.zeros((total, total))
    v[np.arange(total), src] = 1.0
    return v


def permutation_symmetrize(m, dims, two_sided=False):
    """Average of V_s m V_s^dagger over all party permutations s.

    ``two_sided=True`` averages V_s m V_s'^dagger over independent pairs (s, s')
    instead, which equals P m P for the symmetric-subspace projector P. That
    map is idempotent and completely positive but not trace-preserving.
    """
    dims = [int(d) for d in dims]
    if len(set(dims)) != 1:
        raise DimMismatch(f"all party dimensions must agree, got {dims}")
    m = _square(m, math.prod(dims))
    vs = [_permutation_unitary(p, dims) for p in itertools.permutations(range(len(dims)))]
    if two_sided:
        proj = sum(vs) / len(vs)
        return proj @ m @ proj.conj().T
    return sum(v @ m @ v.T for v in vs) / len(vs)


def flip_average(m):
    """Average of m and X^{(x)3} m X^{(x)3}."""
    m = _square(m, 8)
    x3 = kron(_X, _X, _X)
    return 0.5 * (m + x3 @ m @ x3)


def ghz_phase_twirl(m):
    """Average over e^{i a Z} (x) e^{i b Z} (x) e^{-i (a+b) Z}: only diagonal and <000|.|111> survive."""
    m = _square(m, 8)
    keep = np.eye(8, dtype=bool)
    keep[0, 7] = keep[7, 0] = True
    return np.where(keep, m, 0.0)


def ghz_symmetrize(m):
    return ghz_phase_twirl(flip_average(permutation_symmetrize(m, [2, 2, 2])))


def ghz_symmetry_project(m):
    """(m0, m1, n) of the GHZ-symmetric part of an 8x8 operator."""
    t = ghz_symmetrize(m)
    m0 = float(t[0, 0].real)
    m1 = float(np.mean(t.diagonal()[1:7].real))
    n = float(t[0, 7].real)
    return ReducedSymmetricParams("GHZ", (m0, m1, n))


def apply_local_pvm(rho, pvm, party):
    """Measure ``party`` with ``pvm``; returns [(p_k, post-measurement state)], dropping p_k < 1e-12.

    Pure inputs give pure branches.
    """
    party = int(party)
    if not 0 <= party < rho.n_parties or pvm.dim != rho.dims[party]:
        raise DimMismatch(f"PVM of dimension {pvm.dim} does not fit party {party} of dims {rho.dims}")
    out = []
    for proj in pvm.projectors:
        big = embed_local(proj, list(rho.dims), party)
        if rho.is_pure:
            v = big @ rho.data
            p = float(np.real(np.vdot(v, v)))
            if p >= BRANCH_FLOOR:
                out.append((p, QuantumState.pure(v / math.sqrt(p), rho.dims)))
        else:
            sub = big @ rho.data @ big
            p = float(np.real(np.trace(sub)))
            if p >= BRANCH_FLOOR:
                out.append((p, QuantumState.mixed(sub / p, rho.dims)))
    return out


@dataclass(frozen=True)
class NaimarkDilation:
    """``isometry`` V embeds C^d into C^d' as rho -> rho (+) 0; V^dagger P_i V = F_i."""

    isometry: np.ndarray
    pvm: PVM
    unitary: np.ndarray


def naimark_dilate(povm):
    """Projective dilation of a POVM by the direct-sum construction.

    A projective input is returned as is with V = identity. Otherwise the
    stacked column block sum_i |i> (x) sqrt(F_i) is completed to a unitary U on
    C^(n d) and P_i = U^dagger (|i><i| (x) I) U.
    """
    if not isinstance(povm, POVM):
        povm = POVM(tuple(povm))
    d = povm.dim
    if povm.is_projective():
        return NaimarkDilation(np.eye(d, dtype=np.complex128), PVM(povm.effects), np.eye(d, dtype=np.complex128))
    n = len(povm.effects)
    block = np.vstack([matrix_sqrt_psd(f) for f in povm.effects])
    u = complete_basis(block, n * d)
    eye_n = np.eye(n)
    projs = tuple(u.conj().T @ np.kron(np.outer(eye_n[i], eye_n[i]), np.eye(d)) @ u for i in range(n))
    projs = tuple(0.5 * (p + p.conj().T) for p in projs)
    embed = np.zeros((n * d, d), dtype=np.complex128)
    embed[:d, :d] = np.eye(d)
    return NaimarkDilation(embed, PVM(projs), u)


def direct_sum_zero(rho, dilated_dim):
    rho = as_matrix(rho)
    out = np.zeros((dilated_dim, dilated_dim), dtype=np.complex128)
    d = rho.shape[0]
    out[:d, :d] = rho
    return out


def trine_povm():
    kets = [np.array([math.cos(2 * math.pi * j / 3), math.sin(2 * math.pi * j / 3)]) for j in range(3)]
    return POVM(tuple((2.0 / 3.0) * np.outer(k, k) for k in kets))
