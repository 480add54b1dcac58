"""Pure and mixed multipartite states: construction, Schmidt form, sampling, JSON I/O."""
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, DimMismatch, InvariantViolation, NotBipartite, NotPure, ParseError
from .linalg import hermitian_eig, is_hermitian, kron, partial_trace
from .rng import SplitMix64

STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A ket (``kind='pure'``) or density operator (``kind='mixed'``) over ``dims``."""

    kind: str
    dims: tuple
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(d < 1 for d in dims):
            raise DimMismatch(f"bad party dimensions {dims}")
        total = math.prod(dims)
        data = np.array(self.data, dtype=np.complex128)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        if self.kind == "pure":
            if data.shape != (total,):
                raise DimMismatch(f"ket of shape {data.shape} does not match dims {dims}")
            norm = np.linalg.norm(data)
            if abs(norm - 1.0) > STATE_TOL:
                raise InvariantViolation("unit norm", f"norm = {norm!r}")
        elif self.kind == "mixed":
            if data.shape != (total, total):
                raise DimMismatch(f"matrix of shape {data.shape} does not match dims {dims}")
            if not is_hermitian(data, STATE_TOL):
                raise InvariantViolation("hermitian")
            tr = np.trace(data).real
            if abs(tr - 1.0) > STATE_TOL:
                raise InvariantViolation("unit trace", f"trace = {tr!r}")
            lo = hermitian_eig(data).eigenvalues[-1]
            if lo < -STATE_TOL:
                raise InvariantViolation("positive semidefinite", f"min eigenvalue = {lo!r}")
        else:
            raise BadParams(f"unknown state kind {self.kind!r}")

    @classmethod
    def pure(cls, ket, dims):
        return cls("pure", tuple(dims), ket)

    @classmethod
    def mixed(cls, rho, dims):
        return cls("mixed", tuple(dims), rho)

    @property
    def dim(self):
        return math.prod(self.dims)

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def is_pure(self):
        return self.kind == "pure"

    def density(self):
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)

    def as_mixed(self):
        return self if self.kind == "mixed" else QuantumState.mixed(self.density(), self.dims)

    def reduced(self, keep):
        keep = sorted(keep)
        return partial_trace(self.density(), self.dims, keep)


@dataclass(frozen=True)
class SchmidtForm:
    coefficients: np.ndarray  # amplitudes, descending, squares sum to 1
    left: np.ndarray  # d_A x d_A unitary, columns a_i
    right: np.ndarray  # d_B x d_B unitary, columns b_i

    def reassemble(self):
        r = len(self.coefficients)
        return sum(self.coefficients[i] * np.kron(self.left[:, i], self.right[:, i]) for i in range(r))


def _fix_phase(vec):
    for x in vec:
        if abs(x) > 1e-12:
            return vec * (abs(x) / x)
    return vec


def complete_basis(cols, dim):
    """Extend orthonormal columns to a dim x dim unitary by Gram-Schmidt over the standard basis."""
    basis = [np.asarray(c, dtype=np.complex128) for c in np.asarray(cols).T] if np.size(cols) else []
    for k in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[k] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - (b.conj() @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            basis.append(v / nv)
    return np.column_stack(basis)


def schmidt(state):
    """Schmidt decomposition of a bipartite ket, coefficients as amplitudes."""
    if not state.is_pure:
        raise NotPure("Schmidt decomposition needs a pure state")
    if state.n_parties != 2:
        raise NotBipartite(f"expected 2 parties, got {state.n_parties}")
    da, db = state.dims
    mat = state.data.reshape(da, db)
    eig = hermitian_eig(mat @ mat.conj().T)
    r = min(da, db)
    lam = np.sqrt(np.maximum(eig.eigenvalues[:r], 0.0))
    lam = lam / np.linalg.norm(lam)
    left = np.column_stack([_fix_phase(eig.eigenvectors[:, i]) for i in range(da)])
    right_cols = []
    for i in range(r):
        if lam[i] > 1e-12:
            b = mat.T @ left[:, i].conj()
            right_cols.append(b / np.linalg.norm(b))
    right = complete_basis(np.column_stack(right_cols) if right_cols else np.zeros((db, 0)), db)
    return SchmidtForm(lam, left, right)


def ket(bits, dims=None):
    """Computational basis ket from a digit string like '010'."""
    digits = [int(c) for c in bits]
    dims = list(dims) if dims is not None else [2] * len(digits)
    vecs = []
    for d, k in zip(dims, digits):
        v = np.zeros(d, dtype=np.complex128)
        v[k] = 1.0
        vecs.append(v)
    return kron(*vecs)


def schmidt_ket(coeffs):
    """sum_i coeffs[i] |ii> on d (x) d with d = len(coeffs)."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    d = len(coeffs)
    psi = np.zeros(d * d, dtype=np.complex128)
    for i, c in enumerate(coeffs):
        psi[i * d + i] = c
    return QuantumState.pure(psi / np.linalg.norm(psi), [d, d])


def x_state_matrix(a0, a1, a2):
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = a0
    rho[0, 3] = a1
    rho[3, 0] = np.conj(a1)
    rho[3, 3] = a2
    return rho


def validate_x_params(a0, a1, a2, tol=STATE_TOL):
    a0, a2 = float(a0), float(a2)
    if a0 < -tol or a2 < -tol:
        raise BadParams(f"diagonal weights must be nonnegative (a0={a0}, a2={a2})")
    if abs(a0 + a2 - 1.0) > tol:
        raise BadParams(f"a0 + a2 must equal 1 (got {a0 + a2})")
    if abs(a1) > math.sqrt(max(a0 * a2, 0.0)) + tol:
        raise BadParams(f"|a1| = {abs(a1)} exceeds sqrt(a0*a2) = {math.sqrt(max(a0 * a2, 0.0))}; not positive")


def named_state(name, *params):
    """Build a named state.

    ``bell``/``phi+``, ``ghz``, ``w``, ``werner`` (p), ``x_state`` (a0, a1, a2) and
    ``product`` (bit string) are supported.
    """
    name = name.lower()
    if name in ("bell", "phi+", "phi_plus"):
        return QuantumState.pure((ket("00") + ket("11")) / math.sqrt(2), [2, 2])
    if name == "ghz":
        return QuantumState.pure((ket("000") + ket("111")) / math.sqrt(2), [2, 2, 2])
    if name == "w":
        return QuantumState.pure((ket("001") + ket("010") + ket("100")) / math.sqrt(3), [2, 2, 2])
    if name == "werner":
        if len(params) != 1 or not 0.0 <= float(params[0]) <= 1.0:
            raise BadParams("werner needs one parameter p in [0, 1]")
        p = float(params[0])
        bell = named_state("bell").density()
        return QuantumState.mixed(p * bell + (1 - p) * np.eye(4) / 4, [2, 2])
    if name in ("x", "x_state"):
        if len(params) != 3:
            raise BadParams("x_state needs (a0, a1, a2)")
        a0, a1, a2 = float(params[0]), complex(params[1]), float(params[2])
        validate_x_params(a0, a1, a2)
        return QuantumState.mixed(x_state_matrix(a0, a1, a2), [2, 2])
    if name == "product":
        bits = str(params[0])
        return QuantumState.pure(ket(bits), [2] * len(bits))
    raise BadParams(f"unknown named state {name!r}")


def random_pure(dims, seed):
    """Haar-random ket: normalized complex Gaussian vector from the SplitMix64 stream."""
    dims = [int(d) for d in dims]
    if not dims:
        raise BadParams("dims must be nonempty")
    z = SplitMix64(seed).complex_normal(math.prod(dims))
    return QuantumState.pure(z / np.linalg.norm(z), dims)


def random_density(dims, rank, seed):
    """Ginibre-induced density operator G G^dagger / Tr of the given rank."""
    dims = [int(d) for d in dims]
    total = math.prod(dims) if dims else 0
    if not dims or not 1 <= int(rank) <= total:
        raise BadParams(f"rank must be in [1, {total}], got {rank}")
    g = SplitMix64(seed).complex_normal((total, int(rank)))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState.mixed(rho / np.trace(rho).real, dims)


def random_unitary(d, seed):
    """Haar unitary via QR of a Ginibre matrix with the R-diagonal phases removed."""
    z = SplitMix64(seed).complex_normal((d, d))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


# -- serialization ---------------------------------------------------------

def _num(x):
    return format(float(x), ".17g")


def _pair(z):
    return f"[{_num(z.real)},{_num(z.imag)}]"


def save_state(state):
    """Canonical UTF-8 JSON bytes for a state; every number carries 17 significant digits."""
    head = '{"dims":[%s],"kind":"%s",' % (",".join(str(d) for d in state.dims), state.kind)
    if state.is_pure:
        body = '"ket":[%s]' % ",".join(_pair(z) for z in state.data)
    else:
        rows = ("[%s]" % ",".join(_pair(z) for z in row) for row in state.data)
        body = '"matrix":[%s]' % ",".join(rows)
    return (head + body + "}\n").encode("utf-8")


def _complex_entry(v, field):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ParseError("expected a [re, im] pair of numbers", field=field)
    return complex(v[0], v[1])


def load_state(raw):
    """Parse state JSON (bytes or str); raises ParseError or InvariantViolation."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    dims = doc.get("dims")
    if not (isinstance(dims, list) and dims and all(isinstance(d, int) and d >= 1 for d in dims)):
        raise ParseError("dims must be a nonempty list of positive integers", field="dims")
    kind = doc.get("kind")
    if kind is None:
        kind = "pure" if "ket" in doc else "mixed"
    if kind == "pure":
        entries = doc.get("ket")
        if not isinstance(entries, list):
            raise ParseError("missing ket array", field="ket")
        data = np.array([_complex_entry(v, f"ket[{i}]") for i, v in enumerate(entries)])
    elif kind == "mixed":
        rows = doc.get("matrix")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError("missing matrix array", field="matrix")
        data = np.array([[_complex_entry(v, f"matrix[{i}][{j}]") for j, v in enumerate(r)]
                         for i, r in enumerate(rows)])
        if data.ndim != 2:
            raise ParseError("matrix rows have unequal lengths", field="matrix")
    else:
        raise ParseError(f"kind must be 'pure' or 'mixed', got {kind!r}", field="kind")
    return QuantumState(kind, tuple(dims), data)


def permute_parties(state, order):
    """Reorder parties so that new party k is old party ``order[k]``."""
    order = [int(o) for o in order]
    if sorted(order) != list(range(state.n_parties)):
        raise BadParams(f"{order} is not a permutation of the parties")
    dims = [state.dims[o] for o in order]
    n = state.n_parties
    if state.is_pure:
        data = state.data.reshape(state.dims).transpose(order).reshape(-1)
    else:
        data = state.data.reshape(state.dims + state.dims)
        data = data.transpose(order + [n + o for o in order]).reshape(state.dim, state.dim)
    return QuantumState(state.kind, tuple(dims), data)


def bipartition(state, left):
    """View a multipartite state as bipartite: parties in ``left`` versus the rest."""
    left = sorted(int(p) for p in left)
    right = [p for p in range(state.n_parties) if p not in left]
    if not left or not right:
        raise BadParams("both sides of the cut must be nonempty")
    s = permute_parties(state, left + right)
    da = math.prod(state.dims[p] for p in left)
    return QuantumState(s.kind, (da, s.dim // da), s.data)
