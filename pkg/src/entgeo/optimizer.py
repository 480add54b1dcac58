"""Variational upper bounds on trace distance to (fully) separable sets, and the
symmetry-reduced programs for the W and GHZ states."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from . import kernels
from ._jit import thread_count
from .channels import apply_local_pvm, ghz_family_matrix
from .errors import BadParams, DimMismatch
from .linalg import JACOBI_MAX_SWEEPS, kron, trace_norm
from .measures import MeasureReport
from .rng import SplitMix64
from .states import QuantumState, named_state

MODES = ("sep-cone", "sep-normalized", "fsep-cone")
_NOISE_ROWS = 16


@dataclass(frozen=True)
class ProductEnsemble:
    """Terms (q_i, [ket per party]); assembles to sum_i q_i (x)_p |a_i^p><a_i^p|."""

    weights: np.ndarray
    kets: tuple  # one (K, d_p) array per party, unit rows

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0):
            raise BadParams("ensemble weights must be nonnegative")
        for k in self.kets:
            if np.max(np.abs(np.linalg.norm(k, axis=1) - 1.0), initial=0.0) > 1e-10:
                raise BadParams("ensemble kets must be unit vectors")

    @property
    def size(self):
        return len(self.weights)

    def assemble(self):
        dim = math.prod(k.shape[1] for k in self.kets)
        out = np.zeros((dim, dim), dtype=np.complex128)
        for i, q in enumerate(self.weights):
            psi = kron(*[k[i] for k in self.kets])
            out += q * np.outer(psi, psi.conj())
        return out

    def scaled(self, t):
        return ProductEnsemble(self.weights * t, self.kets)


@dataclass(frozen=True)
class OptimizerConfig:
    ensemble_size: int | None = None  # None: (total dimension)^2
    restarts: int = 16
    max_iters: int = 2000
    seed: int = 0
    step_init: float = 0.1
    tol: float = 1e-4
    normalized: bool = False

    def __post_init__(self):
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise BadParams("ensemble_size must be >= 1")
        if self.restarts < 1 or self.max_iters < 1:
            raise BadParams("restarts and max_iters must be >= 1")
        if not self.tol > 0:
            raise BadParams("tol must be positive")


def _unpack(theta, dims, k):
    s = sum(dims)
    blocks = theta.reshape(k, 1 + 2 * s)
    w2 = blocks[:, 0] ** 2
    kets, off = [], 1
    for d in dims:
        x = blocks[:, off:off + d] + 1j * blocks[:, off + d:off + 2 * d]
        kets.append(x / np.maximum(np.linalg.norm(x, axis=1), 1e-300)[:, None])
        off += 2 * d
    return w2, tuple(kets)


def _initial_point(rng, dims, k):
    s = sum(dims)
    theta = rng.normal(k * (1 + 2 * s)).reshape(k, 1 + 2 * s)
    theta[:, 0] /= math.sqrt(k)
    return theta.ravel()


def _run_restart(rho, dims, k, normalized, cfg, r):
    rng = SplitMix64(cfg.seed + r)
    theta0 = _initial_point(rng, dims, k)
    noise = rng.normal(_NOISE_ROWS * theta0.size).reshape(_NOISE_ROWS, theta0.size)
    noise /= np.linalg.norm(noise, axis=1)[:, None]
    val, theta, hist, conv, used = kernels.descend(
        theta0, rho, np.asarray(dims, dtype=np.int64), k, normalized,
        cfg.max_iters, cfg.step_init, cfg.tol, noise, JACOBI_MAX_SWEEPS)
    return float(val), np.array(theta), np.array(hist), bool(conv), int(used)


def _check_mode(state, mode):
    if mode not in MODES:
        raise BadParams(f"mode must be one of {MODES}")
    if mode == "fsep-cone" and state.n_parties < 3:
        raise DimMismatch("fsep-cone needs at least three parties")
    if mode != "fsep-cone" and state.n_parties != 2:
        raise DimMismatch(f"{mode} needs exactly two parties")


def variational_distance(state, mode="sep-cone", config=None):
    """Best ||rho - sigma||_1 found over product ensembles sigma; always an upper bound.

    Returns (MeasureReport, ProductEnsemble). ``sep-normalized`` constrains the
    weights to sum to one; the cone modes leave the scale free.
    """
    cfg = config or OptimizerConfig()
    _check_mode(state, mode)
    normalized = mode == "sep-normalized" or cfg.normalized
    dims = list(state.dims)
    k = cfg.ensemble_size or state.dim ** 2
    rho = state.density()

    def job(r):
        return _run_restart(rho, dims, k, normalized, cfg, r)

    workers = min(thread_count(), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(job, range(cfg.restarts)))
    else:
        results = [job(r) for r in range(cfg.restarts)]

    best = min(range(cfg.restarts), key=lambda r: (results[r][0], r))
    _, theta, hist, conv, used = results[best]
    w2, kets = _unpack(theta, dims, k)
    weights = w2 / w2.sum() if normalized and w2.sum() > 0 else w2
    ensemble = ProductEnsemble(weights, kets)
    value = trace_norm(rho - ensemble.assemble())
    measure = {"sep-cone": "dsep-prime", "sep-normalized": "dsep", "fsep-cone": "dfsep-prime"}[mode]
    diag = {
        "mode": mode,
        "ensemble_size": k,
        "restarts": cfg.restarts,
        "max_iters": cfg.max_iters,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "best_restart": best,
        "iterations": used,
        "non_converged": not conv,
        "restart_values": [res[0] for res in results],
        "backend": kernels.BACKEND,
    }
    report = MeasureReport(measure, value, "upper", "variational", diag)
    return report, ensemble


def descent_history(state, mode="sep-cone", config=None, restart=0):
    """Best-so-far objective after every iteration of one restart."""
    cfg = config or OptimizerConfig()
    _check_mode(state, mode)
    k = cfg.ensemble_size or state.dim ** 2
    normalized = mode == "sep-normalized" or cfg.normalized
    return _run_restart(state.density(), list(state.dims), k, normalized, cfg, restart)[2]


# -- symmetry-reduced programs ---------------------------------------------

@dataclass(frozen=True)
class ReducedProgramResult:
    value: float
    point: tuple
    grid_value: float
    diagnostics: dict = field(default_factory=dict)


def w_objective(m):
    m0, m1, m2, m3 = m
    return abs(m0) + abs(m2) + abs(m3) + abs(1.0 - m1)


def w_feasible(m, tol=0.0):
    m0, m1, m2, m3 = m
    return min(m) >= -tol and m0 * m2 >= m1 * m1 / 3.0 - tol and m1 * m3 >= m2 * m2 / 3.0 - tol


def _log_grid(n, hi):
    return np.concatenate([[0.0], np.logspace(-6, math.log10(hi), n - 1)])


def w_reduced_program(tol=1e-9, grid_points=41, upper=3.0):
    """Global minimum of m0 + m2 + m3 + |1 - m1| over m >= 0 with
    m0 m2 >= m1^2/3 and m1 m3 >= m2^2/3: dense grid, then SLSQP polish."""
    if not tol > 0:
        raise BadParams("tol must be positive")
    grid = _log_grid(grid_points, upper)
    gval, arg = kernels.w_grid_min(grid)
    start = grid[np.asarray(arg)]
    best_val, best_pt = float(gval), tuple(float(x) for x in start)
    cons = [
        {"type": "ineq", "fun": lambda m: m[0] * m[2] - m[1] ** 2 / 3.0},
        {"type": "ineq", "fun": lambda m: m[1] * m[3] - m[2] ** 2 / 3.0},
    ]
    res = minimize(w_objective, start, method="SLSQP", bounds=[(0.0, upper)] * 4,
                   constraints=cons, options={"ftol": tol, "maxiter": 500})
    if res.success and w_feasible(res.x, 0.0) and w_objective(res.x) < best_val:
        best_val, best_pt = float(w_objective(res.x)), tuple(float(x) for x in res.x)
    return ReducedProgramResult(best_val, best_pt, float(gval), {"grid_points": grid_points})


def ghz_objective(m0, m1, n):
    """||GHZ - theta(m0, m1, n)||_1 from the block structure of the GHZ-symmetric family."""
    return np.abs(1.0 - m0 - n) + np.abs(n - m0) + 6.0 * np.abs(m1)


def ghz_feasible(m0, m1, n, tol=0.0):
    """theta is PSD (|n| <= m0) and in the adopted fully separable region (|n| <= m1)."""
    return (m0 >= -tol) & (m1 >= -tol) & (np.abs(n) <= m0 + tol) & (np.abs(n) <= m1 + tol)


def ghz_reduced_program(tol=1e-9, grid_points=61, upper=1.5):
    """Minimum of ||GHZ - theta||_1 over the GHZ-symmetric family with |n| <= min(m0, m1)."""
    if not tol > 0:
        raise BadParams("tol must be positive")
    g = _log_grid(grid_points, upper)
    ns = np.concatenate([-g[::-1], g[1:]])
    m0, m1, n = np.meshgrid(g, g, ns, indexing="ij")
    val = np.where(ghz_feasible(m0, m1, n), ghz_objective(m0, m1, n), np.inf)
    flat = int(np.argmin(val))
    i = np.unravel_index(flat, val.shape)
    start = np.array([m0[i], m1[i], n[i]])
    best_val, best_pt = float(val[i]), tuple(float(x) + 0.0 for x in start)
    cons = [
        {"type": "ineq", "fun": lambda x: x[0] - abs(x[2])},
        {"type": "ineq", "fun": lambda x: x[1] - abs(x[2])},
    ]
    res = minimize(lambda x: float(ghz_objective(*x)), start, method="SLSQP",
                   bounds=[(0.0, upper), (0.0, upper), (-upper, upper)],
                   constraints=cons, options={"ftol": tol, "maxiter": 500})
    if res.success and bool(ghz_feasible(*res.x)) and ghz_objective(*res.x) < best_val:
        best_val, best_pt = float(ghz_objective(*res.x)), tuple(float(x) for x in res.x)
    exact = trace_norm(named_state("ghz").density() - ghz_family_matrix(*best_pt))
    return ReducedProgramResult(best_val, best_pt, float(val[i]), {"trace_norm_check": exact})


# -- monotonicity under local projective measurement -----------------------

@dataclass
class MonotonicityReport:
    parent: MeasureReport
    branches: list  # (p_k, MeasureReport)
    difference: float
    caveat: str = ("parent and branch values are variational upper bounds, so the "
                   "difference is a statistical check rather than an exact one")


def pvm_monotonicity_check(state, pvm, config=None, party=0):
    """D'(rho)_upper - sum_k p_k D'(rho_k)_upper under a PVM on ``party``."""
    cfg = config or OptimizerConfig()
    if state.n_parties != 2:
        raise DimMismatch("two-party state required")
    branches = apply_local_pvm(state, pvm, party)
    parent, _ = variational_distance(state, "sep-cone", cfg)
    if len(branches) == 1:
        # a single surviving outcome leaves the state unchanged
        return MonotonicityReport(parent, [(1.0, parent)], 0.0)
    results = []
    for i, (p, branch) in enumerate(branches):
        rep, _ = variational_distance(branch, "sep-cone", replace(cfg, seed=cfg.seed + 1000 * (i + 1)))
        results.append((p, rep))
    diff = parent.value - sum(p * rep.value for p, rep in results)
    return MonotonicityReport(parent, results, diff)
