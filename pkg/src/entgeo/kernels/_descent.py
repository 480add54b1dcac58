"""Per-restart descent loop for the active kernel backend.

The loop is numba-compatible Python calling the active backend's
``ensemble_objective``; it is compiled only when that backend is numba.

Descent runs in stages of decreasing smoothing width mu. Within a stage the
direction is L-BFGS on the smoothed trace norm (its gradient tends to the
subgradient U sgn(L) U^dagger as mu -> 0) with Armijo backtracking. The last
tenth of the iteration budget is a coordinate polish on the exact norm.
"""
import numpy as np

from .. import _jit

if _jit.USE_NUMBA:
    from ._numba import ensemble_objective as objective

    _compile = _jit.njit
else:
    from ._numpy import ensemble_objective as objective

    _compile = _jit.identity_jit

MU_START = 1e-2
MU_FLOOR = 1e-9
N_STAGES = 8
MEMORY = 10
ARMIJO = 1e-4
MIN_STEP = 1e-20
DEGENERATE_GAP = 1e-9
NOISE_SCALE = 1e-8
POLISH_STEP = 1e-4


@_compile
def descend(theta0, rho, dims, n_terms, normalized, n_iter, step_init, tol, noise, max_sweeps):
    """Returns (best exact value, best parameters, best-so-far history, converged, iterations used)."""
    n_polish = n_iter // 10
    n_grad = n_iter - n_polish
    n_stages = min(N_STAGES, n_grad)
    per_stage = n_grad // n_stages
    n_par = theta0.shape[0]
    history = np.empty(n_iter)
    theta = theta0.copy()
    best_theta = theta0.copy()
    best = np.inf
    converged = False
    used = 0
    s_mem = np.zeros((MEMORY, n_par))
    y_mem = np.zeros((MEMORY, n_par))
    rho_mem = np.zeros(MEMORY)
    alpha = np.zeros(MEMORY)
    k = 0
    for stage in range(n_stages):
        if n_stages > 1:
            mu = MU_START * (MU_FLOOR / MU_START) ** (stage / (n_stages - 1))
        else:
            mu = MU_FLOOR
        budget = per_stage if stage < n_stages - 1 else n_grad - k
        n_mem = 0
        head = 0
        f, ex, gap, g = objective(theta, rho, dims, n_terms, normalized, mu, True, max_sweeps)
        if ex < best:
            best = ex
            best_theta[:] = theta
        stalls = 0
        stage_done = False
        for _ in range(budget):
            # two-loop recursion
            d = -g.copy()
            for j in range(n_mem):
                idx = (head - 1 - j) % MEMORY
                alpha[idx] = rho_mem[idx] * np.dot(s_mem[idx], d)
                d -= alpha[idx] * y_mem[idx]
            if n_mem > 0:
                last = (head - 1) % MEMORY
                d *= np.dot(s_mem[last], y_mem[last]) / np.dot(y_mem[last], y_mem[last])
            for j in range(n_mem - 1, -1, -1):
                idx = (head - 1 - j) % MEMORY
                beta = rho_mem[idx] * np.dot(y_mem[idx], d)
                d += (alpha[idx] - beta) * s_mem[idx]
            if gap < DEGENERATE_GAP:
                d += NOISE_SCALE * noise[k % noise.shape[0]]
            slope = np.dot(g, d)
            if not slope < 0.0:
                d = -g.copy()
                slope = -np.dot(g, g)
                n_mem = 0
            step = 1.0 if n_mem > 0 else step_init / max(1.0, np.sqrt(-slope))
            accepted = False
            disp = 0.0
            while step > MIN_STEP and slope < 0.0:
                trial = theta + step * d
                ft, et, gt_gap, gt = objective(trial, rho, dims, n_terms, normalized, mu, True, max_sweeps)
                if ft <= f + ARMIJO * step * slope:
                    accepted = True
                    break
                step *= 0.5
            if accepted:
                s = trial - theta
                y = gt - g
                sy = np.dot(s, y)
                disp = np.sqrt(np.dot(s, s))
                if sy > 1e-12 * disp * np.sqrt(np.dot(y, y)):
                    s_mem[head] = s
                    y_mem[head] = y
                    rho_mem[head] = 1.0 / sy
                    head = (head + 1) % MEMORY
                    n_mem = min(n_mem + 1, MEMORY)
                theta = trial
                f = ft
                g = gt
                gap = gt_gap
                if et < best:
                    best = et
                    best_theta[:] = trial
                stalls = 0 if disp >= tol * 1e-3 else stalls + 1
            else:
                stalls += 1
                n_mem = 0
            history[k] = best
            k += 1
            if stalls >= 3:
                stage_done = True
                break
        if stage == n_stages - 1 and stage_done:
            converged = True
    used = k
    for j in range(k, n_grad):
        history[j] = best

    theta = best_theta.copy()
    cur = best
    h = POLISH_STEP
    fails = 0
    for j in range(n_polish):
        c = j % n_par
        improved = False
        for sgn in (1.0, -1.0):
            old = theta[c]
            theta[c] = old + sgn * h
            _, e, _, _ = objective(theta, rho, dims, n_terms, normalized, 0.0, False, max_sweeps)
            if e < cur:
                cur = e
                improved = True
                break
            theta[c] = old
        if improved:
            fails = 0
        else:
            fails += 1
            if fails >= n_par:
                h *= 0.5
                fails = 0
        history[n_grad + j] = cur
    return cur, theta, history, converged, used
