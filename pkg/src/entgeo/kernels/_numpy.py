"""Vectorized numpy versions of the kernels in ``_numba``.

Same signatures and return conventions; used when ``ENTGEO_DISABLE_NUMBA`` is
set and as the reference side of the kernel benchmark.
"""
import string

import numpy as np


def jacobi_eigh(h, max_sweeps, rel_tol):
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = np.linalg.norm(a)
    offmask = ~np.eye(n, dtype=bool)
    sweeps = 0
    converged = False
    for sweep in range(max_sweeps + 1):
        if np.linalg.norm(a[offmask]) <= rel_tol * fro:
            converged = True
            break
        if sweep == max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * ag)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                e = g / ag
                rot = np.array([[c, s * e], [-s * np.conj(e), c]])
                cols = a[:, [p, q]] @ rot
                a[:, p] = cols[:, 0]
                a[:, q] = cols[:, 1]
                rows = rot.conj().T @ a[[p, q], :]
                a[p, :] = rows[0]
                a[q, :] = rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * ag
                a[q, q] = aqq + t * ag
                vc = v[:, [p, q]] @ rot
                v[:, p] = vc[:, 0]
                v[:, q] = vc[:, 1]
    return a.diagonal().real.copy(), v, sweeps, converged


def _unpack(theta, dims, n_terms):
    ssum = int(np.sum(dims))
    blocks = theta.reshape(n_terms, 1 + 2 * ssum)
    kets, norms = [], []
    off = 1
    for d in dims:
        x = blocks[:, off:off + d] + 1j * blocks[:, off + d:off + 2 * d]
        nn = np.maximum(np.linalg.norm(x, axis=1), 1e-300)
        kets.append(x / nn[:, None])
        norms.append(nn)
        off += 2 * d
    return blocks[:, 0], kets, norms


def ensemble_objective(theta, rho, dims, n_terms, normalized, mu, want_grad, max_sweeps):
    dims = [int(d) for d in dims]
    w, kets, norms = _unpack(theta, dims, n_terms)
    q = w * w
    wsum = q.sum()
    if normalized:
        wsum = max(wsum, 1e-300)
        q = q / wsum
    psi = kets[0]
    for a in kets[1:]:
        psi = (psi[:, :, None] * a[:, None, :]).reshape(n_terms, -1)
    delta = rho - (q[:, None] * psi).T @ psi.conj()
    lam, vec, _, _ = jacobi_eigh(delta, max_sweeps, 1e-12)
    exact = float(np.abs(lam).sum())
    smooth = float(np.sqrt(lam * lam + mu * mu).sum())
    srt = np.sort(lam)
    gap = float(np.diff(srt).min()) if lam.size > 1 else np.inf
    if not want_grad:
        return smooth, exact, gap, np.empty(0)

    gl = lam / np.sqrt(lam * lam + mu * mu) if mu > 0.0 else np.sign(lam)
    gmat = (vec * gl) @ vec.conj().T
    vg = psi @ gmat.T
    h = np.real(np.sum(psi.conj() * vg, axis=1))
    hbar = float(q @ h)

    ssum = sum(dims)
    grad = np.zeros((n_terms, 1 + 2 * ssum))
    if normalized:
        grad[:, 0] = -2.0 * w / wsum * (h - hbar)
    else:
        grad[:, 0] = -2.0 * w * h
    letters = string.ascii_lowercase[1:len(dims) + 1]
    vt = vg.reshape((n_terms,) + tuple(dims))
    off = 1
    for p, d in enumerate(dims):
        operands = [vt]
        subs = ["k" + letters]
        for r in range(len(dims)):
            if r != p:
                operands.append(kets[r].conj())
                subs.append("k" + letters[r])
        u = np.einsum(",".join(subs) + "->k" + letters[p], *operands)
        z = (-2.0 * q / norms[p])[:, None] * (u - h[:, None] * kets[p])
        grad[:, off:off + d] = z.real
        grad[:, off + d:off + 2 * d] = z.imag
        off += 2 * d
    return smooth, exact, gap, grad.ravel()


def w_grid_min(grid):
    m0 = grid[:, None, None, None]
    m1 = grid[None, :, None, None]
    m2 = grid[None, None, :, None]
    m3 = grid[None, None, None, :]
    feasible = (m0 * m2 >= m1 * m1 / 3.0) & (m1 * m3 >= m2 * m2 / 3.0)
    val = np.where(feasible, m0 + m2 + m3 + np.abs(1.0 - m1), np.inf)
    flat = int(np.argmin(val))
    return float(val.ravel()[flat]), np.array(np.unravel_index(flat, val.shape), dtype=np.int64)
