"""Loop-level kernels compiled with numba.

The same functions run (slowly) as plain Python when numba is missing, but
the dispatcher in ``entgeo.kernels`` routes to ``_numpy`` in that case.
"""
import numpy as np

from .._jit import njit


@njit
def jacobi_eigh(h, max_sweeps, rel_tol):
    """Cyclic complex Jacobi. Returns (eigenvalues, eigenvectors, sweeps, converged); unsorted."""
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = np.sqrt(fro)
    sweeps = 0
    converged = False
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) <= rel_tol * fro:
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
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                e = g / ag
                se = s * e
                sec = s * np.conj(e)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sec * akq
                    a[k, q] = se * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - se * aqk
                    a[q, k] = sec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * ag
                a[q, q] = aqq + t * ag
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sec * vkq
                    v[k, q] = se * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps, converged


@njit
def _digits(dims):
    n_party = dims.shape[0]
    total = 1
    for p in range(n_party):
        total *= dims[p]
    out = np.empty((total, n_party), dtype=np.int64)
    for idx in range(total):
        rem = idx
        for p in range(n_party - 1, -1, -1):
            out[idx, p] = rem % dims[p]
            rem //= dims[p]
    return out


@njit
def ensemble_objective(theta, rho, dims, n_terms, normalized, mu, want_grad, max_sweeps):
    """Smoothed and exact ||rho - sum_i q_i psi_i psi_i^H||_1 for packed ensemble parameters.

    Returns (smoothed, exact, min_eigen_gap, gradient of smoothed wrt theta).
    """
    n_party = dims.shape[0]
    dim = rho.shape[0]
    dmax = 0
    ssum = 0
    for p in range(n_party):
        ssum += dims[p]
        if dims[p] > dmax:
            dmax = dims[p]
    stride = 1 + 2 * ssum
    digits = _digits(dims)

    q = np.empty(n_terms)
    wsum = 0.0
    for i in range(n_terms):
        w = theta[i * stride]
        q[i] = w * w
        wsum += w * w
    if normalized:
        if wsum <= 0.0:
            wsum = 1e-300
        for i in range(n_terms):
            q[i] /= wsum

    kets = np.zeros((n_terms, n_party, dmax), dtype=np.complex128)
    norms = np.empty((n_terms, n_party))
    for i in range(n_terms):
        off = i * stride + 1
        for p in range(n_party):
            d = dims[p]
            nn = 0.0
            for s in range(d):
                re = theta[off + s]
                im = theta[off + d + s]
                nn += re * re + im * im
            nn = np.sqrt(nn)
            if nn < 1e-300:
                nn = 1e-300
            norms[i, p] = nn
            for s in range(d):
                kets[i, p, s] = (theta[off + s] + 1j * theta[off + d + s]) / nn
            off += 2 * d

    psi = np.empty((n_terms, dim), dtype=np.complex128)
    for i in range(n_terms):
        for idx in range(dim):
            amp = 1.0 + 0.0j
            for p in range(n_party):
                amp *= kets[i, p, digits[idx, p]]
            psi[i, idx] = amp

    delta = rho.copy()
    for i in range(n_terms):
        qi = q[i]
        if qi == 0.0:
            continue
        for r in range(dim):
            pr = qi * psi[i, r]
            for c in range(dim):
                delta[r, c] -= pr * np.conj(psi[i, c])

    lam, vec, _, _ = jacobi_eigh(delta, max_sweeps, 1e-12)
    exact = 0.0
    smooth = 0.0
    for j in range(dim):
        exact += abs(lam[j])
        smooth += np.sqrt(lam[j] * lam[j] + mu * mu)
    srt = np.sort(lam)
    gap = np.inf
    for j in range(dim - 1):
        dg = srt[j + 1] - srt[j]
        if dg < gap:
            gap = dg

    if not want_grad:
        return smooth, exact, gap, np.empty(0)

    gl = np.empty(dim)
    for j in range(dim):
        if mu > 0.0:
            gl[j] = lam[j] / np.sqrt(lam[j] * lam[j] + mu * mu)
        elif lam[j] > 0.0:
            gl[j] = 1.0
        elif lam[j] < 0.0:
            gl[j] = -1.0
        else:
            gl[j] = 0.0
    gmat = np.zeros((dim, dim), dtype=np.complex128)
    for r in range(dim):
        for c in range(dim):
            acc = 0.0 + 0.0j
            for j in range(dim):
                acc += vec[r, j] * gl[j] * np.conj(vec[c, j])
            gmat[r, c] = acc

    h = np.empty(n_terms)
    vg = np.empty((n_terms, dim), dtype=np.complex128)
    for i in range(n_terms):
        hh = 0.0
        for r in range(dim):
            acc = 0.0 + 0.0j
            for c in range(dim):
                acc += gmat[r, c] * psi[i, c]
            vg[i, r] = acc
            hh += (np.conj(psi[i, r]) * acc).real
        h[i] = hh
    hbar = 0.0
    for i in range(n_terms):
        hbar += q[i] * h[i]

    grad = np.zeros(theta.shape[0])
    u = np.zeros(dmax, dtype=np.complex128)
    for i in range(n_terms):
        base = i * stride
        w = theta[base]
        if normalized:
            grad[base] = -2.0 * w / wsum * (h[i] - hbar)
        else:
            grad[base] = -2.0 * w * h[i]
        off = base + 1
        for p in range(n_party):
            d = dims[p]
            for s in range(d):
                u[s] = 0.0
            for idx in range(dim):
                coef = vg[i, idx]
                for r in range(n_party):
                    if r != p:
                        coef *= np.conj(kets[i, r, digits[idx, r]])
                u[digits[idx, p]] += coef
            scale = -2.0 * q[i] / norms[i, p]
            for s in range(d):
                z = scale * (u[s] - h[i] * kets[i, p, s])
                grad[off + s] = z.real
                grad[off + d + s] = z.imag
            off += 2 * d
    return smooth, exact, gap, grad


@njit
def w_grid_min(grid):
    """Brute-force minimum of m0 + m2 + m3 + |1 - m1| over grid^4 under the
    constraints m0*m2 >= m1^2/3 and m1*m3 >= m2^2/3."""
    n = grid.shape[0]
    best = np.inf
    arg = np.zeros(4, dtype=np.int64)
    for i0 in range(n):
        m0 = grid[i0]
        for i1 in range(n):
            m1 = grid[i1]
            for i2 in range(n):
                m2 = grid[i2]
                if m0 * m2 < m1 * m1 / 3.0:
                    continue
                for i3 in range(n):
                    m3 = grid[i3]
                    if m1 * m3 < m2 * m2 / 3.0:
                        continue
                    val = m0 + m2 + m3 + abs(1.0 - m1)
                    if val < best:
                        best = val
                        arg[0] = i0
                        arg[1] = i1
                        arg[2] = i2
                        arg[3] = i3
    return best, arg
