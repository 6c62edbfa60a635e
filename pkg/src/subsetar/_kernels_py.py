"""Pure numpy implementations of the numerical kernels.

These mirror ``_kernels.pyx`` one-for-one and are used when the compiled
extension is unavailable or ``SUBSETAR_PURE_PYTHON=1`` is set.  All inputs
are float64 arrays; validation happens in the calling modules.
"""

import numpy as np

# back-recursion singularity guard on 1 - zeta_k**2
SINGULAR_GUARD = 1e-14


def dl_table(zeta):
    """Durbin-Levinson table; row k-1 holds phi_{k,1..k}, zeros beyond."""
    zeta = np.asarray(zeta, dtype=float)
    p = zeta.size
    tab = np.zeros((p, p))
    if p == 0:
        return tab
    tab[0, 0] = zeta[0]
    for k in range(1, p):
        prev = tab[k - 1, :k]
        tab[k, :k] = prev - zeta[k] * prev[::-1]
        tab[k, k] = zeta[k]
    return tab


def dl_forward(zeta):
    zeta = np.asarray(zeta, dtype=float)
    p = zeta.size
    phi = np.zeros(p)
    for k in range(p):
        if k:
            phi[:k] = phi[:k] - zeta[k] * phi[k - 1::-1]
        phi[k] = zeta[k]
    return phi


def dl_backward(phi):
    """Invert the recursion. Returns ``(zeta, ok)``; ok is False when some
    step leaves the open unit interval."""
    cur = np.array(phi, dtype=float)
    p = cur.size
    zeta = np.zeros(p)
    for k in range(p - 1, -1, -1):
        zk = cur[k]
        zeta[k] = zk
        denom = 1.0 - zk * zk
        if not (abs(zk) < 1.0 and denom >= SINGULAR_GUARD):
            return zeta, False
        if k:
            head = cur[:k]
            cur = (head + zk * head[::-1]) / denom
    return zeta, True


def dl_vjp(zeta, v):
    """Gradient of ``v . phi(zeta)`` with respect to the full zeta vector."""
    zeta = np.asarray(zeta, dtype=float)
    p = zeta.size
    tab = dl_table(zeta)
    g = np.array(v, dtype=float)
    # stage k maps (phi_{k,1..k}, zeta_{k+1}) to phi_{k+1,1..k+1}
    for k in range(p - 1, 0, -1):
        prev = tab[k - 1, :k]
        gy = g[:k].copy()
        g[:k] = gy - zeta[k] * gy[::-1]
        g[k] -= np.dot(prev[::-1], gy)
    return g


def burg(x, lag_max):
    """Burg reflection coefficients.

    Returns ``(pacf, var, bad)`` where ``var[k]`` is the order-k innovation
    variance estimate (``var[0] = sum(x**2)/n``) and ``bad`` is the first
    stage with zero forward/backward energy, or 0 when all stages are fine.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    pacf = np.zeros(lag_max)
    var = np.zeros(lag_max + 1)
    var[0] = np.dot(x, x) / n
    ef = x[1:].copy()
    eb = x[:-1].copy()
    for k in range(lag_max):
        den = np.dot(ef, ef) + np.dot(eb, eb)
        if not den > 0.0:
            return pacf, var, k + 1
        kap = 2.0 * np.dot(ef, eb) / den
        kap = min(1.0, max(-1.0, kap))
        pacf[k] = kap
        var[k + 1] = var[k] * (1.0 - kap * kap)
        ef, eb = ef - kap * eb, eb - kap * ef
        ef = ef[1:]
        eb = eb[:-1]
    return pacf, var, 0


def sos_kernel(z, p):
    """Exact sum-of-squares matrix, lags 0..p.

    ``D[i, j] = sum_{u=1+min}^{n-max} z_u z_{u+|i-j|}`` (1-based z), so that
    ``beta' D beta`` with ``beta = (-1, phi)`` is the exact AR(p) quadratic
    form ``sigma^2 z' Gamma_n^{-1} z``.
    """
    z = np.asarray(z, dtype=float)
    n = z.size
    D = np.zeros((p + 1, p + 1))
    for d in range(p + 1):
        prod = z[: n - d] * z[d:]
        csum = np.concatenate(([0.0], np.cumsum(prod)))
        for a in range(p + 1 - d):
            b = a + d
            # u runs over 0-based a..n-1-b, i.e. prod indices a..n-1-b
            hi = n - b
            val = csum[hi] - csum[a] if hi > a else 0.0
            D[a, b] = val
            D[b, a] = val
    return D


def sos_value_grad(zeta, D):
    """``S = beta' D beta`` and dS/dzeta (full vector)."""
    phi = dl_forward(zeta)
    beta = np.concatenate(([-1.0], phi))
    Db = D @ beta
    S = float(beta @ Db)
    grad = dl_vjp(zeta, 2.0 * Db[1:])
    return S, grad


def sos_value(zeta, D):
    phi = dl_forward(zeta)
    beta = np.concatenate(([-1.0], phi))
    return float(beta @ D @ beta)


def ar_residuals(z, phi):
    """``a_t = z_t - sum phi_i z_{t-i}`` for t > p; zero for t <= p."""
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p = phi.size
    a = np.zeros_like(z)
    if p == 0:
        return z.copy()
    if z.size > p:
        pred = np.convolve(z, np.concatenate(([0.0], phi)))[: z.size]
        a[p:] = z[p:] - pred[p:]
    return a


def ar_recursion(e, phi, init):
    """``z_t = sum phi_i z_{t-i} + e_t`` seeded with ``init`` (length p,
    oldest first); returns the len(e) new values."""
    from scipy.signal import lfilter, lfiltic

    phi = np.asarray(phi, dtype=float)
    e = np.asarray(e, dtype=float)
    if phi.size == 0:
        return e.copy()
    den = np.concatenate(([1.0], -phi))
    zi = lfiltic([1.0], den, np.asarray(init, dtype=float)[::-1])
    out, _ = lfilter([1.0], den, e, zi=zi)
    return out
