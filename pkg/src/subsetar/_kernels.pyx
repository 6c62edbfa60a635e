# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels. Contract identical to ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef double SINGULAR_GUARD = 1e-14


cdef void _dl_table(const double[::1] zeta, double[:, ::1] tab) noexcept nogil:
    cdef Py_ssize_t p = zeta.shape[0]
    cdef Py_ssize_t k, j
    cdef double zk
    if p == 0:
        return
    tab[0, 0] = zeta[0]
    for k in range(1, p):
        zk = zeta[k]
        for j in range(k):
            tab[k, j] = tab[k - 1, j] - zk * tab[k - 1, k - 1 - j]
        tab[k, k] = zk


def dl_table(zeta):
    cdef const double[::1] z = np.ascontiguousarray(zeta, dtype=np.float64)
    out = np.zeros((z.shape[0], z.shape[0]))
    cdef double[:, ::1] tab = out
    with nogil:
        _dl_table(z, tab)
    return out


cdef void _dl_forward(const double[::1] zeta, double[::1] phi, double[::1] work) noexcept nogil:
    cdef Py_ssize_t p = zeta.shape[0]
    cdef Py_ssize_t k, j
    cdef double zk
    for k in range(p):
        zk = zeta[k]
        for j in range(k):
            work[j] = phi[j] - zk * phi[k - 1 - j]
        for j in range(k):
            phi[j] = work[j]
        phi[k] = zk


def dl_forward(zeta):
    cdef const double[::1] z = np.ascontiguousarray(zeta, dtype=np.float64)
    cdef Py_ssize_t p = z.shape[0]
    out = np.zeros(p)
    cdef double[::1] phi = out
    cdef double[::1] work = np.zeros(max(p, 1))
    with nogil:
        _dl_forward(z, phi, work)
    return out


def dl_backward(phi):
    cdef double[::1] cur = np.array(phi, dtype=np.float64)
    cdef Py_ssize_t p = cur.shape[0]
    out = np.zeros(p)
    cdef double[::1] zeta = out
    cdef double[::1] work = np.zeros(max(p, 1))
    cdef Py_ssize_t k, j
    cdef double zk, denom
    cdef bint ok = True
    with nogil:
        for k in range(p - 1, -1, -1):
            zk = cur[k]
            zeta[k] = zk
            denom = 1.0 - zk * zk
            if not (fabs(zk) < 1.0 and denom >= SINGULAR_GUARD):
                ok = False
                break
            for j in range(k):
                work[j] = (cur[j] + zk * cur[k - 1 - j]) / denom
            for j in range(k):
                cur[j] = work[j]
    return out, bool(ok)


cdef void _dl_vjp(const double[::1] zeta, const double[:, ::1] tab,
                  double[::1] g, double[::1] gy) noexcept nogil:
    cdef Py_ssize_t p = zeta.shape[0]
    cdef Py_ssize_t k, j
    cdef double zk, acc
    for k in range(p - 1, 0, -1):
        zk = zeta[k]
        acc = 0.0
        for j in range(k):
            gy[j] = g[j]
        for j in range(k):
            g[j] = gy[j] - zk * gy[k - 1 - j]
            acc += tab[k - 1, k - 1 - j] * gy[j]
        g[k] -= acc


def dl_vjp(zeta, v):
    cdef const double[::1] z = np.ascontiguousarray(zeta, dtype=np.float64)
    cdef Py_ssize_t p = z.shape[0]
    out = np.array(v, dtype=np.float64)
    cdef double[::1] g = out
    tab_arr = np.zeros((p, p))
    cdef double[:, ::1] tab = tab_arr
    cdef double[::1] gy = np.zeros(max(p, 1))
    with nogil:
        _dl_table(z, tab)
        _dl_vjp(z, tab, g, gy)
    return out


def burg(x, Py_ssize_t lag_max):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    pacf_arr = np.zeros(lag_max)
    var_arr = np.zeros(lag_max + 1)
    cdef double[::1] pacf = pacf_arr
    cdef double[::1] var = var_arr
    cdef double[::1] ef = np.array(xv[1:], dtype=np.float64)
    cdef double[::1] eb = np.array(xv[:n - 1], dtype=np.float64)
    cdef Py_ssize_t k, t, m
    cdef double num, den, kap, f, b, s0 = 0.0
    cdef Py_ssize_t bad = 0
    with nogil:
        for t in range(n):
            s0 += xv[t] * xv[t]
        var[0] = s0 / n
        m = n - 1
        for k in range(lag_max):
            num = 0.0
            den = 0.0
            for t in range(m):
                num += ef[t] * eb[t]
                den += ef[t] * ef[t] + eb[t] * eb[t]
            if not den > 0.0:
                bad = k + 1
                break
            kap = 2.0 * num / den
            if kap > 1.0:
                kap = 1.0
            elif kap < -1.0:
                kap = -1.0
            pacf[k] = kap
            var[k + 1] = var[k] * (1.0 - kap * kap)
            # ef drops its first element, eb its last
            for t in range(m - 1):
                f = ef[t + 1] - kap * eb[t + 1]
                b = eb[t] - kap * ef[t]
                ef[t] = f
                eb[t] = b
            m -= 1
    return pacf_arr, var_arr, bad


def sos_kernel(z, Py_ssize_t p):
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = zv.shape[0]
    out = np.zeros((p + 1, p + 1))
    cdef double[:, ::1] D = out
    cdef double[::1] csum = np.zeros(n + 1)
    cdef Py_ssize_t a, b, d, u
    cdef double val
    with nogil:
        for d in range(p + 1):
            csum[0] = 0.0
            for u in range(n):
                csum[u + 1] = csum[u] + (zv[u] * zv[u + d] if u + d < n else 0.0)
            for a in range(p + 1 - d):
                b = a + d
                val = csum[n - b] - csum[a] if n - b > a else 0.0
                D[a, b] = val
                D[b, a] = val
    return out


def sos_value(zeta, D):
    cdef const double[::1] z = np.ascontiguousarray(zeta, dtype=np.float64)
    cdef const double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64)
    cdef Py_ssize_t p = z.shape[0]
    cdef double[::1] beta = np.zeros(p + 1)
    cdef double[::1] phi = np.zeros(max(p, 1))
    cdef double[::1] work = np.zeros(max(p, 1))
    cdef Py_ssize_t i, j
    cdef double S = 0.0, row
    with nogil:
        _dl_forward(z, phi, work)
        beta[0] = -1.0
        for j in range(p):
            beta[j + 1] = phi[j]
        for i in range(p + 1):
            row = 0.0
            for j in range(p + 1):
                row += Dv[i, j] * beta[j]
            S += beta[i] * row
    return S


def sos_value_grad(zeta, D):
    cdef const double[::1] z = np.ascontiguousarray(zeta, dtype=np.float64)
    cdef const double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64)
    cdef Py_ssize_t p = z.shape[0]
    cdef double[::1] beta = np.zeros(p + 1)
    cdef double[::1] work = np.zeros(max(p, 1))
    grad_arr = np.zeros(p)
    cdef double[::1] g = grad_arr
    tab_arr = np.zeros((p, p))
    cdef double[:, ::1] tab = tab_arr
    cdef Py_ssize_t i, j
    cdef double S = 0.0, row
    with nogil:
        _dl_table(z, tab)
        beta[0] = -1.0
        for j in range(p):
            beta[j + 1] = tab[p - 1, j]
        for i in range(p + 1):
            row = 0.0
            for j in range(p + 1):
                row += Dv[i, j] * beta[j]
            S += beta[i] * row
            if i > 0:
                g[i - 1] = 2.0 * row
        _dl_vjp(z, tab, g, work)
    return S, grad_arr


def ar_residuals(z, phi):
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef const double[::1] ph = np.ascontiguousarray(phi, dtype=np.float64)
    cdef Py_ssize_t n = zv.shape[0]
    cdef Py_ssize_t p = ph.shape[0]
    out = np.zeros(n)
    cdef double[::1] a = out
    cdef Py_ssize_t t, i
    cdef double acc
    if p == 0:
        return np.array(zv, dtype=np.float64)
    with nogil:
        for t in range(p, n):
            acc = zv[t]
            for i in range(p):
                acc -= ph[i] * zv[t - 1 - i]
            a[t] = acc
    return out


def ar_recursion(e, phi, init):
    cdef const double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef const double[::1] ph = np.ascontiguousarray(phi, dtype=np.float64)
    cdef Py_ssize_t n = ev.shape[0]
    cdef Py_ssize_t p = ph.shape[0]
    buf_arr = np.zeros(n + p)
    cdef double[::1] buf = buf_arr
    cdef const double[::1] iv
    cdef Py_ssize_t t, i
    cdef double acc
    if p:
        iv = np.ascontiguousarray(init, dtype=np.float64)
        for i in range(p):
            buf[i] = iv[i]
    with nogil:
        for t in range(n):
            acc = ev[t]
            for i in range(p):
                acc += ph[i] * buf[p + t - 1 - i]
            buf[p + t] = acc
    return buf_arr[p:].copy()
