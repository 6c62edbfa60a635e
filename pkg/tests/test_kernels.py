"""Both kernel backends agree with each other and with direct formulas."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from subsetar import kernels, _kernels_py

BACKENDS = kernels.backends()


def test_default_backend_is_importable():
    assert kernels.BACKEND in BACKENDS
    for name in kernels.NAMES:
        assert callable(getattr(kernels, name))


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    rng = np.random.default_rng(seed)
    cy, py = BACKENDS["cython"], BACKENDS["python"]
    p = int(rng.integers(1, 15))
    zeta = rng.uniform(-0.9, 0.9, p)
    x = rng.standard_normal(300)
    assert_allclose(cy.dl_table(zeta), py.dl_table(zeta), atol=1e-13)
    phi = py.dl_forward(zeta)
    assert_allclose(cy.dl_forward(zeta), phi, atol=1e-13)
    zc, okc = cy.dl_backward(phi)
    zp, okp = py.dl_backward(phi)
    assert okc == okp
    assert_allclose(zc, zp, atol=1e-11)
    v = rng.standard_normal(p)
    assert_allclose(cy.dl_vjp(zeta, v), py.dl_vjp(zeta, v), atol=1e-12)
    for a, b in zip(cy.burg(x, 20), py.burg(x, 20)):
        assert_allclose(a, b, atol=1e-12)
    D = py.sos_kernel(x, p)
    assert_allclose(cy.sos_kernel(x, p), D, rtol=1e-12, atol=1e-10)
    assert_allclose(cy.sos_value(zeta, D), py.sos_value(zeta, D), rtol=1e-12)
    for a, b in zip(cy.sos_value_grad(zeta, D), py.sos_value_grad(zeta, D)):
        assert_allclose(a, b, rtol=1e-10, atol=1e-10)
    assert_allclose(cy.ar_residuals(x, phi), py.ar_residuals(x, phi), atol=1e-12)
    e = rng.standard_normal(50)
    init = rng.standard_normal(p)
    assert_allclose(cy.ar_recursion(e, phi, init), py.ar_recursion(e, phi, init), atol=1e-10)


def test_sos_kernel_brute_force(backend):
    rng = np.random.default_rng(3)
    z = rng.standard_normal(25)
    n, p = z.size, 4
    D = backend.sos_kernel(z, p)
    zz = np.concatenate(([0.0], z))  # 1-based
    for a in range(p + 1):
        for b in range(p + 1):
            assert_allclose(D[a, b], sum(zz[u] * zz[u + b - a]
                                         for u in range(1 + a, n - b + 1)), atol=1e-12)


def test_sos_kernel_small_example(backend):
    # z=(1,2,3), p=1: D[0,0]=1+4+9, D[1,1]=z_2^2=4, D[0,1]=z1 z2 + z2 z3
    D = backend.sos_kernel(np.array([1.0, 2.0, 3.0]), 1)
    assert_allclose(D, [[14.0, 8.0], [8.0, 4.0]])


def test_vjp_matches_jacobian_transpose(backend):
    rng = np.random.default_rng(4)
    zeta = rng.uniform(-0.8, 0.8, 6)
    v = rng.standard_normal(6)
    h = 1e-6
    J = np.column_stack([(backend.dl_forward(zeta + h * e) - backend.dl_forward(zeta - h * e))
                         / (2 * h) for e in np.eye(6)])
    assert_allclose(backend.dl_vjp(zeta, v), J.T @ v, atol=1e-8)


def test_residuals_and_recursion_invert(backend):
    rng = np.random.default_rng(5)
    phi = _kernels_py.dl_forward(np.array([0.5, -0.3, 0.2]))
    e = rng.standard_normal(200)
    init = rng.standard_normal(3)
    body = backend.ar_recursion(e, phi, init)
    z = np.concatenate((init, body))
    a = backend.ar_residuals(z, phi)
    assert_allclose(a[:3], 0.0)
    assert_allclose(a[3:], e, atol=1e-10)


def test_burg_bounds_and_variance(backend):
    rng = np.random.default_rng(6)
    x = rng.standard_normal(100)
    x -= x.mean()
    pac, var, bad = backend.burg(x, 30)
    assert bad == 0
    assert np.all(np.abs(pac) <= 1.0)
    assert_allclose(var[0], np.dot(x, x) / x.size)
    assert_allclose(var[1:], var[:-1] * (1 - pac ** 2))
