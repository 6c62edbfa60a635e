import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import linalg

from conftest import acvf_oracle, random_spec
from subsetar.core import (
    BoundaryConvergence,
    SeriesShorterThanOrder,
    SubsetSpec,
    TimeSeries,
    ZetaVector,
    center,
)
from subsetar.forecast import simulate
from subsetar.likelihood import (
    burg_init,
    build_kernel,
    concentrated_loglik,
    fit_mle,
    fit_phi_subset,
    gp_determinant,
    log_gp,
    loglik_gradient,
    phi_loglik,
)
from subsetar.pacf import zeta_to_phi


def _oracle_full(z, phi):
    """S and log det of the correlation-scaled covariance via dense Gamma_n."""
    g = acvf_oracle(phi, 1.0, z.size - 1)
    M = linalg.toeplitz(g)
    c = linalg.cho_factor(M)
    S = float(z @ linalg.cho_solve(c, z))
    return S, 2.0 * np.sum(np.log(np.diag(c[0])))


def _oracle_conditional(z, phi):
    """O(n) route: exact quadratic form of z_1..z_p plus conditional residuals."""
    p = phi.size
    g = acvf_oracle(phi, 1.0, p)
    Mp = linalg.toeplitz(g[:p])
    head = z[:p]
    S = float(head @ linalg.solve(Mp, head))
    for t in range(p, z.size):
        S += (z[t] - phi @ z[t - 1::-1][:p]) ** 2
    return S, float(np.linalg.slogdet(Mp)[1])


def test_gp_examples():
    assert gp_determinant(ZetaVector(SubsetSpec((1, 3)), [0.5, 0.5])) == pytest.approx(3.16049, abs=1e-5)
    assert gp_determinant(ZetaVector(SubsetSpec((12,)), [0.5])) == pytest.approx(31.569, abs=1e-3)
    assert gp_determinant(ZetaVector(SubsetSpec((1, 4)), [0.0, 0.0])) == 1.0
    z = ZetaVector(SubsetSpec((2, 5)), [0.3, -0.6])
    assert log_gp(z) == pytest.approx(np.log(gp_determinant(z)))


def test_kernel_small_and_symmetric():
    k = build_kernel(TimeSeries(np.array([1.0, 2.0, 3.0]), centered=True), 1)
    assert_allclose(k.D, [[14.0, 8.0], [8.0, 4.0]])
    x = center(np.random.default_rng(0).standard_normal(40))
    D = build_kernel(x, 5).D
    assert_allclose(D, D.T)
    assert_allclose(build_kernel(TimeSeries(np.zeros(10), centered=True), 3).D, 0.0)
    with pytest.raises(SeriesShorterThanOrder):
        build_kernel(x, 40)


@pytest.mark.parametrize("seed", range(25))
def test_loglik_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    spec = SubsetSpec(random_spec(rng, 6))
    zeta = ZetaVector(spec, rng.uniform(-0.9, 0.9, spec.m))
    n = int(rng.integers(spec.p + 2, 200))
    z = rng.standard_normal(n) * 3.0
    ts = TimeSeries(z, centered=True)
    lv = concentrated_loglik(zeta, build_kernel(ts, spec.p))
    phi = zeta_to_phi(zeta).values
    S, logdet = _oracle_full(z, phi)
    S2, logdet2 = _oracle_conditional(z, phi)
    assert_allclose(lv.S, S, rtol=1e-8)
    assert_allclose(S2, S, rtol=1e-8)
    assert_allclose(2 * lv.half_log_gp, logdet, rtol=1e-8, atol=1e-10)
    assert_allclose(logdet2, logdet, rtol=1e-8, atol=1e-10)
    expect = -0.5 * n * np.log(S / n) - 0.5 * logdet
    assert_allclose(lv.loglik, expect, rtol=1e-8)


def test_white_noise_reduction():
    z = center(np.random.default_rng(1).standard_normal(50))
    lv = concentrated_loglik(ZetaVector(SubsetSpec((1, 3)), [0.0, 0.0]), build_kernel(z, 3))
    assert_allclose(lv.loglik, -25 * np.log(np.dot(z.values, z.values) / 50))


@pytest.mark.parametrize("seed", range(5))
def test_analytic_gradient_matches_numeric(seed):
    rng = np.random.default_rng(seed)
    spec = SubsetSpec(random_spec(rng, 8))
    zeta = ZetaVector(spec, rng.uniform(-0.8, 0.8, spec.m))
    kern = build_kernel(center(rng.standard_normal(150)), spec.p)
    assert_allclose(loglik_gradient(zeta, kern, "analytic"),
                    loglik_gradient(zeta, kern, "numeric"), rtol=1e-5, atol=1e-5)


@pytest.mark.parametrize("n", [7, 9, 11])
def test_short_series_uses_exact_form(n):
    # n < 2p: the end-corrected D form no longer equals z' Gamma^-1 z
    rng = np.random.default_rng(n)
    spec = SubsetSpec((1, 6))
    zeta = ZetaVector(spec, [0.4, -0.5])
    z = rng.standard_normal(n)
    kern = build_kernel(TimeSeries(z, centered=True), 6)
    S, _ = _oracle_full(z, zeta_to_phi(zeta).values)
    assert_allclose(concentrated_loglik(zeta, kern).S, S, rtol=1e-10)
    assert_allclose(loglik_gradient(zeta, kern, "analytic"),
                    loglik_gradient(zeta, kern, "numeric"), rtol=1e-4, atol=1e-6)


def test_logdet_gradient_vanishes_at_zero():
    spec = SubsetSpec((1, 2, 5))
    h = 1e-6
    for i in range(spec.m):
        e = np.eye(spec.m)[i] * h
        d = (log_gp(ZetaVector(spec, e)) - log_gp(ZetaVector(spec, -e))) / (2 * h)
        assert abs(d) < 1e-9


def test_fit_recovers_ar1():
    ts = simulate(ZetaVector(SubsetSpec((1,)), [0.9]), 5000, seed=4)
    fit = fit_mle(ts, (1,))
    assert abs(fit.zeta.values[0] - 0.9) < 3 * fit.stderr[0]
    assert fit.converged and fit.n == 5000


@pytest.mark.parametrize("seed", range(15))
def test_mle_not_worse_than_burg_init(seed):
    rng = np.random.default_rng(100 + seed)
    spec = SubsetSpec(random_spec(rng, 10))
    truth = ZetaVector(spec, rng.uniform(-0.8, 0.8, spec.m))
    ts = center(simulate(truth, int(rng.integers(60, 400)), seed=seed))
    kern = build_kernel(ts, spec.p)
    fit = fit_mle(ts, spec, kernel=kern)
    init = concentrated_loglik(ZetaVector(spec, burg_init(ts, spec)), kern).loglik
    assert fit.loglik >= init - 1e-9


def test_fit_is_optimal_against_restarts():
    ts = simulate(ZetaVector(SubsetSpec((1, 2, 7)), [0.6, 0.3, -0.3]), 300, seed=5)
    a = fit_mle(ts, (1, 2, 7))
    for start in ([0, 0, 0], [0.5, 0.5, 0.5], [-0.5, 0.2, 0.4]):
        b = fit_mle(ts, (1, 2, 7), init=start)
        assert b.loglik <= a.loglik + 1e-7
        assert_allclose(b.zeta.values, a.zeta.values, atol=1e-5)
    c = fit_mle(ts, (1, 2, 7), gradient="numeric")
    assert_allclose(c.zeta.values, a.zeta.values, atol=1e-5)


def test_scale_equivariance():
    ts = simulate(ZetaVector(SubsetSpec((1, 4)), [0.5, -0.3]), 400, seed=6)
    a = fit_mle(ts, (1, 4))
    b = fit_mle(ts.raw * 37.0, (1, 4))
    assert_allclose(b.zeta.values, a.zeta.values, atol=1e-6)
    assert_allclose(b.sigma2, a.sigma2 * 37.0 ** 2, rtol=1e-6)


def test_fit_too_short():
    with pytest.raises(SeriesShorterThanOrder):
        fit_mle(np.arange(5.0), (1, 7))


def test_boundary_convergence_is_reported():
    # a deterministic sinusoid sits on the boundary of the stationary region
    t = np.arange(200)
    z = np.cos(0.3 * t)
    with pytest.raises(BoundaryConvergence) as info:
        fit_mle(z, (1, 2))
    assert info.value.model is not None
    assert not info.value.model.converged


def test_phi_subset_comparator():
    truth = ZetaVector(SubsetSpec((1, 2, 7)), [0.5, 0.3, -0.2])
    ts = center(simulate(truth, 400, seed=7))
    fit = fit_phi_subset(ts, (1, 2, 7))
    assert fit.phi[[2, 3, 4, 5]].tolist() == [0.0] * 4
    kern = build_kernel(ts, 7)
    assert_allclose(phi_loglik(fit.phi, kern).loglik, fit.loglik)
    # full-order AR(7) in either parameterization gives the same maximum
    full_z = fit_mle(ts, SubsetSpec.full(7))
    full_p = fit_phi_subset(ts, range(1, 8))
    assert full_p.loglik <= full_z.loglik + 1e-6
    assert full_p.loglik == pytest.approx(full_z.loglik, abs=1e-3)
