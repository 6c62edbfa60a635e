import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_spec
from subsetar import kernels
from subsetar.core import (
    DegreesOfFreedomNonPositive,
    FittedModel,
    InvalidConfig,
    OrderExceedsLength,
    PhiVector,
    SubsetSpec,
    ZeroVariance,
    ZetaVector,
    center,
)
from subsetar.diagnostics import (
    bonferroni_multiplier,
    diagnose,
    ljung_box,
    psi_weights,
    residual_acf,
    residual_covariance,
    residuals,
    simultaneous_bands,
)
from subsetar.forecast import simulate
from subsetar.inference import zeta_information
from subsetar.likelihood import fit_mle


def model_at(lags, values, n=500, mean=0.0):
    spec = SubsetSpec(tuple(lags))
    zeta = ZetaVector(spec, values)
    Iz, se = zeta_information(zeta, n)
    return FittedModel(spec=spec, zeta=zeta, phi=PhiVector(kernels.dl_forward(zeta.full())),
                       mean=mean, sigma2=1.0, loglik=0.0, n=n, info=Iz, stderr=se)


def test_ljung_box_examples():
    r = np.zeros(5)
    r[0] = 0.1
    Q, df, pv = ljung_box(r, 100, 1)
    assert Q == pytest.approx(100 * 102 * 0.01 / 99) and Q == pytest.approx(1.0303, abs=1e-4)
    assert df == 4
    Q, df, pv = ljung_box(np.zeros(6), 100, 2)
    assert Q == 0 and pv == 1.0
    with pytest.raises(DegreesOfFreedomNonPositive):
        ljung_box(np.zeros(3), 100, 3)


def test_bonferroni():
    assert bonferroni_multiplier(0.05, 1) == pytest.approx(1.959964, abs=1e-6)
    assert bonferroni_multiplier(0.05, 3) == pytest.approx(2.394, abs=1e-3)
    assert simultaneous_bands([1.0], 100, 0.05, 1)[0] == pytest.approx(0.196, abs=1e-3)
    assert_allclose(simultaneous_bands(np.eye(3), 100, 0.05, 1), 0.19599640, atol=1e-7)
    with pytest.raises(InvalidConfig):
        bonferroni_multiplier(1.5, 1)


def test_psi_weights():
    assert_allclose(psi_weights([0.5], 5), 0.5 ** np.arange(5))
    psi = psi_weights([0.5, 0.2], 6)
    for j in range(2, 6):
        assert psi[j] == pytest.approx(0.5 * psi[j - 1] + 0.2 * psi[j - 2])
    assert_allclose(psi_weights(np.zeros(3), 4), [1, 0, 0, 0])


def test_residuals_recover_innovations():
    rng = np.random.default_rng(0)
    e = rng.standard_normal(300)
    z = kernels.ar_recursion(e[1:], np.array([0.6]), e[:1])
    z = np.concatenate((e[:1], z))
    res = residuals(z, model_at((1,), [0.6]))
    assert res.values[0] == 0.0
    assert_allclose(res.values[1:], e[1:], atol=1e-12)


def test_residuals_zero_model_and_errors():
    x = np.random.default_rng(1).standard_normal(50)
    m = model_at((2,), [0.0])
    r = residuals(x, m)
    assert_allclose(r.values[2:], x[2:])
    assert_allclose(r.values[:2], 0.0)
    with pytest.raises(OrderExceedsLength):
        residuals(np.ones(2), m)


def test_residual_acf_examples():
    a = np.tile([1.0, -1.0], 50)
    r = residual_acf(a, 3)
    assert r[0] == pytest.approx(-(a.size - 1) / a.size)
    with pytest.raises(ZeroVariance):
        residual_acf(np.full(30, 2.0), 3)
    with pytest.raises(InvalidConfig):
        residual_acf(a, a.size)
    x = np.random.default_rng(2).standard_normal(1000)
    assert np.all(np.abs(residual_acf(x, 20)) < 4 / np.sqrt(1000))


def test_vr_at_zero_is_projection_onto_inactive_lags():
    V = residual_covariance(model_at((1, 3), [0.0, 0.0]), 6)
    assert_allclose(V, np.diag([0, 1, 0, 1, 1, 1.0]), atol=1e-14)


@pytest.mark.parametrize("phi", [0.3, -0.6, 0.9])
def test_vr_ar1_first_entry(phi):
    V = residual_covariance(model_at((1,), [phi]), 10)
    assert V[0, 0] == pytest.approx(phi ** 2, abs=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_vr_properties(seed):
    rng = np.random.default_rng(seed)
    lags = random_spec(rng, 8)
    m = model_at(lags, rng.uniform(-0.5, 0.5, len(lags)))
    L = 10 * m.p
    V = residual_covariance(m, L)
    assert_allclose(V, V.T, atol=0)
    ev = np.linalg.eigvalsh(V)
    assert ev.min() >= -1e-8 and ev.max() <= 1 + 1e-8
    assert np.all((np.diag(V) >= -1e-12) & (np.diag(V) <= 1 + 1e-12))
    assert abs(np.trace(V) - (L - m.m)) < 0.1
    assert np.abs(V @ V - V).max() < 0.05


def test_vr_trace_converges_with_L():
    m = model_at((1, 2, 3, 4, 5, 7), [0.7, 0.6, -0.5, 0.6, 0.5, -0.6])
    gaps = [abs(np.trace(residual_covariance(m, L)) - (L - m.m)) for L in (70, 280, 1120)]
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 1e-8


def test_vr_requires_L_at_least_m():
    with pytest.raises(InvalidConfig):
        residual_covariance(model_at((1, 2, 3), [0.1, 0.1, 0.1]), 2)


def test_diagnose_report():
    ts = center(simulate(ZetaVector(SubsetSpec((1, 4)), [0.5, 0.4]), 500, seed=3))
    fit = fit_mle(ts, (1, 4))
    rep = diagnose(ts, fit, 20)
    assert rep.lag_max == 20 and rep.df == 18 and rep.m == 2
    assert rep.multiplier == pytest.approx(bonferroni_multiplier(0.05, 2))
    assert_allclose(rep.stderr, np.sqrt(np.diag(rep.Vr) / 500))
    assert_allclose(rep.half_width, rep.multiplier * rep.stderr)
    assert rep.Q >= 0 and 0 <= rep.pvalue <= 1
    table = rep.portmanteau_table([5, 20])
    assert table[-1][1] == pytest.approx(rep.Q)
    assert all(k > 0 for k in rep.violations)
    assert len(rep.portmanteau_table()) == 20 - 2
