import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from subsetar.core import InvalidConfig, LagBeyondTable, SubsetSpec, ZetaVector, center
from subsetar.forecast import simulate
from subsetar.likelihood import fit_mle
from subsetar.pacf import PacfTable, burg_pacf
from subsetar.selection import (
    CRITERIA,
    CandidateModel,
    SelectionConfig,
    penalty,
    rescore_exact,
    score_subset,
    select_models,
)


@pytest.fixture(scope="module")
def series():
    return center(simulate(ZetaVector(SubsetSpec((1, 2, 7)), [0.6, 0.35, -0.3]), 600, seed=21))


def test_score_trivial_cases():
    pac = np.array([0.0, 0.5, -0.3])
    assert score_subset(pac, [], 100) == 0.0
    assert score_subset(pac, [1], 100) == pytest.approx(np.log(100))
    expect = 100 * np.log((1 - 0.25) * (1 - 0.09)) + 2 * np.log(100)
    assert score_subset(pac, (2, 3), 100) == pytest.approx(expect)
    assert score_subset(pac, (2, 3), 100, "aic") == pytest.approx(expect - 2 * np.log(100) + 4)
    with pytest.raises(LagBeyondTable):
        score_subset(pac, (4,), 100)
    tab = PacfTable(values=pac, n=100)
    assert score_subset(tab, SubsetSpec((2, 3))) == pytest.approx(expect)


def test_penalties():
    assert penalty("bic", 3, 100) == pytest.approx(3 * np.log(100))
    assert penalty("aic", 3, 100) == 6
    assert penalty("aicc", 3, 100) == pytest.approx(6 + 24 / 96)
    assert penalty("hq", 3, 100) == pytest.approx(6 * np.log(np.log(100)))
    with pytest.raises(InvalidConfig):
        penalty("dic", 1, 10)


@pytest.mark.parametrize("kw", [dict(max_order=5, max_params=6), dict(max_order=5, max_params=0),
                                dict(max_order=5, max_params=2, top=0),
                                dict(max_order=5, max_params=2, criterion="x"),
                                dict(max_order=20, max_params=2, exhaustive=True)])
def test_config_validation(kw):
    with pytest.raises(InvalidConfig):
        SelectionConfig(**kw)


def test_config_requires_L_below_n():
    with pytest.raises(InvalidConfig):
        select_models(np.random.default_rng(0).standard_normal(10), SelectionConfig(10, 3))


def test_prefix_scan_nests_and_recovers_truth(series):
    cfg = SelectionConfig(max_order=20, max_params=10, top=10)
    cands = select_models(series, cfg)
    by_m = sorted(cands, key=lambda c: c.m)
    for a, b in zip(by_m, by_m[1:]):
        assert set(a.spec.lags) <= set(b.spec.lags)
        assert b.order[: a.m] == a.order
    assert cands[0].spec.lags == (1, 2, 7)
    assert all(np.isfinite(c.score) and c.approximate for c in cands)
    assert [c.score for c in cands] == sorted(c.score for c in cands)
    assert all(max(c.spec.lags) <= 20 for c in cands)


@pytest.mark.parametrize("criterion", CRITERIA)
def test_prefix_scan_finds_best_subset_of_each_size(series, criterion):
    # for fixed m the best subset takes the m largest |pacf|, so the scan is optimal
    L, M = 10, 4
    pac = burg_pacf(series, L)
    best = select_models(series, SelectionConfig(L, M, top=1, criterion=criterion), pac)[0]
    brute = min((score_subset(pac, combo, pac.n, criterion), combo)
                for m in range(1, M + 1)
                for combo in itertools.combinations(range(1, L + 1), m))
    assert best.score == pytest.approx(brute[0])
    ex = select_models(series, SelectionConfig(L, M, top=1, criterion=criterion,
                                               exhaustive=True), pac)[0]
    assert ex.score == pytest.approx(brute[0])


def test_tie_break_prefers_smaller_lag():
    pac = PacfTable(values=np.array([0.1, 0.5, 0.2, -0.5]), n=100)
    x = np.random.default_rng(0).standard_normal(100)
    cands = select_models(x, SelectionConfig(4, 1, top=1), pac)
    assert cands[0].spec.lags == (2,)


def test_monotone_in_abs_pacf():
    base = np.array([0.3, -0.2, 0.1])
    bigger = base.copy()
    bigger[1] = -0.4
    assert score_subset(bigger, (1, 2), 200) < score_subset(base, (1, 2), 200)


def test_white_noise_smoke():
    x = np.random.default_rng(5).standard_normal(400)
    cands = select_models(x, SelectionConfig(20, 5, top=5))
    assert all(np.isfinite(c.score) for c in cands)
    assert cands[0].m <= 2


def test_rescore_exact(series):
    cands = select_models(series, SelectionConfig(20, 6, top=4))
    out = rescore_exact(series, cands)
    n = series.n
    for c in out:
        fit = fit_mle(series, c.spec)
        assert not c.approximate
        assert c.loglik == pytest.approx(fit.loglik, abs=1e-6)
        assert c.bic == pytest.approx(-2 * c.loglik + c.m * np.log(n))
        assert c.aic == pytest.approx(-2 * c.loglik + 2 * c.m)
        assert c.score == pytest.approx(c.bic)
    assert [c.score for c in out] == sorted(c.score for c in out)
    assert rescore_exact(series, []) == []


def test_rescore_keeps_failures():
    z = np.cos(0.3 * np.arange(200))  # the (1, 2) fit is pinned to the boundary
    cands = [CandidateModel(SubsetSpec((1, 2)), 0.0), CandidateModel(SubsetSpec((1,)), 1.0)]
    out = rescore_exact(z, cands)
    assert out[-1].error is not None and out[-1].score == np.inf
    assert out[0].error is None


def test_rank_invariant_to_likelihood_shift(series):
    out = rescore_exact(series, select_models(series, SelectionConfig(20, 6, top=4)))
    scores = np.array([c.score for c in out])
    assert np.array_equal(np.argsort(scores), np.argsort(scores + 123.0))
