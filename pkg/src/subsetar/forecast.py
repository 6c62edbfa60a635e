"""Simulation, forecasting and holdout evaluation of ARzeta models.

Random numbers come from numpy's ``Generator(PCG64(seed))``; normal
variates use its ziggurat ``standard_normal``.  A given seed reproduces
the same stream for a given numpy release.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from . import kernels
from .core import (
    BoundaryParameter,
    FittedModel,
    HistoryTooShort,
    InvalidConfig,
    NegativeBase,
    SubsetARError,
    SubsetSpec,
    TimeSeries,
    TooShort,
    ZetaVector,
    center,
    validate_subset,
)
from .diagnostics import psi_weights
from .inference import siddiqui_information
from .likelihood import BOUND, build_kernel, fit_mle, fit_phi_subset

__all__ = [
    "simulate",
    "ForecastResult",
    "forecast",
    "HoldoutRow",
    "HoldoutReport",
    "holdout_eval",
    "skewness",
    "skewness_scan",
]


def simulate(zeta: ZetaVector, n: int, seed=None, mean: float = 0.0,
             sigma2: float = 1.0, burn_in: int | None = None,
             start: str = "burnin") -> TimeSeries:
    """Gaussian ARzeta realization of length ``n``.

    Parameters
    ----------
    zeta : ZetaVector
    n : int
    seed : int, SeedSequence or Generator, optional
    mean, sigma2 : float
        Process mean and innovation variance.
    burn_in : int, optional
        Discarded warm-up length for ``start="burnin"``; default ``10p+100``.
    start : {"burnin", "stationary"}
        ``stationary`` draws the first p values from their exact joint
        distribution instead of running a warm-up.

    Partial autocorrelations must lie inside the estimation box
    ``|zeta| < 1 - 1e-7``; closer to a unit root no practical warm-up
    reaches stationarity.
    """
    if np.any(np.abs(zeta.values) >= BOUND):
        raise BoundaryParameter(
            f"simulation needs |zeta| < {BOUND!r}, got {zeta.values.tolist()}")
    if n < 2:
        raise TooShort("a simulated series needs n >= 2")
    if not sigma2 > 0:
        raise InvalidConfig("sigma2 must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(
        np.random.PCG64(seed))
    p = zeta.spec.p
    phi = kernels.dl_forward(zeta.full())
    sd = np.sqrt(sigma2)
    if start == "burnin":
        burn = 10 * p + 100 if burn_in is None else int(burn_in)
        e = rng.standard_normal(n + burn) * sd
        z = kernels.ar_recursion(e, phi, np.zeros(p))[burn:]
    elif start == "stationary":
        G = siddiqui_information(phi) * sigma2
        init = linalg.cholesky(G, lower=True) @ rng.standard_normal(p)
        e = rng.standard_normal(max(n - p, 0)) * sd
        z = np.concatenate((init, kernels.ar_recursion(e, phi, init)))[:n]
    else:
        raise InvalidConfig(f"unknown start {start!r}")
    return TimeSeries(z + mean)


@dataclass(frozen=True)
class ForecastResult:
    origin: int
    horizon: int
    mean: np.ndarray
    stderr: np.ndarray

    def interval(self, z: float = 1.96):
        return self.mean - z * self.stderr, self.mean + z * self.stderr


def forecast(model: FittedModel, history, h: int = 1) -> ForecastResult:
    """Minimum mean square error forecasts at horizons 1..h.

    ``history`` is in original units (a raw array or TimeSeries); the
    model's mean is subtracted before the recursion and added back after.
    Standard errors are ``sigma * sqrt(sum_{j<h} psi_j^2)``.
    """
    raw = history.raw if isinstance(history, TimeSeries) else np.asarray(history, float)
    h = int(h)
    if h < 1:
        raise InvalidConfig("horizon must be >= 1")
    p = model.phi.order
    if raw.size < p:
        raise HistoryTooShort(f"need at least {p} past values, got {raw.size}")
    c = raw - model.mean
    pred = kernels.ar_recursion(np.zeros(h), model.phi.values, c[raw.size - p:])
    psi = psi_weights(model.phi.values, h)
    se = np.sqrt(model.sigma2 * np.cumsum(psi * psi))
    return ForecastResult(origin=raw.size, horizon=h, mean=pred + model.mean, stderr=se)


@dataclass(frozen=True)
class HoldoutRow:
    label: str
    m: int
    loglik: float
    bic: float
    sigma: float
    rmse: float
    model: object = field(default=None, compare=False, repr=False)
    error: str | None = None


@dataclass(frozen=True)
class HoldoutReport:
    """Fit on the first ``train`` values, score one-step forecasts on the rest."""

    train: int
    test: int
    rows: tuple

    def row(self, label: str) -> HoldoutRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)


def _one_step_errors(raw, mean, phi, split):
    c = raw - mean
    res = kernels.ar_residuals(c, phi)
    return res[split:]


def holdout_eval(series, split: int, specs, phi_lags=()) -> HoldoutReport:
    """Rolling one-step forecasts with parameters frozen at the training fit.

    Parameters
    ----------
    series : array_like or TimeSeries
        Full series in original units.
    split : int
        Number of leading values used for fitting.
    specs : iterable of SubsetSpec or lag sequences
        ARzeta models to compare.
    phi_lags : iterable of lag sequences
        Optional classical ARphi subsets, fitted by exact likelihood over
        their free coefficients, for comparison.
    """
    raw = series.raw if isinstance(series, TimeSeries) else np.asarray(series, float)
    n = raw.size
    split = int(split)
    specs = [s if isinstance(s, SubsetSpec) else validate_subset(s) for s in specs]
    phi_lags = [validate_subset(s).lags for s in phi_lags]
    pmax = max([s.p for s in specs] + [l[-1] for l in phi_lags] + [0])
    if not pmax + 10 <= split < n:
        raise InvalidConfig(
            f"split must leave >= p+10={pmax + 10} training and >= 1 test values "
            f"(n={n}, split={split})")
    train = center(raw[:split])
    kernel = build_kernel(train, pmax)
    rows = []
    for lags in phi_lags:
        label = "ARphi(" + ",".join(map(str, lags)) + ")"
        try:
            fit = fit_phi_subset(train, lags)
        except SubsetARError as exc:
            rows.append(HoldoutRow(label, len(lags), np.nan, np.nan, np.nan, np.nan,
                                   error=str(exc)))
            continue
        err = _one_step_errors(raw, train.mean, fit.phi, split)
        rows.append(HoldoutRow(label, fit.m, fit.loglik, fit.bic, np.sqrt(fit.sigma2),
                               float(np.sqrt(np.mean(err ** 2))), fit))
    for spec in specs:
        try:
            fit = fit_mle(train, spec, kernel=kernel)
        except SubsetARError as exc:
            rows.append(HoldoutRow(str(spec), spec.m, np.nan, np.nan, np.nan, np.nan,
                                   error=str(exc)))
            continue
        err = _one_step_errors(raw, fit.mean, fit.phi.values, split)
        rows.append(HoldoutRow(str(spec), spec.m, fit.loglik, fit.bic,
                               np.sqrt(fit.sigma2), float(np.sqrt(np.mean(err ** 2))), fit))
    return HoldoutReport(train=split, test=n - split, rows=tuple(rows))


def skewness(x) -> float:
    """Moment coefficient of skewness ``m3 / m2^{3/2}``."""
    x = np.asarray(x, dtype=float)
    d = x - x.mean()
    m2 = np.mean(d * d)
    if not m2 > 0:
        return 0.0
    return float(np.mean(d ** 3) / m2 ** 1.5)


def skewness_scan(series, exponents) -> np.ndarray:
    """Skewness of ``z ** lam`` for each exponent ``lam``."""
    raw = series.raw if isinstance(series, TimeSeries) else np.asarray(series, float)
    out = []
    for lam in exponents:
        lam = float(lam)
        if not float(lam).is_integer() and np.any(raw < 0):
            raise NegativeBase(f"fractional power {lam} of negative data")
        out.append(skewness(np.power(raw, lam)))
    return np.array(out)
