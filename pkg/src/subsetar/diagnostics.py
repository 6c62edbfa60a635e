"""Residual autocorrelation diagnostics for fitted ARzeta models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import kernels
from .core import (
    DegreesOfFreedomNonPositive,
    FittedModel,
    InvalidConfig,
    OrderExceedsLength,
    TimeSeries,
    ZeroVariance,
    center,
)
from .inference import information_inverse, information_matrices

__all__ = [
    "ResidualSeries",
    "DiagnosticsReport",
    "residuals",
    "residual_acf",
    "psi_weights",
    "residual_covariance",
    "ljung_box",
    "bonferroni_multiplier",
    "simultaneous_bands",
    "diagnose",
]


@dataclass(frozen=True)
class ResidualSeries:
    """Residuals ``a_t``; entries for t <= p are zero by construction."""

    values: np.ndarray
    p: int

    @property
    def n(self) -> int:
        return self.values.size


def residuals(series, model: FittedModel) -> ResidualSeries:
    """One-step residuals of the mean-corrected series, zero for t <= p.

    The series is centered with the model's mean when it is raw.
    """
    if isinstance(series, TimeSeries):
        z = series.values if series.centered else series.values - model.mean
    else:
        z = np.asarray(series, dtype=float) - model.mean
    p = model.phi.order
    if z.size <= p:
        raise OrderExceedsLength(f"series of length {z.size} is too short for order {p}")
    return ResidualSeries(kernels.ar_residuals(z, model.phi.values), p)


def residual_acf(res, lag_max: int) -> np.ndarray:
    """``r_k = c_k / c_0`` with ``c_k = n^{-1} sum_{t>k} a_{t-k} a_t``, k=1..L."""
    if isinstance(res, ResidualSeries):
        a, p = res.values, res.p
    else:
        a, p = np.asarray(res, dtype=float), 0
    n = a.size
    L = int(lag_max)
    if not 1 <= L < n - p:
        raise InvalidConfig(f"lag_max must satisfy 1 <= L < n - p = {n - p}")
    c0 = np.dot(a, a) / n
    if not c0 > 0 or np.ptp(a[p:]) == 0:
        raise ZeroVariance("residuals are constant; autocorrelations undefined")
    return np.array([np.dot(a[: n - k], a[k:]) / n for k in range(1, L + 1)]) / c0


def psi_weights(phi, count: int) -> np.ndarray:
    """``psi_0..psi_{count-1}`` of ``1/phi(B)``: psi_j = sum phi_i psi_{j-i}."""
    phi = np.asarray(getattr(phi, "values", phi), dtype=float)
    p = phi.size
    psi = np.zeros(count)
    if count:
        psi[0] = 1.0
    for j in range(1, count):
        top = min(j, p)
        psi[j] = np.dot(phi[:top], psi[j - 1::-1][:top])
    return psi


def residual_covariance(model: FittedModel, lag_max: int) -> np.ndarray:
    """Asymptotic covariance of ``sqrt(n) r_hat``, an L x L matrix.

    ``V = I_L - X J I_zeta^{-1} J' X'`` where ``X`` is the L x p matrix
    with entries ``psi_{i-j}`` (zero above the diagonal).
    """
    L = int(lag_max)
    if L < model.m:
        raise InvalidConfig(f"lag_max {L} is smaller than the parameter count {model.m}")
    mats = information_matrices(model.zeta)
    p = model.phi.order
    psi = psi_weights(model.phi.values, L)
    X = np.zeros((L, p))
    for j in range(min(p, L)):
        X[j:, j] = psi[: L - j]
    XJ = X @ mats.Jzeta
    V = np.eye(L) - XJ @ information_inverse(mats.Izeta) @ XJ.T
    return 0.5 * (V + V.T)


def ljung_box(racf, n: int, m: int, lag_max: int | None = None):
    """Portmanteau ``Q_L = n(n+2) sum r_k^2/(n-k)`` and its chi2(L-m) p-value.

    Returns ``(Q, df, pvalue)``.
    """
    r = np.asarray(racf, dtype=float)
    L = r.size if lag_max is None else int(lag_max)
    r = r[:L]
    df = L - int(m)
    if df < 1:
        raise DegreesOfFreedomNonPositive(f"L={L} must exceed the parameter count m={m}")
    k = np.arange(1, L + 1)
    Q = float(n * (n + 2) * np.sum(r * r / (n - k)))
    return Q, df, float(stats.chi2.sf(Q, df))


def bonferroni_multiplier(alpha: float, m: int) -> float:
    """``Phi^{-1}(1 - alpha/(2m))``."""
    if not 0 < alpha < 1:
        raise InvalidConfig(f"alpha must lie in (0, 1), got {alpha}")
    return float(stats.norm.ppf(1.0 - alpha / (2.0 * m)))


def simultaneous_bands(variances, n: int, alpha: float = 0.05, m: int = 1) -> np.ndarray:
    """Half-widths ``Phi^{-1}(1-alpha/(2m)) sqrt(v_kk / n)``.

    ``variances`` may be the full covariance matrix or its diagonal.
    """
    v = np.asarray(variances, dtype=float)
    if v.ndim == 2:
        v = np.diag(v)
    return bonferroni_multiplier(alpha, m) * np.sqrt(np.clip(v, 0.0, None) / n)


@dataclass(frozen=True)
class DiagnosticsReport:
    lag_max: int
    racf: np.ndarray
    Vr: np.ndarray
    stderr: np.ndarray
    multiplier: float
    half_width: np.ndarray
    Q: float
    df: int
    pvalue: float
    n: int
    m: int
    alpha: float

    @property
    def violations(self) -> np.ndarray:
        """Lags (1-based) whose residual autocorrelation leaves the band."""
        return np.flatnonzero(np.abs(self.racf) > self.half_width) + 1

    def portmanteau_table(self, lags=None):
        """``[(L, Q_L, df, p)]`` for each requested L (default: every lag > m)."""
        if lags is None:
            lags = range(self.m + 1, self.lag_max + 1)
        return [(L, *ljung_box(self.racf, self.n, self.m, L)) for L in lags]


def diagnose(series, model: FittedModel, lag_max: int | None = None,
             alpha: float = 0.05) -> DiagnosticsReport:
    """Residual ACF, its asymptotic covariance, Q_L, and Bonferroni bands.

    The Bonferroni divisor is the model's parameter count m.
    """
    if not isinstance(series, TimeSeries):
        series = center(series)
    res = residuals(series, model)
    n = res.n
    if lag_max is None:
        lag_max = max(model.m + 1, min(n // 4, max(20, 2 * model.p)))
    L = int(lag_max)
    r = residual_acf(res, L)
    V = residual_covariance(model, L)
    Q, df, pv = ljung_box(r, n, model.m, L)
    mult = bonferroni_multiplier(alpha, model.m)
    return DiagnosticsReport(
        lag_max=L, racf=r, Vr=V, stderr=np.sqrt(np.clip(np.diag(V), 0, None) / n),
        multiplier=mult, half_width=simultaneous_bands(V, n, alpha, model.m),
        Q=Q, df=df, pvalue=pv, n=n, m=model.m, alpha=alpha)
