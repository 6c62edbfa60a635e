"""Partial autocorrelations: the Durbin-Levinson map and its inverse, Burg
and Yule-Walker estimation, and PACF-plot data for identification.

The map from partial autocorrelations ``zeta`` to AR coefficients ``phi``
runs the Durbin-Levinson order recursion

    phi_{j,k+1} = phi_{j,k} - zeta_{k+1} phi_{k+1-j,k},   j = 1..k

with ``phi_{k,k} = zeta_k``.  A subset model fixes ``zeta_k = 0`` at every
lag not in the subset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    DegenerateSeries,
    InvalidConfig,
    NonStationary,
    PhiVector,
    SubsetSpec,
    TimeSeries,
    ZetaVector,
    center,
)

__all__ = [
    "PacfTable",
    "zeta_to_phi",
    "phi_to_zeta",
    "durbin_levinson_table",
    "burg_pacf",
    "yule_walker_pacf",
    "pacf_stderr",
    "estimate_pacf",
    "default_lag_max",
]


def zeta_to_phi(zeta) -> PhiVector:
    """AR coefficients implied by a (subset) partial autocorrelation vector.

    Parameters
    ----------
    zeta : ZetaVector or array_like
        A ZetaVector is embedded at its lags with zeros elsewhere; a plain
        array is taken as the full vector ``zeta_1..zeta_p``.

    Examples
    --------
    >>> from subsetar.core import SubsetSpec, ZetaVector
    >>> zeta_to_phi(ZetaVector(SubsetSpec((1, 2)), [0.5, 0.4])).values
    array([0.3, 0.4])
    """
    full = zeta.full() if isinstance(zeta, ZetaVector) else np.asarray(zeta, float)
    return PhiVector(kernels.dl_forward(full))


def durbin_levinson_table(zeta) -> np.ndarray:
    """Intermediate coefficients; row ``k-1`` holds ``phi_{k,1..k}``."""
    full = zeta.full() if isinstance(zeta, ZetaVector) else np.asarray(zeta, float)
    return kernels.dl_table(full)


def phi_to_zeta(phi) -> np.ndarray:
    """Full partial autocorrelation vector of a stationary AR(p).

    Raises
    ------
    NonStationary
        If a back-recursion step produces ``|zeta_k| >= 1`` or a vanishing
        ``1 - zeta_k**2``.
    """
    vals = phi.values if isinstance(phi, PhiVector) else np.asarray(phi, float)
    zeta, ok = kernels.dl_backward(vals)
    if not ok:
        bad = int(np.flatnonzero(np.abs(zeta) >= 1.0 - 1e-7)[-1]) + 1 \
            if np.any(np.abs(zeta) >= 1.0 - 1e-7) else None
        raise NonStationary(
            "AR coefficients are outside the stationary region"
            + (f" (partial autocorrelation at lag {bad} is {zeta[bad - 1]:.6g})"
               if bad else ""))
    return zeta


@dataclass(frozen=True)
class PacfTable:
    """Estimated partial autocorrelations ``phi_hat_{k,k}``, k = 1..K.

    ``variances[k]`` is the order-k innovation variance estimate carried
    along by the estimator (``variances[0]`` is the lag-0 sample moment).
    ``stderr`` is filled by :func:`pacf_stderr`.
    """

    values: np.ndarray
    n: int
    method: str = "burg"
    variances: np.ndarray | None = None
    stderr: np.ndarray | None = None

    @property
    def lag_max(self) -> int:
        return self.values.size

    @property
    def lags(self) -> np.ndarray:
        return np.arange(1, self.values.size + 1)

    def bands(self, z: float = 1.96):
        """Lower and upper plot bands ``value -/+ z * stderr``."""
        if self.stderr is None:
            raise ValueError("standard errors have not been computed")
        return self.values - z * self.stderr, self.values + z * self.stderr


def default_lag_max(n: int) -> int:
    return max(1, min(n // 4, 40))


def _prepare(series, lag_max):
    ts = series if isinstance(series, TimeSeries) and series.centered else center(series)
    if lag_max is None:
        lag_max = default_lag_max(ts.n)
    lag_max = int(lag_max)
    if not 1 <= lag_max < ts.n:
        raise InvalidConfig(f"lag_max must satisfy 1 <= K < n={ts.n}, got {lag_max}")
    return ts, lag_max


def burg_pacf(series, lag_max=None) -> PacfTable:
    """Burg estimates of the partial autocorrelations.

    Each reflection coefficient is the harmonic-mean estimate
    ``2 sum(f_t b_{t-1}) / sum(f_t^2 + b_{t-1}^2)`` and so lies in [-1, 1].
    Raises DegenerateSeries if the forward/backward errors vanish.
    """
    ts, lag_max = _prepare(series, lag_max)
    vals, var, bad = kernels.burg(ts.values, lag_max)
    if bad:
        raise DegenerateSeries(
            f"prediction errors vanish at stage {bad}; series is degenerate")
    return PacfTable(values=vals, n=ts.n, method="burg", variances=var)


def sample_acvf(z: np.ndarray, nlags: int) -> np.ndarray:
    """Biased (divisor n) sample autocovariances at lags 0..nlags."""
    n = z.size
    return np.array([np.dot(z[: n - k], z[k:]) / n for k in range(nlags + 1)])


def yule_walker_pacf(series, lag_max=None) -> PacfTable:
    """Partial autocorrelations from the sample autocorrelations."""
    ts, lag_max = _prepare(series, lag_max)
    c = sample_acvf(ts.values, lag_max)
    if not c[0] > 0:
        raise DegenerateSeries("series has zero variance")
    vals = np.zeros(lag_max)
    var = np.zeros(lag_max + 1)
    var[0] = c[0]
    phi = np.zeros(0)
    for k in range(1, lag_max + 1):
        num = c[k] - np.dot(phi, c[k - 1:0:-1])
        kap = num / var[k - 1]
        phi = np.concatenate((phi - kap * phi[::-1], [kap]))
        vals[k - 1] = kap
        var[k] = var[k - 1] * (1.0 - kap * kap)
    return PacfTable(values=vals, n=ts.n, method="yw", variances=var)


def pacf_stderr(pacf: PacfTable, n: int | None = None) -> np.ndarray:
    """Standard errors of the estimated partial autocorrelations.

    Evaluated from the information matrix of the full ARzeta(1..K) model
    at the estimates: ``sqrt(diag(I^{-1}) / n)``.
    """
    from .inference import zeta_information

    n = pacf.n if n is None else int(n)
    K = pacf.lag_max
    vals = np.clip(pacf.values, -1.0 + 1e-9, 1.0 - 1e-9)
    spec = SubsetSpec.full(K)
    _, stderr = zeta_information(ZetaVector(spec, vals), n)
    return stderr


def estimate_pacf(series, lag_max=None, method: str = "burg") -> PacfTable:
    """PACF table with standard errors attached, ready for plotting."""
    if method == "burg":
        tab = burg_pacf(series, lag_max)
    elif method in ("yw", "yule-walker"):
        tab = yule_walker_pacf(series, lag_max)
    else:
        raise InvalidConfig(f"unknown PACF method {method!r}")
    return PacfTable(values=tab.values, n=tab.n, method=tab.method,
                     variances=tab.variances, stderr=pacf_stderr(tab))
