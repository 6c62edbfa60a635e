"""Subset selection by approximate information criteria on Burg PACFs.

The innovation variance of ARzeta(i_1..i_m) is approximately
``c_0 prod (1 - phi_hat_{k,k}^2)`` over the active lags, which turns the
BIC into

    BIC_zeta = n log prod_{k in lags} (1 - phi_hat_{k,k}^2) + m log n.

Sorting the |PACF| values in decreasing order and scanning prefixes of
length 1..M finds the minimum in polynomial time.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    InvalidConfig,
    LagBeyondTable,
    SubsetARError,
    SubsetSpec,
    TimeSeries,
    center,
    validate_subset,
)
from .likelihood import build_kernel, fit_mle
from .pacf import PacfTable, burg_pacf

logger = logging.getLogger(__name__)

__all__ = [
    "CRITERIA",
    "CandidateModel",
    "SelectionConfig",
    "penalty",
    "score_subset",
    "select_models",
    "rescore_exact",
]

CRITERIA = ("bic", "aic", "aicc", "hq")


def penalty(criterion: str, m: int, n: int) -> float:
    """Complexity term added to ``-2 log L`` (or its PACF approximation)."""
    if criterion == "bic":
        return m * np.log(n)
    if criterion == "aic":
        return 2.0 * m
    if criterion == "aicc":
        # Hurvich-Tsai small-sample correction of the AIC
        return 2.0 * m + 2.0 * m * (m + 1) / (n - m - 1)
    if criterion == "hq":
        return 2.0 * m * np.log(np.log(n))
    raise InvalidConfig(f"unknown criterion {criterion!r}; choose from {CRITERIA}")


@dataclass(frozen=True)
class CandidateModel:
    """A scored subset.

    ``approximate`` is True for PACF-based scores and False once the
    candidate has been refitted by exact maximum likelihood, in which case
    ``loglik``, ``aic`` and ``bic`` are filled in.
    """

    spec: SubsetSpec
    score: float
    criterion: str = "bic"
    approximate: bool = True
    order: tuple = ()
    loglik: float | None = None
    aic: float | None = None
    bic: float | None = None
    model: object = field(default=None, compare=False, repr=False)
    error: str | None = None

    @property
    def m(self) -> int:
        return self.spec.m


@dataclass(frozen=True)
class SelectionConfig:
    """L: maximum lag, M: maximum parameter count, k: models retained."""

    max_order: int
    max_params: int
    top: int = 5
    criterion: str = "bic"
    exhaustive: bool = False

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise InvalidConfig(f"unknown criterion {self.criterion!r}")
        if not 1 <= self.max_params <= self.max_order:
            raise InvalidConfig(
                f"need 1 <= M <= L, got M={self.max_params}, L={self.max_order}")
        if self.top < 1:
            raise InvalidConfig("top must be >= 1")
        if self.exhaustive and self.max_order > 15:
            raise InvalidConfig("exhaustive search is limited to L <= 15")

    def validate_for(self, n: int):
        if self.max_order >= n:
            raise InvalidConfig(f"maximum order L={self.max_order} must be < n={n}")


def score_subset(pacf, lags, n: int | None = None, criterion: str = "bic") -> float:
    """Approximate criterion of the ARzeta model on ``lags``.

    ``pacf`` is a PacfTable or a plain array of ``phi_hat_{k,k}``, k=1..K.
    An empty ``lags`` scores the null model, 0.
    """
    vals = pacf.values if isinstance(pacf, PacfTable) else np.asarray(pacf, float)
    if n is None:
        if not isinstance(pacf, PacfTable):
            raise ValueError("n is required when pacf is a plain array")
        n = pacf.n
    lags = list(getattr(lags, "lags", lags))
    if not lags:
        return 0.0
    lags = validate_subset(lags).lags
    if lags[-1] > vals.size:
        raise LagBeyondTable(f"lag {lags[-1]} exceeds the PACF table (K={vals.size})")
    sel = vals[np.asarray(lags) - 1]
    return float(n * np.sum(np.log1p(-sel * sel)) + penalty(criterion, len(lags), n))


def _sorted_lags(vals: np.ndarray) -> list:
    # descending |pacf|, smaller lag first among ties
    return sorted(range(1, vals.size + 1), key=lambda k: (-abs(vals[k - 1]), k))


def select_models(series, config: SelectionConfig, pacf: PacfTable | None = None):
    """Rank subsets by the approximate criterion.

    Returns the ``config.top`` best CandidateModels in increasing score
    order.  Each candidate's ``order`` keeps the lags in the sequence they
    entered the prefix scan; ``spec`` is the canonical ascending form.
    """
    ts = series if isinstance(series, TimeSeries) and series.centered else center(series)
    config.validate_for(ts.n)
    if pacf is None:
        pacf = burg_pacf(ts, config.max_order)
    vals = pacf.values[: config.max_order]
    n = ts.n
    cands = []
    if config.exhaustive:
        for m in range(1, config.max_params + 1):
            for combo in itertools.combinations(range(1, config.max_order + 1), m):
                s = score_subset(vals, combo, n, config.criterion)
                cands.append(CandidateModel(SubsetSpec(combo), s, config.criterion,
                                            order=combo))
    else:
        ranked = _sorted_lags(vals)
        logp = np.log1p(-vals * vals)
        acc = 0.0
        for m in range(1, config.max_params + 1):
            acc += logp[ranked[m - 1] - 1]
            prefix = tuple(ranked[:m])
            s = float(n * acc + penalty(config.criterion, m, n))
            cands.append(CandidateModel(SubsetSpec(tuple(sorted(prefix))), s,
                                        config.criterion, order=prefix))
    cands.sort(key=lambda c: (c.score, c.m))
    return cands[: config.top]


def rescore_exact(series, candidates, criterion: str | None = None):
    """Refit candidates by exact maximum likelihood and re-rank.

    ``AIC = -2 L_c + 2m`` and ``BIC = -2 L_c + m log n`` with m the number
    of partial autocorrelations (mean and variance not counted).  A failed
    fit is kept at the end of the list with its error message.
    """
    ts = series if isinstance(series, TimeSeries) and series.centered else center(series)
    candidates = list(candidates)
    if not candidates:
        return []
    crit = criterion or candidates[0].criterion
    pmax = max(c.spec.p for c in candidates)
    kernel = build_kernel(ts, pmax)
    n = ts.n
    out = []
    for c in candidates:
        try:
            fit = fit_mle(ts, c.spec, kernel=kernel)
        except SubsetARError as exc:
            logger.warning("exact fit of %s failed: %s", c.spec, exc)
            out.append(replace(c, approximate=False, score=np.inf, error=str(exc)))
            continue
        ll = fit.loglik
        out.append(replace(
            c, approximate=False, criterion=crit, model=fit, loglik=ll,
            aic=-2 * ll + 2 * c.m, bic=-2 * ll + c.m * np.log(n),
            score=-2 * ll + penalty(crit, c.m, n)))
    out.sort(key=lambda c: (c.score, c.m))
    return out
