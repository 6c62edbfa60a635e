"""Domain types and errors shared across the package.

Every type here is an immutable value: numpy payloads are copied on
construction and flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

#: ZetaVector rejects |zeta| >= 1 - ZETA_INTERIOR_TOL.
ZETA_INTERIOR_TOL = 1e-10


class SubsetARError(Exception):
    """Base class for all package errors.

    ``code`` is a stable identifier used as the CLI error prefix.
    """

    code = "E000"


class EmptyLags(SubsetARError, ValueError):
    code = "E101"


class NonPositiveLag(SubsetARError, ValueError):
    code = "E102"


class TooShort(SubsetARError, ValueError):
    code = "E103"


class NonFiniteValue(SubsetARError, ValueError):
    code = "E104"


class NonStationary(SubsetARError, ValueError):
    code = "E201"


class DegenerateSeries(SubsetARError, ValueError):
    code = "E202"


class BoundaryParameter(SubsetARError, ValueError):
    code = "E203"


class SeriesShorterThanOrder(SubsetARError, ValueError):
    code = "E301"


class NonPositiveS(SubsetARError, ArithmeticError):
    code = "E302"


class NoConvergence(SubsetARError, RuntimeError):
    code = "E303"


class BoundaryConvergence(SubsetARError, RuntimeError):
    """The optimum sits on the edge of the admissible cube.

    The offending fit is attached as ``model`` so callers can inspect it.
    """

    code = "E304"

    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model


class SingularInformation(SubsetARError, ArithmeticError):
    code = "E401"


class LagBeyondTable(SubsetARError, ValueError):
    code = "E501"


class InvalidConfig(SubsetARError, ValueError):
    code = "E502"


class ZeroVariance(SubsetARError, ValueError):
    code = "E601"


class DegreesOfFreedomNonPositive(SubsetARError, ValueError):
    code = "E602"


class OrderExceedsLength(SubsetARError, ValueError):
    code = "E603"


class HistoryTooShort(SubsetARError, ValueError):
    code = "E701"


class NegativeBase(SubsetARError, ValueError):
    code = "E702"


class ParseError(SubsetARError, ValueError):
    code = "E801"


class IoError(SubsetARError, OSError):
    code = "E800"


class DatasetUnavailable(SubsetARError, LookupError):
    code = "E802"


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SubsetSpec:
    """Ordered lag set ``i_1 < ... < i_m`` of an ARzeta model."""

    lags: tuple

    def __post_init__(self):
        lags = tuple(int(k) for k in self.lags)
        if not lags:
            raise EmptyLags("subset must contain at least one lag")
        if any(k < 1 for k in lags):
            raise NonPositiveLag(f"lags must be >= 1, got {list(lags)}")
        if any(b <= a for a, b in zip(lags, lags[1:])):
            raise ValueError(f"lags must be strictly increasing, got {list(lags)}")
        object.__setattr__(self, "lags", lags)

    @property
    def p(self) -> int:
        return self.lags[-1]

    @property
    def m(self) -> int:
        return len(self.lags)

    @property
    def index(self) -> np.ndarray:
        """Zero-based positions of the active lags in a length-p vector."""
        return np.asarray(self.lags, dtype=np.intp) - 1

    @classmethod
    def full(cls, p: int) -> "SubsetSpec":
        return cls(tuple(range(1, p + 1)))

    def __str__(self):
        return "ARzeta(" + ",".join(str(k) for k in self.lags) + ")"


def validate_subset(lags: Sequence[int]) -> SubsetSpec:
    """Canonicalize a lag sequence: sorted, deduplicated, all positive.

    >>> validate_subset([9, 1]).lags
    (1, 9)
    """
    try:
        raw = list(lags)
    except TypeError:
        raise EmptyLags("lags must be a sequence of integers") from None
    if not raw:
        raise EmptyLags("subset must contain at least one lag")
    out = []
    for k in raw:
        if isinstance(k, bool) or int(k) != k:
            raise NonPositiveLag(f"lag {k!r} is not an integer")
        if k < 1:
            raise NonPositiveLag(f"lag {k} is not positive")
        out.append(int(k))
    return SubsetSpec(tuple(sorted(set(out))))


@dataclass(frozen=True)
class TimeSeries:
    """Real observations, optionally mean-corrected.

    ``values`` holds the (possibly centered) data and ``mean`` the value
    that was subtracted, so ``values + mean`` recovers the raw series.
    """

    values: np.ndarray
    mean: float = 0.0
    centered: bool = False

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.ndim != 1:
            raise ValueError("series must be one-dimensional")
        if vals.size < 2:
            raise TooShort(f"series needs at least 2 values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise NonFiniteValue(f"non-finite value at position {bad}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "mean", float(self.mean))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def raw(self) -> np.ndarray:
        return self.values + self.mean

    def __len__(self):
        return self.values.size


def center(series) -> TimeSeries:
    """Subtract the sample mean and remember it.

    Parameters
    ----------
    series : array_like or TimeSeries
        Raw observations. A TimeSeries is re-centered from its raw values.
    """
    if isinstance(series, TimeSeries):
        if series.centered:
            return series
        series = series.raw
    z = np.asarray(series, dtype=float)
    if z.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if z.size < 2:
        raise TooShort(f"series needs at least 2 values, got {z.size}")
    if not np.all(np.isfinite(z)):
        bad = int(np.flatnonzero(~np.isfinite(z))[0])
        raise NonFiniteValue(f"non-finite value at position {bad}")
    mu = float(np.mean(z))
    return TimeSeries(z - mu, mean=mu, centered=True)


@dataclass(frozen=True)
class ZetaVector:
    """Partial autocorrelations at the active lags of ``spec``."""

    spec: SubsetSpec
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.spec.m,):
            raise ValueError(
                f"{self.spec} needs {self.spec.m} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise NonFiniteValue("zeta values must be finite")
        if np.any(np.abs(vals) >= 1.0 - ZETA_INTERIOR_TOL):
            raise BoundaryParameter(
                f"partial autocorrelations must lie inside (-1, 1): {vals.tolist()}")
        object.__setattr__(self, "values", vals)

    def full(self) -> np.ndarray:
        """Length-p vector with zeros at the inactive lags."""
        out = np.zeros(self.spec.p)
        out[self.spec.index] = self.values
        return out


@dataclass(frozen=True)
class PhiVector:
    """AR coefficients ``phi_1..phi_p`` with ``phi(B) = 1 - sum phi_j B^j``."""

    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.ndim != 1:
            raise ValueError("phi must be one-dimensional")
        object.__setattr__(self, "values", vals)

    @property
    def order(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class FittedModel:
    """Result of an exact maximum likelihood fit."""

    spec: SubsetSpec
    zeta: ZetaVector
    phi: PhiVector
    mean: float
    sigma2: float
    loglik: float
    n: int
    info: np.ndarray
    stderr: np.ndarray
    converged: bool = True
    n_iter: int = 0
    message: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise NonPositiveS(f"sigma2 must be positive, got {self.sigma2}")
        object.__setattr__(self, "info", _frozen(self.info))
        object.__setattr__(self, "stderr", _frozen(self.stderr))

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def aic(self) -> float:
        return -2.0 * self.loglik + 2.0 * self.m

    @property
    def bic(self) -> float:
        return -2.0 * self.loglik + self.m * np.log(self.n)
