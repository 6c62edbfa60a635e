"""Exact Gaussian likelihood of ARzeta models and its maximization.

For a mean-corrected series the exact quadratic form is
``z' Gamma_n^{-1} z = S(zeta) / sigma^2`` with ``S = beta' D beta``,
``beta = (-1, phi_1, .., phi_p)``, and ``D`` the (p+1) x (p+1) matrix of
end-corrected lagged cross products.  The determinant of the normalized
covariance is ``g_p = prod (1 - zeta_i^2)^(-i)`` over the active lags, so
the concentrated log-likelihood

    L_c(zeta) = -(n/2) log(S/n) - (1/2) log g_p

costs O(p^2) per evaluation once ``D`` is built.  No 2*pi or n/2 constants
are included; model comparisons use differences.

The ``D`` form is exact only when ``n >= 2p``.  Shorter series use the
prediction-error decomposition ``z_{1:p}' M_p^{-1} z_{1:p} + sum a_t^2``
directly, which is cheap at that size.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import kernels
from .core import (
    BoundaryConvergence,
    BoundaryParameter,
    FittedModel,
    NoConvergence,
    NonPositiveS,
    NonStationary,
    PhiVector,
    SeriesShorterThanOrder,
    SubsetSpec,
    TimeSeries,
    ZetaVector,
    center,
    validate_subset,
)
from .inference import siddiqui_inverse, zeta_information
from .pacf import burg_pacf, phi_to_zeta

logger = logging.getLogger(__name__)

__all__ = [
    "SumOfSquaresKernel",
    "LikelihoodValue",
    "build_kernel",
    "gp_determinant",
    "log_gp",
    "concentrated_loglik",
    "loglik_gradient",
    "fit_mle",
    "PhiSubsetFit",
    "fit_phi_subset",
    "phi_loglik",
]

#: Box constraint used by the optimizer.
BOUND = 1.0 - 1e-7
#: Estimates closer than this to +-1 are reported as boundary solutions.
BOUNDARY_REPORT = 1.0 - 1e-6


@dataclass(frozen=True)
class SumOfSquaresKernel:
    """``D[a, b] = sum_{u=1+a}^{n-b} z_u z_{u+b-a}`` for lags 0 <= a <= b <= p.

    A kernel built for order p serves any order up to p, since entries do
    not depend on p.  ``z`` keeps the series when ``n < 2p``, where the
    ``D`` form is not exact.
    """

    D: np.ndarray
    n: int
    p: int
    z: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        D = np.array(self.D, dtype=float)
        D.setflags(write=False)
        object.__setattr__(self, "D", D)
        if self.n < 2 * self.p and self.z is None:
            raise ValueError("a kernel with n < 2p needs the series values")

    def sum_of_squares(self, phi) -> float:
        """``S = sigma^2 z' Gamma_n^{-1} z`` at AR coefficients ``phi``."""
        phi = np.asarray(phi, dtype=float)
        p = phi.size
        D = self.sub(p)
        if self.n >= 2 * p:
            beta = np.concatenate(([-1.0], phi))
            return float(beta @ D @ beta)
        head = self.z[:p]
        tail = kernels.ar_residuals(self.z, phi)[p:]
        return float(head @ siddiqui_inverse(phi) @ head + tail @ tail)

    def sub(self, p: int) -> np.ndarray:
        if p > self.p:
            raise SeriesShorterThanOrder(
                f"kernel built for order {self.p}, model needs {p}")
        return self.D[: p + 1, : p + 1]


@dataclass(frozen=True)
class LikelihoodValue:
    half_log_gp: float
    S: float
    sigma2: float
    loglik: float


def _centered(series) -> TimeSeries:
    if isinstance(series, TimeSeries) and series.centered:
        return series
    return center(series)


def build_kernel(series, p: int) -> SumOfSquaresKernel:
    """Sum-of-squares matrix for orders up to ``p``; O(n p) once."""
    ts = _centered(series)
    p = int(p)
    if p < 0:
        raise ValueError("order must be non-negative")
    if ts.n <= p:
        raise SeriesShorterThanOrder(f"series of length {ts.n} is too short for order {p}")
    z = ts.values if ts.n < 2 * p else None
    return SumOfSquaresKernel(kernels.sos_kernel(ts.values, p), ts.n, p, z)


def _check_interior(vals):
    if np.any(np.abs(vals) >= 1.0):
        raise BoundaryParameter(f"partial autocorrelations on or outside +-1: {vals}")


def log_gp(zeta: ZetaVector) -> float:
    vals = zeta.values
    _check_interior(vals)
    lags = np.asarray(zeta.spec.lags, dtype=float)
    return float(-np.sum(lags * np.log1p(-vals * vals)))


def gp_determinant(zeta: ZetaVector) -> float:
    """``prod_{i in lags} (1 - zeta_i^2)^(-i)``."""
    return float(np.exp(log_gp(zeta)))


def concentrated_loglik(zeta: ZetaVector, kernel: SumOfSquaresKernel) -> LikelihoodValue:
    p = zeta.spec.p
    if kernel.n >= 2 * p:
        S = kernels.sos_value(zeta.full(), kernel.sub(p))
    else:
        S = kernel.sum_of_squares(kernels.dl_forward(zeta.full()))
    if not S > 0:
        raise NonPositiveS(f"sum of squares is {S}; numerical breakdown")
    hl = 0.5 * log_gp(zeta)
    sigma2 = S / kernel.n
    return LikelihoodValue(hl, S, sigma2, -0.5 * kernel.n * np.log(sigma2) - hl)


def _sos_grad(full, idx, kernel):
    """S and its derivatives at the active lags."""
    p = full.size
    if kernel.n >= 2 * p:
        S, g = kernels.sos_value_grad(full, kernel.sub(p))
        return S, g[idx]

    def sos(v):
        return kernel.sum_of_squares(kernels.dl_forward(v))

    g = np.empty(idx.size)
    for j, i in enumerate(idx):
        h = min(1e-6 * max(1.0, abs(full[i])), 0.5 * (1.0 - abs(full[i])))
        e = np.zeros(p)
        e[i] = h
        g[j] = (sos(full + e) - sos(full - e)) / (2 * h)
    return sos(full), g


def _objective(x, spec, kernel):
    """Value and gradient of L_c at the active-lag vector x."""
    full = np.zeros(spec.p)
    idx = spec.index
    full[idx] = x
    n = kernel.n
    S, gS = _sos_grad(full, idx, kernel)
    if not S > 0:
        raise NonPositiveS(f"sum of squares is {S}; numerical breakdown")
    lags = np.asarray(spec.lags, dtype=float)
    one_m = 1.0 - x * x
    val = -0.5 * n * np.log(S / n) + 0.5 * np.sum(lags * np.log(one_m))
    grad = -0.5 * n * gS / S - lags * x / one_m
    return val, grad


def loglik_gradient(zeta: ZetaVector, kernel: SumOfSquaresKernel,
                    method: str = "analytic") -> np.ndarray:
    """Gradient of ``L_c`` with respect to the active partial autocorrelations.

    ``analytic`` back-propagates through the Durbin-Levinson recursion;
    ``numeric`` uses central differences with step ``1e-6*max(1,|zeta|)``.
    """
    spec = zeta.spec
    kernel.sub(spec.p)  # order check
    x = np.array(zeta.values)
    if method == "analytic":
        return _objective(x, spec, kernel)[1]
    if method != "numeric":
        raise ValueError(f"unknown gradient method {method!r}")
    g = np.zeros_like(x)
    for i in range(x.size):
        h = 1e-6 * max(1.0, abs(x[i]))
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (_objective(up, spec, kernel)[0]
                - _objective(dn, spec, kernel)[0]) / (2 * h)
    return g


def burg_init(ts: TimeSeries, spec: SubsetSpec) -> np.ndarray:
    pac = burg_pacf(ts, spec.p).values[spec.index]
    return np.clip(pac, -BOUND, BOUND)


def fit_mle(series, spec, init=None, kernel: SumOfSquaresKernel | None = None,
            gradient: str = "analytic", max_iter: int = 2000) -> FittedModel:
    """Exact maximum likelihood estimates for an ARzeta model.

    Parameters
    ----------
    series : array_like or TimeSeries
        Observations; centered with the sample mean if not already.
    spec : SubsetSpec or sequence of int
        Active lags.
    init : ZetaVector or array_like, optional
        Starting values; Burg partial autocorrelations by default.
    kernel : SumOfSquaresKernel, optional
        Pre-built kernel of order >= p, e.g. shared across candidate models.
    gradient : {"analytic", "numeric"}

    Raises
    ------
    NoConvergence
        Iteration limit reached.
    BoundaryConvergence
        The maximum lies on the boundary of the cube even after the
        ``tanh`` reparameterized retry.
    """
    ts = _centered(series)
    if not isinstance(spec, SubsetSpec):
        spec = validate_subset(spec)
    if ts.n <= spec.p:
        raise SeriesShorterThanOrder(
            f"series of length {ts.n} is too short for {spec}")
    if kernel is None:
        kernel = build_kernel(ts, spec.p)
    kernel.sub(spec.p)  # order check
    n = kernel.n

    if init is None:
        x0 = burg_init(ts, spec)
    else:
        x0 = np.asarray(init.values if isinstance(init, ZetaVector) else init, float)
        x0 = np.clip(x0, -BOUND, BOUND)
    f0 = _objective(x0, spec, kernel)[0]

    def fun(x):
        v, g = _objective(x, spec, kernel)
        return -v / n, -g / n

    if gradient == "numeric":
        def fun(x):  # noqa: F811
            v = _objective(x, spec, kernel)[0]
            z = ZetaVector(spec, np.clip(x, -BOUND, BOUND))
            return -v / n, -loglik_gradient(z, kernel, "numeric") / n

    res = optimize.minimize(
        fun, x0, jac=True, method="L-BFGS-B",
        bounds=[(-BOUND, BOUND)] * spec.m,
        options={"maxiter": max_iter, "ftol": 1e-15, "gtol": 1e-10, "maxcor": 20},
    )
    x = np.clip(res.x, -BOUND, BOUND)
    n_iter = int(res.nit)
    message = str(res.message)
    if res.status == 1:
        raise NoConvergence(f"{spec}: iteration limit {max_iter} reached")

    if np.any(np.abs(x) >= BOUNDARY_REPORT):
        logger.info("%s hit the box bound; retrying with tanh reparameterization", spec)
        eta0 = np.arctanh(np.clip(x, -0.99, 0.99))

        def fun_eta(eta):
            zz = np.tanh(eta)
            if np.any(np.abs(zz) >= 1.0):
                return np.inf, np.zeros_like(eta)
            v, g = _objective(zz, spec, kernel)
            return -v / n, -g * (1.0 - zz * zz) / n

        res2 = optimize.minimize(fun_eta, eta0, jac=True, method="BFGS",
                                 options={"maxiter": max_iter, "gtol": 1e-10})
        x2 = np.tanh(res2.x)
        n_iter += int(res2.nit)
        if np.all(np.abs(x2) < BOUNDARY_REPORT):
            x = x2
            message = "converged after tanh reparameterization"
        else:
            val = _objective(np.clip(x, -BOUND, BOUND), spec, kernel)[0]
            model = _assemble(ts, spec, x, val, kernel, False, n_iter,
                              "boundary", with_info=False)
            raise BoundaryConvergence(
                f"{spec}: estimate pinned at the boundary {x.tolist()}", model)

    val = _objective(x, spec, kernel)[0]
    if val < f0:  # never return worse than the start
        x, val = x0, f0
    return _assemble(ts, spec, x, val, kernel, True, n_iter, message)


def _assemble(ts, spec, x, val, kernel, converged, n_iter, message, with_info=True):
    zeta = ZetaVector(spec, np.clip(x, -BOUND, BOUND))
    lv = concentrated_loglik(zeta, kernel)
    if with_info:
        info, stderr = zeta_information(zeta, kernel.n)
    else:
        info, stderr = np.full((spec.m, spec.m), np.nan), np.full(spec.m, np.nan)
    return FittedModel(
        spec=spec, zeta=zeta, phi=PhiVector(kernels.dl_forward(zeta.full())),
        mean=ts.mean, sigma2=lv.sigma2, loglik=lv.loglik, n=kernel.n,
        info=info, stderr=stderr, converged=converged, n_iter=n_iter,
        message=message)


# ARphi comparator -----------------------------------------------------------

@dataclass(frozen=True)
class PhiSubsetFit:
    """Classical subset AR fit (zeros in phi-space), used for comparison."""

    lags: tuple
    phi: np.ndarray
    mean: float
    sigma2: float
    loglik: float
    n: int

    @property
    def m(self) -> int:
        return len(self.lags)

    @property
    def bic(self) -> float:
        return -2.0 * self.loglik + self.m * np.log(self.n)

    @property
    def aic(self) -> float:
        return -2.0 * self.loglik + 2.0 * self.m


def phi_loglik(phi, kernel: SumOfSquaresKernel) -> LikelihoodValue:
    """Exact concentrated log-likelihood at arbitrary stationary AR coefficients."""
    vals = phi.values if isinstance(phi, PhiVector) else np.asarray(phi, float)
    p = vals.size
    zeta = phi_to_zeta(vals)
    S = kernel.sum_of_squares(vals)
    if not S > 0:
        raise NonPositiveS(f"sum of squares is {S}; numerical breakdown")
    hl = -0.5 * float(np.sum(np.arange(1, p + 1) * np.log1p(-zeta * zeta)))
    sigma2 = S / kernel.n
    return LikelihoodValue(hl, S, sigma2, -0.5 * kernel.n * np.log(sigma2) - hl)


def fit_phi_subset(series, lags, exact: bool = True) -> PhiSubsetFit:
    """ARphi(i_1..i_m): conditional least squares, optionally refined to
    the exact likelihood maximum over the same free coefficients."""
    ts = _centered(series)
    lags = validate_subset(lags).lags
    p = lags[-1]
    z = ts.values
    n = z.size
    X = np.column_stack([z[p - k: n - k] for k in lags])
    coef, *_ = np.linalg.lstsq(X, z[p:], rcond=None)
    kernel = build_kernel(ts, p)
    idx = np.asarray(lags) - 1

    def embed(c):
        full = np.zeros(p)
        full[idx] = c
        return full

    def negll(c):
        try:
            return -phi_loglik(embed(c), kernel).loglik / n
        except (NonStationary, NonPositiveS):
            return np.inf

    if not np.isfinite(negll(coef)):
        coef = coef * 0.5
    if exact and np.isfinite(negll(coef)):
        res = optimize.minimize(negll, coef, method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20000})
        if res.fun <= negll(coef):
            coef = res.x
    lv = phi_loglik(embed(coef), kernel)
    return PhiSubsetFit(lags=lags, phi=embed(coef), mean=ts.mean, sigma2=lv.sigma2,
                        loglik=lv.loglik, n=n)
