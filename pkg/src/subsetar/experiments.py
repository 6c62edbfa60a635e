"""Replication studies for the large-sample results.

Each study spawns independent child seeds from one ``SeedSequence`` so the
outcome depends only on ``seed``, not on worker count or scheduling.
``SUBSETAR_THREADS`` caps the number of worker processes.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import kernels
from .core import FittedModel, PhiVector, SubsetARError, SubsetSpec, ZetaVector
from .diagnostics import ljung_box, residual_acf, residual_covariance, residuals
from .forecast import simulate
from .inference import information_inverse, zeta_information
from .likelihood import fit_mle


def worker_count() -> int:
    env = os.environ.get("SUBSETAR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_replications(func, reps: int, seed, workers: int | None = None) -> list:
    """``[func(child_seed) for each of reps children]``, possibly in parallel."""
    children = np.random.SeedSequence(seed).spawn(reps)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or reps < 2:
        return [func(s) for s in children]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, children, chunksize=max(1, reps // (4 * workers))))


def _fit_once(seed, spec, values, n):
    zeta = ZetaVector(spec, values)
    z = simulate(zeta, n, seed=seed)
    try:
        fit = fit_mle(z, spec)
    except SubsetARError:
        return None
    return fit.zeta.values


@dataclass(frozen=True)
class CovarianceStudy:
    estimates: np.ndarray
    empirical: np.ndarray
    theoretical: np.ndarray
    failures: int

    def scaled_error(self) -> np.ndarray:
        """``|emp - theo| / sqrt(theo_ii theo_jj)`` entrywise."""
        d = np.sqrt(np.diag(self.theoretical))
        return np.abs(self.empirical - self.theoretical) / np.outer(d, d)


def zeta_covariance_study(lags, values, n: int = 500, reps: int = 1000, seed=0,
                          workers: int | None = None) -> CovarianceStudy:
    """Empirical covariance of the MLE against ``n^{-1} I_zeta^{-1}``."""
    spec = SubsetSpec(tuple(lags))
    values = np.asarray(values, dtype=float)
    out = run_replications(partial(_fit_once, spec=spec, values=values, n=n),
                           reps, seed, workers)
    est = np.array([e for e in out if e is not None])
    Iz, _ = zeta_information(ZetaVector(spec, values), n)
    theo = information_inverse(Iz) / n
    return CovarianceStudy(est, np.cov(est, rowvar=False), theo, reps - est.shape[0])


def _residual_once(seed, spec, values, n, L):
    zeta = ZetaVector(spec, values)
    z = simulate(zeta, n, seed=seed)
    try:
        fit = fit_mle(z, spec)
        r = residual_acf(residuals(z, fit), L)
    except SubsetARError:
        return None
    return r


@dataclass(frozen=True)
class ResidualStudy:
    racf: np.ndarray
    n: int
    m: int
    Vr: np.ndarray
    failures: int

    def rejection_rate(self, alpha: float = 0.05) -> float:
        L = self.racf.shape[1]
        pv = np.array([ljung_box(r, self.n, self.m, L)[2] for r in self.racf])
        return float(np.mean(pv < alpha))

    def empirical_variance(self) -> np.ndarray:
        """``Var(sqrt(n) r_k)`` across replications, about the true mean 0."""
        return self.n * np.mean(self.racf ** 2, axis=0)


def residual_study(lags, values, n: int = 500, reps: int = 1000, lag_max: int = 20,
                   seed=0, workers: int | None = None) -> ResidualStudy:
    """Residual autocorrelations of true-model fits, with ``V_r`` at the truth."""
    spec = SubsetSpec(tuple(lags))
    values = np.asarray(values, dtype=float)
    out = run_replications(
        partial(_residual_once, spec=spec, values=values, n=n, L=lag_max),
        reps, seed, workers)
    r = np.array([x for x in out if x is not None])
    zeta = ZetaVector(spec, values)
    Iz, se = zeta_information(zeta, n)
    truth = FittedModel(spec=spec, zeta=zeta, phi=PhiVector(kernels.dl_forward(zeta.full())),
                        mean=0.0, sigma2=1.0, loglik=0.0, n=n, info=Iz, stderr=se)
    return ResidualStudy(r, n, spec.m, residual_covariance(truth, lag_max), reps - r.shape[0])
