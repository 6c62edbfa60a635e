"""Large-sample information for ARzeta models.

``I_zeta = J' I_phi J`` where ``I_phi = Gamma_p / sigma^2`` is the
information of the unrestricted AR(p) and ``J = d(phi_1..phi_p) /
d(zeta_{i_1}..zeta_{i_m})`` is the Jacobian of the Durbin-Levinson map
restricted to the active lags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from . import kernels
from .core import (
    NonStationary,
    PhiVector,
    SingularInformation,
    SubsetSpec,
    ZetaVector,
)
from .pacf import phi_to_zeta

__all__ = [
    "InformationMatrices",
    "siddiqui_inverse",
    "siddiqui_information",
    "stage_jacobian",
    "jacobian_full",
    "jacobian_subset",
    "information_matrices",
    "zeta_information",
    "finite_difference_jacobian",
]

#: ``zeta_information`` refuses matrices with a larger condition number.
MAX_CONDITION = 1e12


def _phi_values(phi):
    return phi.values if isinstance(phi, PhiVector) else np.asarray(phi, float)


def siddiqui_inverse(phi) -> np.ndarray:
    """``sigma^2 Gamma_p^{-1}`` in closed form from the AR coefficients.

    With ``a_0 = 1`` and ``a_k = -phi_k`` (the products make the sign of
    ``a_0`` immaterial, so this is the ``phi_0 = -1`` convention), the
    (i, j) entry, 1-based, is

        sum_{k=1}^{min(i,j)} a_{i-k} a_{j-k} - a_{p+k-i} a_{p+k-j}

    i.e. ``A A' - B B'`` for the lower-triangular Toeplitz matrices with
    first columns ``(a_0..a_{p-1})`` and ``(a_p..a_1)``.
    """
    vals = _phi_values(phi)
    p = vals.size
    a = np.concatenate(([1.0], -vals))
    zero = np.zeros(p)
    A = linalg.toeplitz(a[:p], zero)
    B = linalg.toeplitz(a[p:0:-1], zero)
    return A @ A.T - B @ B.T


def siddiqui_information(phi) -> np.ndarray:
    """Information matrix ``Gamma_p / sigma^2`` of the unrestricted AR(p).

    Obtained by inverting the closed-form :func:`siddiqui_inverse` with a
    Cholesky factorization.  Raises NonStationary outside the admissible
    region.
    """
    vals = _phi_values(phi)
    phi_to_zeta(vals)  # stationarity check
    Q = siddiqui_inverse(vals)
    try:
        c = linalg.cho_factor(Q)
    except linalg.LinAlgError:
        raise NonStationary("covariance matrix is not positive definite") from None
    out = linalg.cho_solve(c, np.eye(vals.size))
    return 0.5 * (out + out.T)


def stage_jacobian(zeta_full, k: int) -> np.ndarray:
    """Jacobian of one Durbin-Levinson step, order k -> k+1 (1 <= k < p).

    The state at order k is ``(phi_{k,1}, .., phi_{k,k}, zeta_{k+1}, ..,
    zeta_p)``.  The step changes only the first k entries, so the matrix is
    identity outside the leading ``(k+1) x (k+1)`` block, where

    * ``d phi_{k+1,j} / d phi_{k,j} = 1`` (``1 - zeta_{k+1}`` on the cell
      where ``j = k+1-j``),
    * ``d phi_{k+1,j} / d phi_{k,k+1-j} = -zeta_{k+1}``,
    * ``d phi_{k+1,j} / d zeta_{k+1} = -phi_{k,k+1-j}``.
    """
    z = np.asarray(zeta_full, dtype=float)
    p = z.size
    if not 1 <= k < p:
        raise ValueError(f"stage k must satisfy 1 <= k < p={p}")
    prev = kernels.dl_table(z[:k])[k - 1]
    J = np.eye(p)
    zk = z[k]
    for j in range(k):
        J[j, k - 1 - j] -= zk
        J[j, k] = -prev[k - 1 - j]
    return J


def jacobian_full(zeta_full) -> np.ndarray:
    """``d phi / d zeta`` for the full model as ``J_{p-1} ... J_1``."""
    z = np.asarray(zeta_full, dtype=float)
    p = z.size
    out = np.eye(p)
    for k in range(1, p):
        out = stage_jacobian(z, k) @ out
    return out


def jacobian_subset(zeta: ZetaVector) -> np.ndarray:
    """Columns ``i_1..i_m`` of the full Jacobian at the embedded zeta.

    Propagates the m tangent directions through the recursion instead of
    forming p x p stage matrices, O(p^2 m).
    """
    z = zeta.full()
    p = zeta.spec.p
    tab = kernels.dl_table(z)
    M = np.zeros((p, zeta.spec.m))
    M[zeta.spec.index, np.arange(zeta.spec.m)] = 1.0
    for k in range(1, p):
        prev = tab[k - 1, :k]
        head = M[:k].copy()
        M[:k] = head - z[k] * head[::-1] - np.outer(prev[::-1], M[k])
    return M


def finite_difference_jacobian(zeta: ZetaVector, h_scale: float = 1e-6) -> np.ndarray:
    """Central differences of the subset map, step ``h_scale*max(1,|zeta|)``."""
    full = zeta.full()
    cols = []
    for idx in zeta.spec.index:
        h = h_scale * max(1.0, abs(full[idx]))
        up = full.copy()
        dn = full.copy()
        up[idx] += h
        dn[idx] -= h
        cols.append((kernels.dl_forward(up) - kernels.dl_forward(dn)) / (2 * h))
    return np.column_stack(cols)


@dataclass(frozen=True)
class InformationMatrices:
    Iphi: np.ndarray
    Jzeta: np.ndarray
    Izeta: np.ndarray


def information_matrices(zeta: ZetaVector) -> InformationMatrices:
    phi = kernels.dl_forward(zeta.full())
    Iphi = siddiqui_information(phi)
    J = jacobian_subset(zeta)
    Iz = J.T @ Iphi @ J
    return InformationMatrices(Iphi=Iphi, Jzeta=J, Izeta=0.5 * (Iz + Iz.T))


def zeta_information(zeta: ZetaVector, n: int):
    """Information matrix per observation and standard errors.

    Returns ``(I_zeta, stderr)`` with ``stderr_k = sqrt((I^{-1})_kk / n)``.

    Raises
    ------
    SingularInformation
        If ``I_zeta`` is not numerically positive definite or its condition
        number exceeds ``MAX_CONDITION``.
    """
    Iz = information_matrices(zeta).Izeta
    return Iz, _stderr(Iz, n, zeta.spec)


def _stderr(Iz, n, spec):
    try:
        c = linalg.cho_factor(Iz)
    except linalg.LinAlgError:
        raise SingularInformation(f"information matrix of {spec} is singular") from None
    diag = np.diag(c[0]) ** 2
    cond_est = diag.max() / diag.min() if diag.min() > 0 else np.inf
    if cond_est > MAX_CONDITION or np.linalg.cond(Iz) > MAX_CONDITION:
        raise SingularInformation(
            f"information matrix of {spec} is ill-conditioned")
    inv = linalg.cho_solve(c, np.eye(Iz.shape[0]))
    return np.sqrt(np.diag(inv) / n)


def information_inverse(Iz: np.ndarray) -> np.ndarray:
    c = linalg.cho_factor(Iz)
    return linalg.cho_solve(c, np.eye(Iz.shape[0]))
