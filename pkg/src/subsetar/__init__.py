"""Subset autoregression parameterized by partial autocorrelations.

An ARzeta(i_1, .., i_m) model is the AR(p), p = i_m, whose partial
autocorrelations vanish except at the listed lags.  Every such model is
stationary by construction.
"""

from importlib.metadata import PackageNotFoundError, version

from .core import (
    FittedModel,
    PhiVector,
    SubsetARError,
    SubsetSpec,
    TimeSeries,
    ZetaVector,
    center,
    validate_subset,
)
from .diagnostics import DiagnosticsReport, diagnose, ljung_box, residual_acf
from .forecast import forecast, holdout_eval, simulate, skewness, skewness_scan
from .inference import information_matrices, zeta_information
from .likelihood import build_kernel, concentrated_loglik, fit_mle, fit_phi_subset
from .pacf import burg_pacf, estimate_pacf, phi_to_zeta, yule_walker_pacf, zeta_to_phi
from .selection import SelectionConfig, rescore_exact, score_subset, select_models

try:
    __version__ = version("subsetar")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "__version__",
    "FittedModel",
    "PhiVector",
    "SubsetARError",
    "SubsetSpec",
    "TimeSeries",
    "ZetaVector",
    "center",
    "validate_subset",
    "DiagnosticsReport",
    "diagnose",
    "ljung_box",
    "residual_acf",
    "forecast",
    "holdout_eval",
    "simulate",
    "skewness",
    "skewness_scan",
    "information_matrices",
    "zeta_information",
    "build_kernel",
    "concentrated_loglik",
    "fit_mle",
    "fit_phi_subset",
    "burg_pacf",
    "estimate_pacf",
    "phi_to_zeta",
    "yule_walker_pacf",
    "zeta_to_phi",
    "SelectionConfig",
    "rescore_exact",
    "score_subset",
    "select_models",
]
