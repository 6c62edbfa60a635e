"""Backend selection for the numerical kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementations in ``_kernels_py`` take over.  Setting
``SUBSETAR_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("SUBSETAR_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

dl_table = _impl.dl_table
dl_forward = _impl.dl_forward
dl_backward = _impl.dl_backward
dl_vjp = _impl.dl_vjp
burg = _impl.burg
sos_kernel = _impl.sos_kernel
sos_value = _impl.sos_value
sos_value_grad = _impl.sos_value_grad
ar_residuals = _impl.ar_residuals
ar_recursion = _impl.ar_recursion

NAMES = ("dl_table", "dl_forward", "dl_backward", "dl_vjp", "burg", "sos_kernel",
         "sos_value", "sos_value_grad", "ar_residuals", "ar_recursion")


def backends():
    """Map of available backend name to kernel module, for cross-checks."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
