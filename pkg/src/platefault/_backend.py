"""Select the kernel implementation at import time.

The compiled ``_core`` extension is used when importable; otherwise the numpy
fallback in ``_pure``. Set ``PLATEFAULT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pure

if os.environ.get("PLATEFAULT_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pure
    BACKEND = "numpy"
else:
    try:
        from . import _core as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _pure
        BACKEND = "numpy"

__all__ = ["kernels", "BACKEND"]
