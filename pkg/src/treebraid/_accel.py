"""Backend switch for the array kernels.

Every hot kernel in :mod:`treebraid.kernels` exists twice: an explicit-loop
version compiled with numba, and a numpy (or plain python) version.  The
dispatcher picks one at import time; ``TREEBRAID_NUMBA=0`` forces numpy.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("TREEBRAID_NUMBA", "1").lower() not in (
    "0",
    "false",
    "no",
    "off",
)


def jit(func):
    """numba.njit(cache=True) when numba is importable, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
