"""Backend selection for the hot kernels.

Set ``SZILARD_NUMBA=0`` in the environment to force the pure-numpy path.
"""
import os

_FALSY = {"0", "false", "no", "off"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("SZILARD_NUMBA", "1").strip().lower() not in _FALSY


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
