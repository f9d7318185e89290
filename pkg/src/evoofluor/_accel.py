"""Backend switch for the compiled kernels.

Set ``EVOOFLUOR_NO_NUMBA=1`` before import to force the pure-numpy path.
When numba is not installed the numpy path is used automatically.
"""

import os

_DISABLED = os.environ.get("EVOOFLUOR_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAS_NUMBA = _numba is not None
USE_NUMBA = HAS_NUMBA and not _DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if _numba is None:
        return func
    return _numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
