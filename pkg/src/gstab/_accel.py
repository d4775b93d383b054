"""Numba switch.

Kernels in :mod:`gstab.kernels` come in two flavours, a ``@njit`` loop and a
vectorised numpy equivalent.  The numba path is used when numba imports and
``GSTAB_DISABLE_NUMBA`` is unset or ``0``.
"""

import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("GSTAB_DISABLE_NUMBA", "0") in ("", "0")


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
