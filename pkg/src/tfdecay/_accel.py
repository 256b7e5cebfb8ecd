"""Numba switch.

Kernels in :mod:`tfdecay._kernels` come in two flavours: an ``@njit`` loop
version and a vectorised numpy version.  The loop version is used when numba
imports cleanly and ``TFDECAY_DISABLE_NUMBA`` is unset (or ``0``).
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None

_DISABLED = os.environ.get("TFDECAY_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

USE_NUMBA = numba is not None and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity otherwise."""
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)
