"""Numba switch.

Set ``CFEDGE_NUMBA=0`` before import to force the pure-numpy / pure-python
kernels. When numba is missing the fallback is selected automatically.
"""
import os

_requested = os.environ.get("CFEDGE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _requested:
        raise ImportError
    from numba import njit

    USE_NUMBA = True
except ImportError:
    USE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator
