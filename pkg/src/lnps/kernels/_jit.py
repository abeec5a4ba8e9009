"""JIT switch for the numeric kernels.

Kernels are written once in a numba-compatible subset of Python over numpy
arrays. With numba available they are compiled with ``njit``; setting
``LNPS_DISABLE_JIT=1`` (or running without numba) leaves them as plain
interpreted functions.
"""

import os
import time

DISABLE_ENV = "LNPS_DISABLE_JIT"


def _jit_requested():
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

JIT_ENABLED = numba is not None and _jit_requested()


def kernel(func):
    """Compile ``func`` with numba when the JIT is enabled."""
    if JIT_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func


if JIT_ENABLED:

    @numba.njit(cache=True)
    def now():
        with numba.objmode(t="float64"):
            t = time.perf_counter()
        return t

else:

    def now():
        return time.perf_counter()
