"""Backend selection for the compiled kernels.

Set ``SUPERDISCORD_DISABLE_NUMBA=1`` to force the pure-numpy path. The
flag is read once at import time.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}


def _flag_set(name):
    return os.environ.get(name, "").strip().lower() not in _FALSY


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency here
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _flag_set("SUPERDISCORD_DISABLE_NUMBA")


def njit(func):
    """Compile ``func`` with numba when available, else return it untouched.

    Compilation is attempted regardless of ``USE_NUMBA`` so that tests and
    benchmarks can reach both variants; ``USE_NUMBA`` only picks which one
    the public API dispatches to.
    """
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, fastmath=False)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
