"""Backend selection for the numeric kernels.

Set ``ENTGEO_DISABLE_NUMBA=1`` to run the pure-numpy kernels instead of the
numba-compiled ones. numba being absent or broken has the same effect.
"""
import os

_FALSY = ("", "0", "false", "no", "off")


def _numba_requested():
    return os.environ.get("ENTGEO_DISABLE_NUMBA", "").strip().lower() in _FALSY


try:
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and _numba_requested()


def njit(*args, **kwargs):
    """``numba.njit`` with the project defaults, or a pass-through without numba."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def identity_jit(f):
    return f


def thread_count():
    """Worker count for independent restarts, capped by ``ENTGEO_THREADS``."""
    raw = os.environ.get("ENTGEO_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
