"""Backend switch for the compiled kernels.

Set ``W2BOUNDS_NO_NUMBA=1`` before import to run every kernel as plain
Python/numpy. Useful for debugging and for the benchmark in ``benchmarks/``.
"""
import os

_FLAG = os.environ.get("W2BOUNDS_NO_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when the compiled backend is active, identity otherwise."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        return numba.njit(fn) if USE_NUMBA else fn

    def wrap(fn):
        return numba.njit(*args, **kwargs)(fn) if USE_NUMBA else fn

    return wrap


def backend_name() -> str:
    return "numba" if USE_NUMBA else "python"
