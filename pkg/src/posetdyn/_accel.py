"""Backend switch for the numeric kernels.

``POSETDYN_BACKEND=numpy`` selects the vectorised numpy kernels; the default
is ``numba``. If numba cannot be imported the numpy path is used silently.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None

_requested = os.environ.get("POSETDYN_BACKEND", "numba").strip().lower() or "numba"
if _requested not in ("numba", "numpy"):
    raise ImportError(f"POSETDYN_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

BACKEND = _requested if HAVE_NUMBA else "numpy"


def njit(fn):
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
