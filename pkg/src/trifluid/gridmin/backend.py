"""Backend selection for the sweep kernel.

The environment variable ``TFL_BACKEND`` picks how the single-source kernel
in :mod:`trifluid.gridmin.kernels` runs:

* unset or ``auto`` — compile with numba if it is importable, otherwise fall
  back to the interpreted numpy path;
* ``numba`` — require numba (raise if missing);
* ``numpy`` — force the interpreted path.

Both paths execute the same function object, and the kernel avoids
transcendental math, so trajectories are bit-identical across backends for
a given seed.  The choice is memoized on first use; tests switch backends
via :func:`reset_backend` after changing the environment.
"""

from __future__ import annotations

import os

from . import kernels

_VALID = ("auto", "numba", "numpy")

_cached_fn = None
_cached_name: str | None = None


def _resolve():
    global _cached_fn, _cached_name
    requested = os.environ.get("TFL_BACKEND", "auto").strip().lower() or "auto"
    if requested not in _VALID:
        raise ValueError(
            f"TFL_BACKEND must be one of {_VALID}, got {requested!r}"
        )
    if requested == "numpy":
        _cached_fn, _cached_name = kernels.sweep, "numpy"
        return
    try:
        from numba import njit
    except ImportError:
        if requested == "numba":
            raise
        _cached_fn, _cached_name = kernels.sweep, "numpy"
        return
    _cached_fn = njit(cache=True, nogil=True)(kernels.sweep)
    _cached_name = "numba"


def get_sweep():
    """The sweep kernel under the active backend (compiling on first use)."""
    if _cached_fn is None:
        _resolve()
    return _cached_fn


def backend_name() -> str:
    """Name of the active backend: ``"numba"`` or ``"numpy"``."""
    if _cached_name is None:
        _resolve()
    return _cached_name


def reset_backend() -> None:
    """Forget the memoized choice so TFL_BACKEND is consulted again."""
    global _cached_fn, _cached_name
    _cached_fn = None
    _cached_name = None
