"""Backend selection for the hot scan kernels.

Two interchangeable implementations of the measurement-scan loops exist:
compiled (numba @njit) and pure numpy. The active one is chosen by the
environment variable SPINCORR_BACKEND:

    auto    compiled kernels when numba imports cleanly, numpy otherwise (default)
    numba   require the compiled kernels; error if numba is unavailable
    numpy   force the pure-numpy fallbacks

SPINCORR_THREADS caps the compiled backend's thread pool (default 1, so
repeated runs are bit-reproducible regardless of machine). The kernels are
written single-threaded either way; the cap only matters if numba decides
to parallelize library calls internally.
"""

from __future__ import annotations

import os

VALID_BACKENDS = ("auto", "numba", "numpy")

_active: str | None = None


class BackendError(RuntimeError):
    """Requested backend cannot be provided."""


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


def _apply_thread_cap() -> None:
    raw = os.environ.get("SPINCORR_THREADS", "1").strip()
    try:
        want = max(1, int(raw))
    except ValueError:
        raise BackendError(f"SPINCORR_THREADS must be an integer, got {raw!r}")
    import numba

    # set_num_threads rejects values above the launch-time pool size.
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(min(want, limit))


def _resolve(name: str) -> str:
    if name not in VALID_BACKENDS:
        raise BackendError(
            f"SPINCORR_BACKEND must be one of {VALID_BACKENDS}, got {name!r}"
        )
    if name == "numpy":
        return "numpy"
    if _numba_available():
        _apply_thread_cap()
        return "numba"
    if name == "numba":
        raise BackendError("SPINCORR_BACKEND=numba but numba is not importable")
    return "numpy"


def active_backend() -> str:
    """Name of the backend in use: 'numba' or 'numpy'. Resolved once, cached."""
    global _active
    if _active is None:
        _active = _resolve(os.environ.get("SPINCORR_BACKEND", "auto").strip().lower())
    return _active


def set_backend(name: str | None) -> str:
    """Override the backend programmatically (tests, benchmarks).

    Pass None to drop the cache and re-read the environment on next use.
    Returns the backend now active.
    """
    global _active
    if name is None:
        _active = None
        return active_backend()
    _active = _resolve(name)
    return _active
