"""Forward-pass kernel selection.

ATTNLENS_BACKEND chooses the implementation: "numba" (default when numba
imports cleanly), "numpy" (pure-numpy fallback). Both share one signature.
"""

from __future__ import annotations

import os

from . import numpy_backend

_VALID = ("auto", "numba", "numpy")


def _requested() -> str:
    value = os.environ.get("ATTNLENS_BACKEND", "auto").lower()
    if value not in _VALID:
        raise ValueError(f"ATTNLENS_BACKEND must be one of {_VALID}, got {value!r}")
    return value


def active_backend() -> str:
    req = _requested()
    if req == "numpy":
        return "numpy"
    try:
        from . import numba_backend  # noqa: F401
    except ImportError:
        if req == "numba":
            raise
        return "numpy"
    return "numba"


def get_forward(backend: str | None = None):
    """Return the forward_attention callable for the chosen backend."""
    name = backend or active_backend()
    if name == "numpy":
        return numpy_backend.forward_attention
    if name == "numba":
        from . import numba_backend

        return numba_backend.forward_attention
    raise ValueError(f"unknown backend {name!r}")
