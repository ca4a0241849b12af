"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy/pure
Python versions take over.  Setting ``BLOCHSIEGERT_PURE_PYTHON=1`` forces the
fallback, which is handy for comparing the two.
"""
from __future__ import annotations

import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("BLOCHSIEGERT_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend

BACKEND = "cython" if compiled_backend is not None else "python"
HAVE_COMPILED = compiled_backend is not None

jacobi_eigh = _active.jacobi_eigh
rk4_average = _active.rk4_average


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ("cython", "python" or None for active)."""
    if name is None:
        return _active
    if name == "python":
        return python_backend
    if name == "cython":
        if compiled_backend is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return compiled_backend
    raise ValueError(f"unknown backend {name!r}")
