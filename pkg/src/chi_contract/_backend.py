"""Kernel backend selection.

``CHI_CONTRACT_BACKEND=numpy`` forces the pure-numpy kernels;
``CHI_CONTRACT_BACKEND=numba`` requires numba and fails loudly if missing.
Unset, numba is used when importable and numpy otherwise.
"""

from __future__ import annotations

import os

BACKEND_ENV = "CHI_CONTRACT_BACKEND"


def _select():
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice in ("numpy", "python"):
        from . import _kernels_numpy as impl
        return "numpy", impl
    if choice == "numba":
        from . import _kernels_numba as impl
        return "numba", impl
    if choice:
        raise ValueError(f"unknown {BACKEND_ENV}={choice!r}; use 'numba' or 'numpy'")
    try:
        from . import _kernels_numba as impl
        return "numba", impl
    except ImportError:
        from . import _kernels_numpy as impl
        return "numpy", impl


BACKEND, kernels = _select()
