"""Hot numeric kernels with selectable backend.

``LATTICE_HOMOG_BACKEND`` picks the implementation:

* ``numba`` - JIT-compiled per-segment loop (error if numba is missing)
* ``numpy`` - pure NumPy vectorized fallback
* ``auto``  - numba when importable, else numpy (default)

The two backends agree to machine precision; ``tests/test_kernels.py``
asserts it and ``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

from . import numpy_backend

_ENV = "LATTICE_HOMOG_BACKEND"


def _load(choice: str):
    if choice == "numpy":
        return numpy_backend, "numpy"
    if choice == "numba":
        from . import numba_backend
        return numba_backend, "numba"
    if choice == "auto":
        try:
            from . import numba_backend
            return numba_backend, "numba"
        except ImportError:
            return numpy_backend, "numpy"
    raise ValueError(
        f"{_ENV} must be 'auto', 'numba' or 'numpy', got {choice!r}")


_impl, BACKEND = _load(os.environ.get(_ENV, "auto").strip().lower())

element_matrices = _impl.element_matrices


def get_backend() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return BACKEND
