"""Hot numeric kernels with two interchangeable backends.

``KOUNT_BACKEND=numba`` (default when numba imports) uses the @njit kernels in
:mod:`kount._kernels._numba`; ``KOUNT_BACKEND=numpy`` forces the pure-numpy
path in :mod:`kount._kernels._numpy`. ``KOUNT_THREADS`` caps numba's thread
pool. Both backends return identical exact results for the modular kernel and
agree to rounding for the eigensolver.
"""
from __future__ import annotations

import os

import numpy as np

from kount._kernels import _numpy

try:
    from kount._kernels import _numba
except ImportError:  # pragma: no cover - numba missing
    _numba = None


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("KOUNT_THREADS", "0"))) if os.environ.get("KOUNT_THREADS") \
            else (os.cpu_count() or 1)
    except ValueError:
        return 1


def backend_name() -> str:
    want = os.environ.get("KOUNT_BACKEND", "numba").strip().lower()
    if want == "numba" and _numba is not None:
        return "numba"
    return "numpy"


def _impl(name: str | None = None):
    name = name or backend_name()
    if name == "numba":
        if _numba is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        _numba.configure_threads(thread_cap())
        return _numba
    return _numpy


def jacobi_eigh(A, tol: float = 1e-13, max_sweeps: int = 60, backend: str | None = None):
    """Cyclic Jacobi on a symmetric float64 matrix -> (eigenvalues ascending, eigenvectors, sweeps)."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0)), 0
    w, V, sweeps = _impl(backend).jacobi_eigh(A, float(tol), int(max_sweeps))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], int(sweeps)


def charpoly_mod(residues, primes, backend: str | None = None) -> np.ndarray:
    """Coefficients (ascending) of det(xI - A) mod p for each stacked residue matrix.

    ``residues`` has shape (k, n, n) with entries in [0, p_i); primes must be
    below 2**24 so that every intermediate fits in int64.
    """
    residues = np.ascontiguousarray(residues, dtype=np.int64)
    primes = np.ascontiguousarray(primes, dtype=np.int64)
    if primes.size and int(primes.max()) >= 1 << 24:
        raise ValueError("modular kernel needs primes < 2**24")
    return _impl(backend).charpoly_mod_many(residues, primes)
