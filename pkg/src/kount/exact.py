"""Exact integer/rational linear algebra.

Determinants use fraction-free (Bareiss) elimination, so every intermediate
value is itself a minor and the pivots are the leading principal minors.
Characteristic polynomials are available two ways: interpolation of
det(M - jI) at j = 0..n, and a multi-modular Hessenberg reduction recombined
by CRT under a Hadamard coefficient bound (numba kernel).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from kount import _kernels
from kount.errors import SingularMatrixError, SizeLimitError
from kount.matrices import IntegerMatrix, RationalMatrix, _ExactMatrix

CHARPOLY_LIMIT = 200
INTERPOLATION_MAX_N = 40
BAREISS_MAX_N = 80
DET_LIMIT = 512


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial, coefficients c_0..c_n in ascending degree."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Polynomial":
        return cls(tuple(int(c) for c in d["coeffs"]))


def _rows(M) -> list[list]:
    if isinstance(M, _ExactMatrix):
        return M.tolist()
    if isinstance(M, np.ndarray):
        return [list(r) for r in M.tolist()]
    return [list(r) for r in M]


def _bareiss(rows: list[list[int]], pivoting: bool = True):
    """In-place Bareiss elimination; returns (det, pivots before each step)."""
    n = len(rows)
    if n == 0:
        return 1, []
    A = rows
    prev = 1
    sign = 1
    pivots = []
    for k in range(n - 1):
        if A[k][k] == 0:
            if not pivoting:
                return None, pivots + [0]
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0, pivots
        akk = A[k][k]
        pivots.append(akk)
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            if aik == 0:
                if akk != prev:
                    for j in range(k + 1, n):
                        ri[j] = akk * ri[j] // prev
            else:
                for j in range(k + 1, n):
                    ri[j] = (akk * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    pivots.append(A[n - 1][n - 1])
    return sign * A[n - 1][n - 1], pivots


def _integerize(rows):
    """Scale rational rows to integers; returns (int rows, product of row scales)."""
    scale = 1
    out = []
    for r in rows:
        r = [Fraction(v) for v in r]
        m = math.lcm(*(v.denominator for v in r)) if r else 1
        scale *= m
        out.append([int(v * m) for v in r])
    return out, scale


def _det_int(rows, method: str):
    if method == "auto":
        method = "bareiss" if len(rows) <= BAREISS_MAX_N else "modular"
    if method == "bareiss":
        return _bareiss(rows)[0]
    if method == "modular":
        return _charpoly_modular(rows)[0] if rows else 1
    raise ValueError(f"unknown det method {method!r}")


def det_exact(M, method: str = "auto", limit: int | None = DET_LIMIT):
    """Exact determinant of an integer or rational matrix; the empty matrix has det 1.

    ``method`` is ``"bareiss"``, ``"modular"`` (constant term of the
    multi-modular characteristic polynomial) or ``"auto"``.
    """
    rows = _rows(M)
    if limit is not None and len(rows) > limit:
        raise SizeLimitError(f"exact determinant refused for n={len(rows)} > {limit}")
    if any(isinstance(v, Fraction) and v.denominator != 1 for r in rows for v in r):
        ints, scale = _integerize(rows)
        return Fraction(_det_int(ints, method), scale)
    det = _det_int([[int(v) for v in r] for r in rows], method)
    return Fraction(det) if isinstance(M, RationalMatrix) else det


def leading_minors(M) -> list[int]:
    """All n leading principal minors (exact); all positive certifies positive definiteness."""
    rows = [[int(v) for v in r] for r in _rows(M)]
    n = len(rows)
    det, pivots = _bareiss([r[:] for r in rows], pivoting=False)
    if det is not None:
        return pivots
    # a vanishing leading minor stops pivot-free elimination; finish minor by minor
    k = len(pivots)
    return pivots + [det_exact([r[:m] for r in rows[:m]], limit=None) for m in range(k + 1, n + 1)]


def rank_exact(M) -> int:
    """Rank over the rationals by fraction-free elimination with row search."""
    rows = _rows(M)
    if any(isinstance(v, Fraction) and v.denominator != 1 for r in rows for v in r):
        rows, _ = _integerize(rows)
    A = [[int(v) for v in r] for r in rows]
    m = len(A)
    ncols = len(A[0]) if A else 0
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        akk = A[rank][col]
        rk = A[rank]
        for i in range(rank + 1, m):
            ri = A[i]
            aik = ri[col]
            A[i] = [(akk * a - aik * b) // prev for a, b in zip(ri, rk)]
        prev = akk
        rank += 1
    return rank


def inverse_exact(M, limit: int | None = DET_LIMIT) -> RationalMatrix:
    """Exact inverse by fraction-free Gauss-Jordan on [M | I]."""
    rows = _rows(M)
    labels = M.labels if isinstance(M, _ExactMatrix) else None
    n = len(rows)
    if limit is not None and n > limit:
        raise SizeLimitError(f"exact inverse refused for n={n} > {limit}")
    if any(isinstance(v, Fraction) and v.denominator != 1 for r in rows for v in r):
        ints, _ = _integerize(rows)
        scales = [math.lcm(*(Fraction(v).denominator for v in r)) for r in rows]
    else:
        ints, scales = [[int(v) for v in r] for r in rows], [1] * n
    A = [r + [1 if j == i else 0 for j in range(n)] for i, r in enumerate(ints)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
        akk = A[k][k]
        rk = A[k]
        for i in range(n):
            if i == k:
                continue
            ri = A[i]
            aik = ri[k]
            A[i] = [(akk * a - aik * b) // prev for a, b in zip(ri, rk)]
        prev = akk
    d = prev
    # A = [d I | d (S M)^{-1}] where S = diag(scales) clears row denominators
    inv = [[Fraction(A[i][n + j] * scales[j], d) for j in range(n)] for i in range(n)]
    return RationalMatrix(np.array(inv, dtype=object).reshape(n, n), labels)


# ---------------------------------------------------------------- characteristic polynomial

def _shifted_det(args):
    rows, j = args
    return _bareiss([[v - j if c == r else v for c, v in enumerate(row)]
                     for r, row in enumerate(rows)])[0]


def _interpolate(values: Sequence[int]) -> tuple[int, ...]:
    """Monomial coefficients of the degree-n polynomial through (j, values[j]), j = 0..n."""
    n = len(values) - 1
    diffs = list(values)
    newton = []
    for k in range(n + 1):
        newton.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    coeffs = [Fraction(0)] * (n + 1)
    falling = [1]  # x (x-1) ... (x-k+1), ascending
    fact = 1
    for k, d in enumerate(newton):
        if k:
            fact *= k
            falling = [0] + falling
            for i in range(len(falling) - 1):
                falling[i] -= (k - 1) * falling[i + 1]
        for i, c in enumerate(falling):
            coeffs[i] += Fraction(d * c, fact)
    bad = [c for c in coeffs if c.denominator != 1]
    if bad:
        raise ArithmeticError(f"interpolated characteristic polynomial is not integral: {bad[0]}")
    return tuple(int(c) for c in coeffs)


def _charpoly_interpolation(rows) -> tuple[int, ...]:
    n = len(rows)
    jobs = [(rows, j) for j in range(n + 1)]
    workers = min(_kernels.thread_cap(), n + 1)
    if workers > 1 and n >= 60:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_shifted_det, jobs))
    else:
        values = [_shifted_det(job) for job in jobs]
    return _interpolate(values)


@lru_cache(maxsize=None)
def _primes_below_2_24(count: int) -> tuple[int, ...]:
    from sympy import prevprime

    out = []
    p = 1 << 24
    while len(out) < count:
        p = prevprime(p)
        out.append(p)
    return tuple(out)


def coefficient_bound(rows) -> int:
    """Bound on |c_k| for det(M - xI): prod_i (1 + ||row_i||_2) (Hadamard on principal minors)."""
    b = 1
    for r in rows:
        b *= 1 + math.isqrt(sum(int(v) * int(v) for v in r)) + 1
    return b


def _charpoly_modular(rows, backend=None) -> tuple[int, ...]:
    n = len(rows)
    need = 2 * coefficient_bound(rows) + 1
    count = 1
    while True:
        primes = _primes_below_2_24(count)
        if math.prod(primes) > need:
            break
        count = max(count + 1, int(count * 1.5))
    primes = np.array(primes, dtype=np.int64)
    flat = [int(v) for r in rows for v in r]
    if all(abs(v) < (1 << 62) for v in flat):
        base = np.array(flat, dtype=np.int64).reshape(n, n)
        residues = np.stack([base % p for p in primes])
    else:
        residues = np.array([[v % int(p) for v in flat] for p in primes],
                            dtype=np.int64).reshape(len(primes), n, n)
    mods = _kernels.charpoly_mod(residues, primes, backend=backend)
    # Garner-style incremental CRT over all coefficients
    values = [0] * (n + 1)
    modulus = 1
    for p, row in zip(primes.tolist(), mods.tolist()):
        inv = pow(modulus, -1, p)
        for k in range(n + 1):
            delta = (row[k] - values[k]) * inv % p
            values[k] += modulus * delta
        modulus *= p
    half = modulus // 2
    sign = -1 if n % 2 else 1  # det(M - xI) = (-1)^n det(xI - M)
    return tuple(sign * (v - modulus if v > half else v) for v in values)


def char_poly(M, method: str = "auto", limit: int | None = CHARPOLY_LIMIT,
              backend: str | None = None) -> Polynomial:
    """Exact coefficients of p(x) = det(M - xI), ascending.

    ``method`` is ``"interpolation"`` (det at x = 0..n, exact Newton
    interpolation, integrality asserted), ``"modular"`` (Hessenberg mod
    primes + CRT) or ``"auto"`` (interpolation up to n = 40).
    """
    rows = [[int(v) for v in r] for r in _rows(M)]
    n = len(rows)
    if limit is not None and n > limit:
        raise SizeLimitError(f"exact characteristic polynomial refused for n={n} > {limit}")
    if n == 0:
        return Polynomial((1,))
    if method == "auto":
        method = "interpolation" if n <= INTERPOLATION_MAX_N else "modular"
    if method == "interpolation":
        return Polynomial(_charpoly_interpolation(rows))
    if method == "modular":
        return Polynomial(_charpoly_modular(rows, backend))
    raise ValueError(f"unknown char_poly method {method!r}")


def palindrome_check(p: Polynomial) -> bool:
    """True iff c_k = (-1)^n c_{n-k} for all k, n = degree."""
    c = p.coeffs
    n = p.degree
    s = -1 if n % 2 else 1
    return all(c[k] == s * c[n - k] for k in range(n + 1))


def is_integral_inverse(M) -> bool:
    return inverse_exact(M).is_integral()


__all__ = [
    "Polynomial", "det_exact", "leading_minors", "inverse_exact", "char_poly",
    "palindrome_check", "coefficient_bound", "rank_exact", "IntegerMatrix",
]
