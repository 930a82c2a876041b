"""Floating-point spectral analysis of K, Q and friends; the counting zeta function.

Spectra of counting matrices span many orders of magnitude (lambda_min ~ 1e-2
already at n = 27), so plain float64 eigenvalues are not accurate enough for
zeta evaluation at |Re s| = 4. `counting_spectrum` therefore works two-sided:
the large eigenvalues come from K, the small ones as reciprocals of the large
eigenvalues of the exact integer inverse, each refined by a Rayleigh quotient
in extended precision.
"""
from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from kount import _kernels
from kount._rng import SeededStream
from kount.complexes import CWComplex, SimplicialComplex
from kount.errors import DomainError, FloatConversionError, InputError, SizeLimitError
from kount.exact import inverse_exact, rank_exact
from kount.matrices import (IntegerMatrix, _ExactMatrix, counting_matrix, green_star_inverse,
                            is_identity, matmul_exact, supercharge)

Complex = Union[SimplicialComplex, CWComplex]
LD = np.longdouble

SPECTRAL_LIMIT = 2000
JACOBI_MAX_N = 600
REFINE_MAX_N = 500
DEFAULT_TOL = 1e-13


@dataclass
class Spectrum:
    """Ascending eigenvalues with multiplicity.

    ``precise`` optionally carries the same values in extended precision;
    zeta evaluation prefers it.
    """

    eigenvalues: np.ndarray
    tol: float = DEFAULT_TOL
    precise: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=np.float64)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def values(self) -> np.ndarray:
        return self.precise if self.precise is not None else self.eigenvalues.astype(LD)

    def product(self) -> float:
        return float(np.prod(self.values()))

    def condition_number(self) -> float:
        lam = np.abs(self.eigenvalues)
        return float(lam.max() / lam.min()) if self.n and lam.min() > 0 else math.inf

    def to_json_dict(self) -> dict:
        return {"eigenvalues": [float(v) for v in self.eigenvalues], "tol": self.tol}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Spectrum":
        return cls(np.array(d["eigenvalues"], dtype=np.float64), float(d.get("tol", DEFAULT_TOL)))


def _to_float(M) -> np.ndarray:
    e = M.entries if isinstance(M, _ExactMatrix) else np.asarray(M)
    if e.dtype == object:
        try:
            out = np.array([float(v) for v in e.ravel()], dtype=np.float64).reshape(e.shape)
        except OverflowError:
            raise FloatConversionError(
                "matrix entries overflow float64; use the exact routines (det, char_poly) instead"
            ) from None
        if not np.all(np.isfinite(out)):
            raise FloatConversionError("matrix entries overflow float64; use exact mode")
        return out
    return e.astype(np.float64)


def _check_size(n: int):
    if n > SPECTRAL_LIMIT:
        raise SizeLimitError(f"float spectral operations refused for n={n} > {SPECTRAL_LIMIT}")


def _eigh(a: np.ndarray, tol: float, backend=None):
    if a.shape[0] <= JACOBI_MAX_N:
        w, V, _ = _kernels.jacobi_eigh(a, tol=tol, backend=backend)
        return w, V
    return np.linalg.eigh(a)


def eigenvalues_sym(M, tol: float = DEFAULT_TOL, backend: str | None = None) -> Spectrum:
    """Eigenvalues of a symmetric integer matrix by cyclic Jacobi, ascending."""
    a = _to_float(M)
    _check_size(a.shape[0])
    if not np.array_equal(a, a.T):
        raise InputError("matrix is not symmetric")
    if a.shape[0] == 0:
        return Spectrum(np.zeros(0), tol)
    w, _ = _eigh(a, tol, backend)
    return Spectrum(w, tol)


def _rayleigh(M: np.ndarray, V: np.ndarray) -> np.ndarray:
    Ml = M.astype(LD)
    Vl = V.astype(LD)
    return np.sum(Vl * (Ml @ Vl), axis=0) / np.sum(Vl * Vl, axis=0)


def _exact_inverse(X: Complex, K: IntegerMatrix) -> IntegerMatrix:
    Kinv = green_star_inverse(X)
    if is_identity(matmul_exact(K, Kinv)):
        return Kinv
    # some CW attachments break the closed formula; K is still unimodular
    return inverse_exact(K).to_integer()


def counting_spectrum(X: Complex, tol: float = DEFAULT_TOL, backend: str | None = None) -> Spectrum:
    """Spectrum of K(X), computed two-sided in extended precision."""
    K = counting_matrix(X)
    n = K.n
    _check_size(n)
    a = _to_float(K)
    if n == 0:
        return Spectrum(np.zeros(0), tol)
    mu, V = _eigh(a, tol, backend)
    if n > REFINE_MAX_N:
        return Spectrum(mu, tol)
    b = _to_float(_exact_inverse(X, K))
    nu, W = _eigh(b, tol, backend)
    mu = np.sort(_rayleigh(a, V))
    nu = np.sort(_rayleigh(b, W))
    lam = np.where(mu >= 1, mu, 1 / nu[::-1])
    lam = np.sort(lam)
    return Spectrum(lam.astype(np.float64), tol, precise=lam)


def supercharge_spectrum(X: Complex, tol: float = DEFAULT_TOL) -> Spectrum:
    return eigenvalues_sym(supercharge(X), tol)


def spectral_symmetry_residual(X) -> float:
    """max_k |lambda_k lambda_{n+1-k} - 1| over the sorted spectrum of K."""
    spec = X if isinstance(X, Spectrum) else counting_spectrum(X)
    lam = spec.values()
    if len(lam) == 0:
        return 0.0
    return float(np.max(np.abs(lam * lam[::-1] - 1)))


def unit_eigenvalue_multiplicity(X, tol: float = 1e-7) -> int:
    spec = X if isinstance(X, Spectrum) else counting_spectrum(X)
    return int(np.sum(np.abs(spec.values() - 1) < tol))


def supercharge_nullity(X: Complex, tol: float | None = None) -> int:
    """dim ker Q; exact rank unless a float tolerance is given."""
    Q = supercharge(X)
    if tol is None:
        return Q.n - rank_exact(Q)
    return int(np.sum(np.abs(eigenvalues_sym(Q).eigenvalues) < tol))


# ---------------------------------------------------------------- zeta

def _logs(spec: Spectrum) -> np.ndarray:
    lam = spec.values()
    if np.any(lam <= 0):
        raise DomainError("zeta needs a positive spectrum (real branch of log)")
    return np.log(lam)


def zeta_values(spec: Spectrum, re, im) -> np.ndarray:
    """zeta(a + ib) on the outer product grid re x im, as complex128."""
    ell = _logs(spec)
    re = np.asarray(re, dtype=LD).reshape(-1)
    im = np.asarray(im, dtype=LD).reshape(-1)
    E = np.exp(-re[:, None] * ell[None, :])
    arg = im[:, None] * ell[None, :]
    c, s = np.cos(arg), np.sin(arg)
    return (E @ c.T - 1j * (E @ s.T)).astype(np.complex128) if len(ell) else \
        np.zeros((len(re), len(im)), dtype=np.complex128)


def zeta(spec: Spectrum, s: complex) -> complex:
    """zeta(s) = sum_k lambda_k^{-s}, real branch of the logarithm."""
    s = complex(s)
    ell = _logs(spec)
    z = np.sum(np.exp(-LD(s.real) * ell) * (np.cos(LD(s.imag) * ell) - 1j * np.sin(LD(s.imag) * ell)))
    return complex(z)


def functional_equation_residual(spec: Spectrum, sample_count: int = 100, seed: int = 0) -> float:
    """max |zeta(s) - zeta(-s)| over seeded s = a+ib, |a| <= 4, 0 <= b <= 30.

    With a reciprocal-paired spectrum zeta(s) = zeta(-s); since the
    eigenvalues are real this is the same as zeta(-a+ib) = conj zeta(a+ib).
    """
    rng = SeededStream(seed)
    worst = 0.0
    for _ in range(sample_count):
        s = complex(rng.uniform(-4.0, 4.0), rng.uniform(0.0, 30.0))
        worst = max(worst, abs(zeta(spec, s) - zeta(spec, -s)))
    return worst


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    if not step > 0:
        raise InputError("grid step must be positive")
    if hi < lo:
        raise InputError("grid region is empty")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12) + 0.0


@dataclass
class ZetaGrid:
    re: np.ndarray
    im: np.ndarray
    values: np.ndarray  # complex, shape (len(re), len(im))
    step_re: float
    step_im: float

    @property
    def region(self) -> tuple[float, float, float, float]:
        return float(self.re[0]), float(self.re[-1]), float(self.im[0]), float(self.im[-1])

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def arg(self) -> np.ndarray:
        return np.angle(self.values)

    def mirror_residual(self) -> float:
        """max_{a,b} | |zeta(a+ib)| - |zeta(-a+ib)| | over mirrored sample pairs."""
        pos = {float(v): i for i, v in enumerate(self.re)}
        pairs = [(i, pos[-float(v) + 0.0]) for i, v in enumerate(self.re) if -float(v) + 0.0 in pos]
        if not pairs:
            raise InputError("grid has no mirrored columns")
        a = self.abs
        return float(max(np.max(np.abs(a[i] - a[j])) for i, j in pairs))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "abs", "arg"])
        ab, ar = self.abs, self.arg
        for i, a in enumerate(self.re.tolist()):
            for j, b in enumerate(self.im.tolist()):
                w.writerow([repr(a), repr(b), repr(float(ab[i, j])), repr(float(ar[i, j]))])
        return buf.getvalue()


def zeta_grid(spec: Spectrum, re_min: float = -4.0, re_max: float = 4.0, im_min: float = 0.0,
              im_max: float = 30.0, step: float = 0.05, step_im: float | None = None) -> ZetaGrid:
    """Dense |zeta|, arg zeta samples; rows are chunked across threads."""
    step_im = step if step_im is None else step_im
    re = _axis(re_min, re_max, step)
    im = _axis(im_min, im_max, step_im)
    chunks = [re[i:i + 16] for i in range(0, len(re), 16)]
    workers = min(_kernels.thread_cap(), len(chunks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: zeta_values(spec, r, im), chunks))
    else:
        parts = [zeta_values(spec, r, im) for r in chunks]
    return ZetaGrid(re, im, np.vstack(parts), float(step), float(step_im))


def _mirror_bins(x: np.ndarray, bins: int, r: float):
    """Bin indices and weights on [-r, r] that respect x <-> -x exactly.

    Each value is placed by |x| on the side of its sign, with |x|/width
    snapped to 9 decimals, so a reciprocal pair always lands in mirrored bins.
    With an even bin count, values at 0 are split between the two middle bins.
    """
    w = 2 * r / bins
    q = np.round(np.abs(x) / w, 9)
    idx, wts = [], []
    half = bins // 2
    zero = np.abs(x) < 1e-12 * max(r, 1.0)
    for qi, xi, z in zip(q.tolist(), x.tolist(), zero.tolist()):
        if bins % 2:
            k = min(int(math.floor(qi + 0.5)), half)
            if z or k == 0:
                idx.append(half), wts.append(1.0)
            else:
                idx.append(half + k if xi > 0 else half - k), wts.append(1.0)
        elif z:
            idx += [half - 1, half]
            wts += [0.5, 0.5]
        else:
            k = min(int(math.floor(qi)), half - 1)
            idx.append(half + k if xi > 0 else half - 1 - k), wts.append(1.0)
    return np.array(idx, dtype=np.int64), np.array(wts)


def density_of_states(spec: Spectrum, bins: int = 32, scale: str = "linear"):
    """Normalized eigenvalue histogram; returns (edges, masses) with masses summing to 1.

    ``scale="log"`` bins log(lambda) on a range symmetric about 0, so the
    lambda <-> 1/lambda symmetry becomes an exact mirror symmetry of the masses.
    """
    if bins < 1:
        raise InputError("bins must be >= 1")
    lam = spec.values().astype(np.float64)
    if scale == "log":
        if np.any(lam <= 0):
            raise DomainError("log-scale density needs a positive spectrum")
        x = np.log(lam)
        r = float(np.max(np.abs(x))) if len(x) else 0.0
        r = r if r > 0 else 0.5
        idx, wts = _mirror_bins(x, bins, r)
        counts = np.bincount(idx, weights=wts, minlength=bins)
        edges = np.linspace(-r, r, bins + 1)
    elif scale == "linear":
        lo, hi = (float(lam.min()), float(lam.max())) if len(lam) else (0.0, 1.0)
        rng = (lo, hi) if hi > lo else (lo - 0.5, hi + 0.5)
        counts, edges = np.histogram(lam, bins=bins, range=rng)
    else:
        raise InputError(f"unknown scale {scale!r}")
    total = counts.sum()
    return edges, (counts / total if total else counts.astype(float))


def _exact_points(spec: Spectrum):
    return [Fraction(*LD(v).as_integer_ratio()) for v in spec.values()]


def charpoly_residual(p, spec: Spectrum) -> float:
    """max_k |p(lambda_k)| / ||p||_2, p evaluated exactly at each stored eigenvalue.

    Near a root p(lambda) ~ p'(lambda) delta, and |p'| / ||p|| reaches 1e30 and
    more for the large eigenvalues of a 30-set complex, so this measure is only
    small for tiny, well-separated spectra. See `charpoly_backward_error`.
    """
    norm = math.sqrt(sum(float(c) ** 2 for c in p.coeffs))
    return max((abs(float(p(x))) / norm for x in _exact_points(spec)), default=0.0)


def charpoly_backward_error(p, spec: Spectrum) -> float:
    """max_k |p(lambda_k)| / sum_j |c_j| |lambda_k|^j (relative backward error)."""
    worst = 0.0
    for x in _exact_points(spec):
        scale = sum(abs(c) * abs(x) ** j for j, c in enumerate(p.coeffs))
        worst = max(worst, float(abs(p(x)) / scale))
    return worst
