"""Exact matrices attached to a complex: K, L, their Green inverses, L_t, g_t, Q.

Everything is assembled from two incidence matrices of the complex:

* ``C[x, z] = 1`` iff z lies in the core W^-(x). Then
  ``K = C C^T`` (|W^-(x) ∩ W^-(y)|) and ``C^T C`` counts |W^+(x) ∩ W^+(y)|.
* for simplicial complexes the vertex incidence gives |x ∩ y| directly, and
  ``K(x, y) = 2^{|x∩y|} - 1``.

Entries are exact: int64 while provably in range, Python ints otherwise.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from kount.complexes import CWComplex, SimplicialComplex
from kount.errors import DomainError, InputError, UnsupportedInputError

Complex = Union[SimplicialComplex, CWComplex]

_INT64_SAFE = 1 << 62


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _int_array(values) -> np.ndarray:
    """Exact integer array: int64 when every entry is small, object (Python int) otherwise."""
    arr = np.asarray(values)
    if arr.dtype == object or arr.dtype.kind not in "iub":
        obj = np.empty(arr.shape, dtype=object)
        flat = [int(v) for v in arr.ravel()]
        obj.ravel()[:] = flat
        if all(-_INT64_SAFE < v < _INT64_SAFE for v in flat):
            return obj.astype(np.int64)
        return obj
    return arr.astype(np.int64)


class _ExactMatrix:
    kind = "exact"

    def __init__(self, entries, labels: Iterable | None = None):
        entries = self._coerce(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            if entries.size == 0:
                entries = entries.reshape(0, 0)
            else:
                raise InputError(f"matrix must be square, got shape {entries.shape}")
        self.entries = _freeze(entries)
        self.labels = list(labels) if labels is not None else list(range(1, entries.shape[0] + 1))
        if len(self.labels) != self.n:
            raise InputError("label count does not match matrix order")

    @staticmethod
    def _coerce(entries):
        raise NotImplementedError

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def tolist(self) -> list[list]:
        return [[v for v in row] for row in self.entries.tolist()]

    def __getitem__(self, ij):
        return self.entries[ij]

    def __eq__(self, other):
        other = other.entries if isinstance(other, _ExactMatrix) else np.asarray(other, dtype=object)
        return self.entries.shape == other.shape and bool(np.all(self.entries == other))

    def __hash__(self):
        return hash(tuple(map(tuple, self.tolist())))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"

    def is_symmetric(self) -> bool:
        return bool(np.all(self.entries == self.entries.T))

    def total(self):
        return sum(v for row in self.tolist() for v in row)

    def trace(self):
        return sum(self.entries[i, i] for i in range(self.n))

    # -- serialization: big integers and rationals as decimal strings
    @staticmethod
    def _format(v) -> str:
        return str(v)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "labels": self.labels,
                "entries": [[self._format(v) for v in row] for row in self.tolist()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict()) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.tolist():
            w.writerow([self._format(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_json_dict(cls, d: dict):
        try:
            entries = [[cls._parse(s) for s in row] for row in d["entries"]]
            m = cls(np.array(entries, dtype=object).reshape(len(entries), len(entries)),
                    d.get("labels"))
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"malformed matrix JSON: {exc}") from None
        if "n" in d and d["n"] != m.n:
            raise InputError("matrix JSON 'n' disagrees with entries")
        return m


class IntegerMatrix(_ExactMatrix):
    """Square matrix of arbitrary-precision integers."""

    kind = "integer"

    @staticmethod
    def _coerce(entries):
        return _int_array(entries)

    @staticmethod
    def _parse(s):
        return int(s)

    def to_object(self) -> np.ndarray:
        return np.array(self.tolist(), dtype=object).reshape(self.entries.shape)

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix(self.to_object() - other.to_object(), self.labels)

    def __neg__(self):
        return IntegerMatrix(-self.to_object(), self.labels)


class RationalMatrix(_ExactMatrix):
    """Square matrix of exact rationals (``fractions.Fraction``)."""

    kind = "rational"

    @staticmethod
    def _coerce(entries):
        arr = np.asarray(entries, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = [Fraction(v) for v in arr.ravel()]
        return out

    @staticmethod
    def _parse(s):
        return Fraction(s)

    @staticmethod
    def _format(v) -> str:
        return f"{v.numerator}/{v.denominator}"

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.ravel())

    def to_integer(self) -> IntegerMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return IntegerMatrix(np.array([[int(v) for v in row] for row in self.tolist()],
                                      dtype=object).reshape(self.entries.shape), self.labels)


def matmul_exact(A, B):
    """Exact product of two integer or rational matrices."""
    a = A.entries if isinstance(A, _ExactMatrix) else np.asarray(A)
    b = B.entries if isinstance(B, _ExactMatrix) else np.asarray(B)
    if a.dtype == np.int64 and b.dtype == np.int64 and a.size and b.size:
        bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.shape[1]
        if bound < _INT64_SAFE:
            out = a @ b
            return IntegerMatrix(out) if not isinstance(A, RationalMatrix) else RationalMatrix(out)
    out = np.dot(np.asarray(a, dtype=object), np.asarray(b, dtype=object)) if a.size else \
        np.zeros((a.shape[0], b.shape[1]), dtype=object)
    if isinstance(A, RationalMatrix) or isinstance(B, RationalMatrix):
        return RationalMatrix(out)
    return IntegerMatrix(out)


def is_identity(M) -> bool:
    e = M.entries if isinstance(M, _ExactMatrix) else np.asarray(M)
    return bool(np.all(e == np.eye(e.shape[0], dtype=np.int64)))


# ---------------------------------------------------------------- constructors

def _require_simplicial(X, what: str) -> SimplicialComplex:
    if not isinstance(X, SimplicialComplex):
        raise UnsupportedInputError(f"{what} is defined for simplicial complexes only")
    return X


def counting_matrix(X: Complex) -> IntegerMatrix:
    """K(x, y) = |W^-(x) ∩ W^-(y)|; equals 2^{|x∩y|} - 1 on simplicial complexes."""
    if isinstance(X, SimplicialComplex):
        c = X.intersection_sizes()
        if c.size == 0 or c.max() <= 62:
            return IntegerMatrix((np.left_shift(1, c, dtype=np.int64) - 1) if c.size else c, X.labels())
        return IntegerMatrix(np.vectorize(lambda k: (1 << int(k)) - 1, otypes=[object])(c), X.labels())
    return core_intersection_matrix(X)


def core_intersection_matrix(X: Complex) -> IntegerMatrix:
    """|W^-(x) ∩ W^-(y)| by counting common faces (C C^T); works for CW complexes."""
    C = X.containment()
    return IntegerMatrix(C @ C.T, X.labels())


def star_intersection_matrix(X: Complex) -> np.ndarray:
    """|W^+(x) ∩ W^+(y)| = (C^T C)(x, y)."""
    C = X.containment()
    return C.T @ C


def connection_matrix(G: SimplicialComplex) -> IntegerMatrix:
    """L(x, y) = 1 iff x and y intersect."""
    G = _require_simplicial(G, "the connection matrix")
    return IntegerMatrix((G.intersection_sizes() > 0).astype(np.int64), G.labels())


def green_star_inverse(X: Complex) -> IntegerMatrix:
    """omega(x) omega(y) |W^+(x) ∩ W^+(y)|, the closed form of K^{-1}."""
    w = X.omegas()
    return IntegerMatrix(np.outer(w, w) * star_intersection_matrix(X), X.labels())


def connection_green_inverse(G: SimplicialComplex) -> IntegerMatrix:
    """omega(x) omega(y) chi(W^+(x) ∩ W^+(y)), the closed form of L^{-1}."""
    G = _require_simplicial(G, "the connection Green function")
    C = G.containment()
    w = G.omegas()
    chi = C.T @ (w[:, None] * C)
    return IntegerMatrix(np.outer(w, w) * chi, G.labels())


def _parameter(t) -> Fraction:
    t = Fraction(t)
    if t == 0:
        raise DomainError("the parameter t must be nonzero")
    return t


def parametrized_matrix(G: SimplicialComplex, t) -> RationalMatrix:
    """L_t(x, y) = 1 - f_{W^-(x) ∩ W^-(y)}(t) = 1 - (1+t)^{|x∩y|}.

    Pairs with empty intersection get 0. L_1 = -K and L_{-1} = L, and
    det L_t = (-1)^n t^{f'_G(1)}.
    """
    G = _require_simplicial(G, "L_t")
    t = _parameter(t)
    c = G.intersection_sizes()
    table = [Fraction(1) - (1 + t) ** k for k in range(int(c.max(initial=0)) + 1)]
    out = np.empty(c.shape, dtype=object)
    out.ravel()[:] = [table[k] for k in c.ravel().tolist()]
    return RationalMatrix(out, G.labels())


def parametrized_green(G: SimplicialComplex, t) -> RationalMatrix:
    """Exact inverse of L_t: omega(x) omega(y) (1 - f_{W^+(x) ∩ W^+(y)}(1/t)).

    Here f of a set of sets A is 1 + sum_{z in A} s^{|z|}. The entries sum to
    1 - f_G(1/t).
    """
    G = _require_simplicial(G, "g_t")
    t = _parameter(t)
    p, q = t.numerator, t.denominator
    C = G.containment()
    card = np.array([len(x) for x in G.simplices], dtype=np.int64)
    top = int(card.max(initial=0))
    # sum_z t^{-|z|} [x,y ⊆ z] = (sum_k q^k p^{top-k} S_k) / p^top, S_k = C_k^T C_k
    acc = np.zeros((G.n, G.n), dtype=object)
    for k in range(1, top + 1):
        Ck = C[card == k]
        if Ck.size:
            acc = acc + (Ck.T @ Ck).astype(object) * (q ** k * p ** (top - k))
    w = G.omegas()
    scale = p ** top
    out = np.empty(acc.shape, dtype=object)
    sign = np.outer(w, w).ravel().tolist()
    out.ravel()[:] = [Fraction(-s * int(v), scale) for s, v in zip(sign, acc.ravel().tolist())]
    return RationalMatrix(out, G.labels())


def supercharge(X: Complex) -> IntegerMatrix:
    """Q = K - K^{-1}, with K^{-1} from the Green-star formula."""
    return counting_matrix(X) - green_star_inverse(X)


def potential(X: Complex) -> list[int]:
    """V(x) = sum_y K^{-1}(x, y)."""
    return [sum(row) for row in green_star_inverse(X).tolist()]


def total_energy(X: Complex) -> int:
    return sum(potential(X))


MATRIX_BUILDERS = {
    "K": counting_matrix,
    "Kinv": green_star_inverse,
    "L": connection_matrix,
    "Linv": connection_green_inverse,
    "Q": supercharge,
}


def load_matrix(d: dict) -> _ExactMatrix:
    rational = any("/" in str(s) for row in d.get("entries", []) for s in row)
    return (RationalMatrix if rational else IntegerMatrix).from_json_dict(d)
