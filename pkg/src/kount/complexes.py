"""Finite abstract simplicial complexes and discrete CW complexes.

Simplices are sorted tuples of positive integer vertex labels. A
:class:`SimplicialComplex` keeps its simplices in canonical order (ascending
cardinality, then lexicographic), which fixes the row order of every matrix
built from it. A :class:`CWComplex` is a filtration of cells, each attached
to a set of earlier cells.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence, Union

import networkx as nx
import numpy as np

from kount._rng import SeededStream
from kount.errors import InputError

Rational = Union[int, Fraction]


def _check_label(v) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
        raise InputError(f"vertex labels must be positive integers, got {v!r}")
    return int(v)


class Simplex(tuple):
    """Nonempty sorted tuple of distinct positive integer labels."""

    def __new__(cls, vertices: Iterable[int]):
        vs = sorted({_check_label(v) for v in vertices})
        if not vs:
            raise InputError("a simplex must be nonempty")
        return super().__new__(cls, vs)

    @property
    def dim(self) -> int:
        return len(self) - 1

    def __repr__(self):
        return "{" + ",".join(map(str, self)) + "}"


def canonical_key(x: Sequence[int]):
    return (len(x), tuple(x))


def omega(x: Sequence) -> int:
    """Parity sign (-1)**dim(x); +1 on vertices, so chi(point) = 1."""
    return 1 if len(x) % 2 == 1 else -1


class SimplicialComplex:
    """Canonically ordered simplicial complex; immutable.

    ``SimplicialComplex(sets)`` verifies closure under nonempty subsets and
    raises :class:`InputError` otherwise. Use :func:`generate_closure` to
    build one from generators.
    """

    is_simplicial = True

    def __init__(self, sets: Iterable[Iterable[int]] = (), *, names: dict | None = None,
                 _trusted: bool = False):
        simplices = {Simplex(s) for s in sets}
        if not _trusted:
            for x in simplices:
                if len(x) > 1:
                    for face in combinations(x, len(x) - 1):
                        if face not in simplices:
                            raise InputError(f"set list is not closed: {face} missing below {x!r}")
        self.simplices: tuple[Simplex, ...] = tuple(sorted(simplices, key=canonical_key))
        self.index = {x: i for i, x in enumerate(self.simplices)}
        self.names = dict(names) if names else None

    @property
    def n(self) -> int:
        return len(self.simplices)

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __getitem__(self, i):
        return self.simplices[i]

    def __contains__(self, x):
        try:
            return Simplex(x) in self.index
        except InputError:
            return False

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"SimplicialComplex(n={self.n}, f={self.f_vector().counts})"

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(x[0] for x in self.simplices if len(x) == 1)

    def position(self, x) -> int:
        try:
            return self.index[Simplex(x)]
        except KeyError:
            raise InputError(f"{x!r} is not a simplex of this complex") from None

    def dims(self) -> np.ndarray:
        return np.array([len(x) - 1 for x in self.simplices], dtype=np.int64)

    def labels(self) -> list:
        return [list(x) for x in self.simplices]

    def omegas(self) -> np.ndarray:
        return np.array([omega(x) for x in self.simplices], dtype=np.int64)

    def vertex_incidence(self) -> np.ndarray:
        """0/1 matrix B with B[i, v] = 1 iff vertex v (column order = self.vertices) lies in simplex i."""
        col = {v: j for j, v in enumerate(self.vertices)}
        B = np.zeros((self.n, len(col)), dtype=np.int64)
        for i, x in enumerate(self.simplices):
            B[i, [col[v] for v in x]] = 1
        return B

    def intersection_sizes(self) -> np.ndarray:
        B = self.vertex_incidence()
        return B @ B.T

    def containment(self) -> np.ndarray:
        """C[x, z] = 1 iff z is a face of x, i.e. z in W^-(x)."""
        sizes = self.intersection_sizes()
        card = np.array([len(x) for x in self.simplices], dtype=np.int64)
        return (sizes == card[None, :]).astype(np.int64)

    def f_vector(self) -> "FVector":
        return f_vector(self)

    def to_json_dict(self) -> dict:
        d = {"sets": [list(x) for x in self.simplices]}
        if self.names:
            d["names"] = {str(k): v for k, v in sorted(self.names.items())}
        return d


@dataclass(frozen=True)
class FVector:
    """Simplex counts per dimension, f_0 .. f_d."""

    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def dimension(self) -> int:
        return len(self.counts) - 1

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.counts))

    def coefficients(self) -> tuple[int, ...]:
        """Coefficients of f_G(t) = 1 + sum_k f_k t^(k+1), ascending."""
        return (1,) + tuple(self.counts)

    def __call__(self, t: Rational) -> Fraction:
        t = Fraction(t)
        return Fraction(1) + sum((f * t ** (k + 1) for k, f in enumerate(self.counts)), Fraction(0))

    def derivative_at_one(self) -> int:
        return sum((k + 1) * f for k, f in enumerate(self.counts))

    def antiderivative(self, t: Rational) -> Fraction:
        """F_G(t) = t + sum_k f_k t^(k+2)/(k+2), so F_G(0) = 0."""
        t = Fraction(t)
        return t + sum((Fraction(f, k + 2) * t ** (k + 2) for k, f in enumerate(self.counts)),
                       Fraction(0))


def f_vector(X) -> FVector:
    dims = [len(x) - 1 for x in X.simplices] if isinstance(X, SimplicialComplex) \
        else [c.dim for c in X.cells]
    if not dims:
        return FVector(())
    counts = [0] * (max(dims) + 1)
    for d in dims:
        counts[d] += 1
    return FVector(tuple(counts))


def euler_characteristic(X) -> int:
    if isinstance(X, SimplicialComplex):
        return sum(omega(x) for x in X.simplices)
    return sum(1 if c.dim % 2 == 0 else -1 for c in X.cells)


def f_function_eval(G, t: Rational) -> Fraction:
    return f_vector(G)(t)


def f_of_sets(sets: Iterable[Sequence], t: Rational) -> Fraction:
    """f-function of an arbitrary set of sets: 1 + sum over members z of t^|z|."""
    t = Fraction(t)
    return Fraction(1) + sum((t ** len(z) for z in sets), Fraction(0))


# ---------------------------------------------------------------- construction

def generate_closure(generators: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of the generator sets, without the empty set."""
    out: set[tuple[int, ...]] = set()
    for g in generators:
        x = Simplex(g)
        if x in out:
            continue
        for k in range(1, len(x) + 1):
            out.update(combinations(x, k))
    return SimplicialComplex(out, _trusted=True)


def core(G: SimplicialComplex, x) -> list[Simplex]:
    """W^-(x): all simplices of G contained in x."""
    x = G[G.position(x)]
    xs = set(x)
    return [y for y in G.simplices if len(y) <= len(x) and xs.issuperset(y)]


def star(G: SimplicialComplex, x) -> list[Simplex]:
    """W^+(x): all simplices of G containing x."""
    x = G[G.position(x)]
    return [y for y in G.simplices if len(y) >= len(x) and set(y).issuperset(x)]


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph on positive integer vertices."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(self, vertices: Iterable[int] | int, edges: Iterable[Sequence[int]] = ()):
        """An integer ``vertices`` means 1..vertices and every edge must stay inside it.
        An empty vertex iterable takes the vertices from the edges."""
        if isinstance(vertices, (int, np.integer)) and not isinstance(vertices, bool):
            vertices = range(1, int(vertices) + 1)
        vs = sorted({_check_label(v) for v in vertices})
        seen = set()
        for e in edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} must have two endpoints")
            a, b = _check_label(e[0]), _check_label(e[1])
            if a == b:
                raise InputError(f"self-loop at vertex {a}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)
        outside = set().union(*seen) - set(vs) if seen else set()
        if outside and vs:
            raise InputError(f"edge endpoints {sorted(outside)} are not vertices")
        vs = sorted(set(vs).union(*seen)) if seen else vs
        object.__setattr__(self, "vertices", tuple(vs))
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def subgraph(self, vs: Iterable[int]) -> "Graph":
        vs = set(vs)
        return Graph(vs, [e for e in self.edges if e[0] in vs and e[1] in vs])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_json_dict(cls, d: dict) -> "Graph":
        try:
            return cls(d["vertices"], d.get("edges", []))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed graph JSON: {exc}") from None

    def to_json_dict(self) -> dict:
        vs = self.vertices
        count = vs == tuple(range(1, len(vs) + 1))
        return {"vertices": len(vs) if count else list(vs), "edges": [list(e) for e in self.edges]}


def whitney_complex(graph: Graph | Iterable[Sequence[int]]) -> SimplicialComplex:
    """Clique complex: maximal cliques (Bron-Kerbosch with pivoting), then closure."""
    if not isinstance(graph, Graph):
        graph = Graph((), graph)
    cliques = nx.find_cliques(graph.to_networkx()) if graph.vertices else []
    return generate_closure(cliques)


def _relabel(G: SimplicialComplex, shift: int) -> list[tuple[int, ...]]:
    return [tuple(v + shift for v in x) for x in G.simplices]


def join(G: SimplicialComplex, H: SimplicialComplex) -> SimplicialComplex:
    """G * H on disjoint vertex sets; H's labels are shifted past G's largest label."""
    shift = max(G.vertices, default=0)
    hs = _relabel(H, shift)
    sets = list(G.simplices) + hs + [x + y for x in G.simplices for y in hs]
    return SimplicialComplex(sets, _trusted=True)


def suspension(G: SimplicialComplex) -> SimplicialComplex:
    return join(G, generate_closure([[1], [2]]))


def standard_complex(kind: str, size: int) -> SimplicialComplex:
    """Named families: ``cycle`` n, ``complete`` n, ``star`` n, ``cross_polytope`` d.

    ``cross_polytope`` d is the boundary of the (d+1)-dimensional cross
    polytope (d=2 is the octahedron) on vertices 1..2(d+1), with antipodal
    pairs (i, 2d+3-i).
    """
    if isinstance(size, bool) or not isinstance(size, (int, np.integer)):
        raise InputError(f"size must be an integer, got {size!r}")
    kind = kind.replace("-", "_")
    if kind == "cycle":
        if size < 3:
            raise InputError("cycle needs at least 3 vertices")
        return generate_closure([(i, i % size + 1) for i in range(1, size + 1)])
    if kind == "complete":
        if size < 1:
            raise InputError("complete complex needs at least 1 vertex")
        return generate_closure([range(1, size + 1)])
    if kind == "star":
        if size < 1:
            raise InputError("star needs at least 1 spike")
        return generate_closure([(1, j) for j in range(2, size + 2)])
    if kind == "cross_polytope":
        if size < 0:
            raise InputError("cross polytope dimension must be >= 0")
        m = 2 * size + 3
        pairs = [(i, m - i) for i in range(1, size + 2)]
        facets = [[p[b >> k & 1] for k, p in enumerate(pairs)] for b in range(2 ** len(pairs))]
        return generate_closure(facets)
    raise InputError(f"unknown standard complex kind {kind!r}")


def random_complex(n: int, m: int, seed: int) -> SimplicialComplex:
    """Closure of m random generator sets on {1..n}.

    Each generator: draw k uniform in {1..n}, then k vertices uniform in
    {1..n} with replacement, deduplicated. Uses :class:`kount._rng.SeededStream`.
    """
    if n < 1 or m < 1:
        raise InputError("random_complex needs n >= 1 and m >= 1")
    rng = SeededStream(seed)
    gens = []
    for _ in range(m):
        k = rng.integer(1, n)
        gens.append({rng.integer(1, n) for _ in range(k)})
    return generate_closure(gens)


def random_graph(max_vertices: int, seed: int) -> Graph:
    """Vertex count uniform in {1..max_vertices}; each pair is an edge with probability 1/2."""
    rng = SeededStream(seed)
    v = rng.integer(1, max_vertices)
    edges = [(a, b) for a in range(1, v + 1) for b in range(a + 1, v + 1) if rng.integer(0, 1)]
    return Graph(v, edges)


def barycentric_refinement(G: SimplicialComplex) -> SimplicialComplex:
    """Order complex of the inclusion poset; simplex i of G becomes vertex i+1."""
    if G.n == 0:
        raise InputError("barycentric refinement of the empty complex")
    C = G.containment()
    up = [np.flatnonzero(C[:, i]).tolist() for i in range(G.n)]
    chains: list[tuple[int, ...]] = []

    def extend(chain):
        chains.append(chain)
        for j in up[chain[-1] - 1]:
            if j + 1 != chain[-1]:
                extend(chain + (j + 1,))

    for i in range(G.n):
        extend((i + 1,))
    return SimplicialComplex(chains, _trusted=True)


# ---------------------------------------------------------------- CW complexes

@dataclass(frozen=True)
class Cell:
    id: int
    attach: frozenset
    dim: int


class CWComplex:
    """Discrete CW complex: cells in build order, each attached to earlier cells.

    The closure W^-(x) of a cell is {x} together with the closures of its
    attachment cells; dim(x) is 0 for an empty attachment set, else one more
    than the largest attached dimension.
    """

    is_simplicial = False

    def __init__(self, cells: Iterable = ()):
        self.cells: tuple[Cell, ...] = ()
        self.index: dict[int, int] = {}
        self._closures: list[frozenset] = []
        built = []
        for c in cells:
            cid, attach = (c.id, c.attach) if isinstance(c, Cell) else (c[0], c[1])
            built.append(self._make_cell(cid, attach, built))
        self.cells = tuple(built)

    def _make_cell(self, cid, attach, built) -> Cell:
        if isinstance(cid, bool) or not isinstance(cid, (int, np.integer)):
            raise InputError(f"cell id must be an integer, got {cid!r}")
        cid = int(cid)
        if cid in self.index:
            raise InputError(f"duplicate cell id {cid}")
        attach = frozenset(int(a) for a in attach)
        missing = [a for a in attach if a not in self.index]
        if missing:
            raise InputError(f"cell {cid} attaches to unknown or later cells {sorted(missing)}")
        dim = 0 if not attach else 1 + max(built[self.index[a]].dim for a in attach)
        closure = frozenset({cid}).union(*(self._closures[self.index[a]] for a in attach))
        self.index[cid] = len(built)
        self._closures.append(closure)
        return Cell(cid, attach, dim)

    @property
    def n(self) -> int:
        return len(self.cells)

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        return isinstance(other, CWComplex) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"CWComplex(n={self.n}, f={f_vector(self).counts})"

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.cells]

    def closure(self, cid: int) -> frozenset:
        try:
            return self._closures[self.index[cid]]
        except KeyError:
            raise InputError(f"unknown cell id {cid}") from None

    def dims(self) -> np.ndarray:
        return np.array([c.dim for c in self.cells], dtype=np.int64)

    def labels(self) -> list:
        return self.ids

    def omegas(self) -> np.ndarray:
        return np.where(self.dims() % 2 == 0, 1, -1).astype(np.int64)

    def containment(self) -> np.ndarray:
        C = np.zeros((self.n, self.n), dtype=np.int64)
        for i, cl in enumerate(self._closures):
            C[i, [self.index[z] for z in cl]] = 1
        return C

    def f_vector(self) -> FVector:
        return f_vector(self)

    @classmethod
    def from_simplicial(cls, G: SimplicialComplex) -> "CWComplex":
        """Embed G with cell ids 1..n in canonical order and attach(x) = facets of x."""
        cells = []
        for i, x in enumerate(G.simplices):
            facets = [G.index[f] + 1 for f in combinations(x, len(x) - 1)] if len(x) > 1 else []
            cells.append((i + 1, facets))
        return cls(cells)

    def to_json_dict(self) -> dict:
        return {"cells": [{"id": c.id, "attach": sorted(c.attach)} for c in self.cells]}


def attach_cell(cw, attach_ids: Iterable[int], cell_id: int | None = None) -> CWComplex:
    """New CW complex with one more cell glued to ``attach_ids``."""
    if isinstance(cw, SimplicialComplex):
        cw = CWComplex.from_simplicial(cw)
    if cell_id is None:
        cell_id = max(cw.ids, default=0) + 1
    return CWComplex(list(cw.cells) + [(cell_id, list(attach_ids))])


# ---------------------------------------------------------------- identities

def _sphere_complex(graph: Graph, v: int, keep=None) -> SimplicialComplex:
    nb = graph.neighbors(v)
    if keep is not None:
        nb = {u for u in nb if keep(u)}
    return whitney_complex(graph.subgraph(nb))


def gauss_bonnet_identity(graph: Graph, t: Rational) -> Fraction:
    """f_G(t) - 1 - sum_x F_{S(x)}(t) over vertices x; zero by parametrized Gauss-Bonnet."""
    G = whitney_complex(graph)
    rhs = sum((f_vector(_sphere_complex(graph, v)).antiderivative(t) for v in graph.vertices),
              Fraction(0))
    return f_function_eval(G, t) - 1 - rhs


def poincare_hopf_identity(graph: Graph, g: dict, t: Rational) -> Fraction:
    """f_G(t) - 1 - t sum_x f_{S_g(x)}(t); zero by parametrized Poincare-Hopf.

    ``g`` maps vertices to comparable values and must differ on every edge.
    """
    for a, b in graph.edges:
        if g[a] == g[b]:
            raise InputError(f"g is not locally injective on edge ({a}, {b})")
    t = Fraction(t)
    G = whitney_complex(graph)
    total = sum((f_function_eval(_sphere_complex(graph, v, lambda u, v=v: g[u] < g[v]), t)
                 for v in graph.vertices), Fraction(0))
    return f_function_eval(G, t) - 1 - t * total


# ---------------------------------------------------------------- JSON I/O

def _relabel_strings(groups):
    names = sorted({v for grp in groups for v in grp if isinstance(v, str)})
    if not names:
        return groups, None
    if any(not isinstance(v, str) for grp in groups for v in grp):
        raise InputError("vertex labels must be all integers or all strings")
    code = {s: i + 1 for i, s in enumerate(names)}
    return [[code[v] for v in grp] for grp in groups], {i + 1: s for i, s in enumerate(names)}


def complex_from_json_dict(d: dict):
    """Parse complex JSON: ``generators``, ``sets`` (closure-verified) or CW ``cells``."""
    if not isinstance(d, dict):
        raise InputError("complex JSON must be an object")
    try:
        if "cells" in d:
            return CWComplex((c["id"], c.get("attach", [])) for c in d["cells"])
        for key in ("generators", "sets"):
            if key in d:
                if not isinstance(d[key], list) or not all(isinstance(g, list) for g in d[key]):
                    raise InputError(f"{key!r} must be a list of lists")
                groups = [list(g) for g in d[key]]
                if any(len(g) == 0 for g in groups):
                    raise InputError(f"empty set in {key!r}")
                groups, names = _relabel_strings(groups)
                if "names" in d and names is None:
                    names = {int(k): v for k, v in d["names"].items()}
                G = generate_closure(groups) if key == "generators" else SimplicialComplex(groups)
                G.names = names
                return G
    except (TypeError, KeyError, AttributeError) as exc:
        raise InputError(f"malformed complex JSON: {exc!r}") from None
    raise InputError("complex JSON needs 'generators', 'sets' or 'cells'")


def complex_to_json_dict(X) -> dict:
    return X.to_json_dict()


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from None


def load_complex(path):
    return complex_from_json_dict(load_json(path))


def load_graph(path) -> Graph:
    return Graph.from_json_dict(load_json(path))


def dump_complex(X) -> str:
    return json.dumps(X.to_json_dict()) + "\n"
