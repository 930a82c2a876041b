"""Command-line interface: ``kount gen|matrix|verify|zeta|spectrum|charpoly|ring``.

Exit codes: 0 success / all checks pass, 1 a theorem check or exactness
assertion failed, 2 malformed input or refused size.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from kount import complexes as cx
from kount import exact, matrices as mx, ring, spectra
from kount.errors import InputError, KountError

DEFAULT_TS = ("2", "-2", "1/3")


# ---------------------------------------------------------------- complex sources

def _add_source(p: argparse.ArgumentParser, positional: bool = True):
    g = p.add_argument_group("complex source (exactly one)")
    if positional:
        g.add_argument("input", nargs="?", help="complex JSON file")
    g.add_argument("--in", dest="in_path", metavar="PATH", help="complex JSON file")
    g.add_argument("--star", type=int, metavar="N")
    g.add_argument("--cycle", type=int, metavar="N")
    g.add_argument("--complete", type=int, metavar="N")
    g.add_argument("--cross-polytope", type=int, metavar="D", help="boundary sphere of dimension D")
    g.add_argument("--generators", metavar="JSON", help='e.g. "[[1,2,3],[3,4]]"')
    g.add_argument("--random", type=int, nargs=2, metavar=("N", "M"),
                   help="closure of M random subsets of 1..N")
    g.add_argument("--whitney", metavar="GRAPH", help="graph JSON; clique complex")
    t = p.add_argument_group("transforms (applied in this order)")
    t.add_argument("--suspend", type=int, default=0, metavar="K", help="suspend K times")
    t.add_argument("--barycentric", type=int, default=0, metavar="K", help="refine K times")
    t.add_argument("--attach-cell", action="append", default=[], metavar="IDS",
                   help="glue a cell to comma-separated cell ids, or 'top' for all top cells")
    p.add_argument("--seed", type=int, default=0)


def build_complex(args):
    path = getattr(args, "input", None) or args.in_path
    chosen = [k for k, v in [("input", path), ("star", args.star), ("cycle", args.cycle),
                             ("complete", args.complete), ("cross_polytope", args.cross_polytope),
                             ("generators", args.generators), ("random", args.random),
                             ("whitney", args.whitney)] if v is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one complex source "
                         f"(got {', '.join(chosen) if chosen else 'none'})")
    kind = chosen[0]
    if kind == "input":
        X = cx.load_complex(path)
    elif kind in ("star", "cycle", "complete", "cross_polytope"):
        X = cx.standard_complex(kind, getattr(args, kind))
    elif kind == "generators":
        try:
            gens = json.loads(args.generators)
        except json.JSONDecodeError as exc:
            raise InputError(f"--generators is not JSON: {exc}") from None
        X = cx.complex_from_json_dict({"generators": gens})
    elif kind == "random":
        X = cx.random_complex(args.random[0], args.random[1], args.seed)
    else:
        X = cx.whitney_complex(cx.load_graph(args.whitney))
    if args.suspend or args.barycentric:
        if not isinstance(X, cx.SimplicialComplex):
            raise InputError("suspension and refinement need a simplicial complex")
        for _ in range(args.suspend):
            X = cx.suspension(X)
        for _ in range(args.barycentric):
            X = cx.barycentric_refinement(X)
    for spec in args.attach_cell:
        if spec == "top":
            d = X.dims()
            ids = [lab for lab, k in zip(_cell_ids(X), d) if k == d.max()]
        else:
            try:
                ids = [int(v) for v in spec.split(",") if v.strip()]
            except ValueError:
                raise InputError(f"--attach-cell expects comma-separated ids, got {spec!r}") from None
        X = cx.attach_cell(X, ids)
    return X


def _cell_ids(X):
    return X.ids if isinstance(X, cx.CWComplex) else list(range(1, X.n + 1))


def _summary(X) -> dict:
    f = cx.f_vector(X)
    return {"kind": "simplicial" if isinstance(X, cx.SimplicialComplex) else "cw",
            "n": X.n, "f_vector": list(f.counts), "euler_characteristic": f.euler_characteristic}


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_t(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--t expects a rational p/q, got {s!r}") from None


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    X = build_complex(args)
    _emit(cx.dump_complex(X), args.out)
    s = _summary(X)
    print(f"n={s['n']} f={tuple(s['f_vector'])} chi={s['euler_characteristic']}",
          file=sys.stdout if args.out else sys.stderr)
    return 0


class ExactnessFailure(Exception):
    pass


def _matrix(X, which: str, t):
    if which in mx.MATRIX_BUILDERS:
        M = mx.MATRIX_BUILDERS[which](X)
    elif which == "Lt":
        M = mx.parametrized_matrix(X, t)
    elif which == "gt":
        M = mx.parametrized_green(X, t)
    else:  # argparse restricts choices
        raise InputError(f"unknown matrix {which!r}")
    # closed-form inverses are checked against their partner before emission
    partner = {"Kinv": lambda: mx.counting_matrix(X), "Linv": lambda: mx.connection_matrix(X),
               "gt": lambda: mx.parametrized_matrix(X, t)}.get(which)
    if partner is not None and not mx.is_identity(mx.matmul_exact(partner(), M)):
        raise ExactnessFailure(f"{which} formula does not invert its matrix on this input")
    return M


def cmd_matrix(args) -> int:
    X = build_complex(args)
    t = _parse_t(args.t) if args.t is not None else None
    if args.which in ("Lt", "gt") and t is None:
        raise InputError(f"--which {args.which} needs --t")
    try:
        M = _matrix(X, args.which, t)
    except ExactnessFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(M.to_csv() if args.format == "csv" else M.to_json(), args.out)
    return 0


@dataclass
class Check:
    name: str
    passed: bool
    exact: bool = True
    residual: float | None = None
    tol: float | None = None
    detail: str = ""

    def to_json_dict(self) -> dict:
        d = {"name": self.name, "pass": self.passed, "exact": self.exact}
        if not self.exact:
            d.update(residual=self.residual, tol=self.tol)
        if self.detail:
            d["detail"] = self.detail
        return d

    def line(self) -> str:
        tail = f"  residual={self.residual:.3e} tol={self.tol:.3e}" if not self.exact else ""
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}{tail}{extra}"


@dataclass
class VerifyReport:
    summary: dict
    checks: list[Check] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json_dict(self, timings: bool = False) -> dict:
        d = {"complex": self.summary, "pass": self.passed,
             "checks": [c.to_json_dict() for c in self.checks]}
        if timings:
            d["timings"] = self.timings
        return d


def run_verify(X, samples: int = 100, tol: float | None = None, seed: int = 0,
               ts=DEFAULT_TS) -> VerifyReport:
    """All theorem checks for one complex, in a fixed order."""
    rep = VerifyReport(_summary(X))
    n = X.n

    def timed(name, fn):
        t0 = time.perf_counter()
        out = fn()
        rep.timings[name] = round(time.perf_counter() - t0, 6)
        return out

    K = timed("K", lambda: mx.counting_matrix(X))
    Kinv = timed("Kinv", lambda: mx.green_star_inverse(X))
    det = timed("det", lambda: exact.det_exact(K))
    rep.checks.append(Check("unimodular", det == 1, detail=f"det K = {det}"))
    prod = timed("green_star", lambda: mx.matmul_exact(K, Kinv))
    rep.checks.append(Check("green_star", mx.is_identity(prod)))
    minors = timed("minors", lambda: exact.leading_minors(K))
    rep.checks.append(Check("positive_definite", all(m > 0 for m in minors)))
    energy = Kinv.total()
    rep.checks.append(Check("energy", energy == n, detail=f"sum K^-1 = {energy}, n = {n}"))
    if n <= exact.CHARPOLY_LIMIT:
        p = timed("charpoly", lambda: exact.char_poly(K))
        rep.checks.append(Check("palindrome", exact.palindrome_check(p)))
    if n:
        spec = timed("spectrum", lambda: spectra.counting_spectrum(X))
        kappa = spec.condition_number()
        r = spectra.spectral_symmetry_residual(spec)
        rep.checks.append(Check("reciprocal_pairing", r < 1e-7 * kappa, False, r, 1e-7 * kappa))
        fe_tol = tol if tol is not None else 1e-6 * n
        r = timed("functional_equation",
                  lambda: spectra.functional_equation_residual(spec, samples, seed))
        rep.checks.append(Check("functional_equation", r < fe_tol, False, r, fe_tol))
    if isinstance(X, cx.SimplicialComplex):
        fprime = cx.f_vector(X).derivative_at_one()
        for ts_ in ts:
            t = _parse_t(ts_) if isinstance(ts_, str) else Fraction(ts_)
            Lt = mx.parametrized_matrix(X, t)
            gt = mx.parametrized_green(X, t)
            rep.checks.append(Check(f"Lt_inverse[t={t}]", mx.is_identity(mx.matmul_exact(Lt, gt))))
            d = exact.det_exact(Lt)
            rep.checks.append(Check(f"Lt_det[t={t}]", d == (-1) ** n * t ** fprime,
                                    detail=f"det = {d}"))
            total = gt.total()
            rep.checks.append(Check(f"gt_energy[t={t}]", total == 1 - cx.f_function_eval(X, 1 / t),
                                    detail="sum g_t = 1 - f_G(1/t)"))
    return rep


def cmd_verify(args) -> int:
    X = build_complex(args)
    rep = run_verify(X, args.samples, args.tol, args.seed, args.t or DEFAULT_TS)
    if args.format == "json":
        _emit(json.dumps(rep.to_json_dict(args.timings), indent=1) + "\n", args.out)
    else:
        s = rep.summary
        lines = [f"{s['kind']} complex: n={s['n']} f={tuple(s['f_vector'])} "
                 f"chi={s['euler_characteristic']}"]
        lines += [c.line() for c in rep.checks]
        if args.timings:
            lines += [f"time {k}: {v:.6f}s" for k, v in rep.timings.items()]
        _emit("\n".join(lines) + "\n", args.out)
    bad = rep.first_failure()
    if bad is not None:
        print(f"verify failed: {bad.name}", file=sys.stderr)
        return 1
    return 0


def cmd_zeta(args) -> int:
    X = build_complex(args)
    spec = spectra.counting_spectrum(X)
    grid = spectra.zeta_grid(spec, args.re_min, args.re_max, args.im_min, args.im_max, args.step)
    _emit(grid.to_csv(), args.out)
    return 0


def cmd_spectrum(args) -> int:
    X = build_complex(args)
    if args.which == "K":
        spec = spectra.counting_spectrum(X, tol=args.tol)
    elif args.which == "Q":
        spec = spectra.eigenvalues_sym(mx.supercharge(X), tol=args.tol)
    else:
        spec = spectra.eigenvalues_sym(mx.connection_matrix(X), tol=args.tol)
    d = spec.to_json_dict()
    if args.dos:
        edges, mass = spectra.density_of_states(spec, args.dos, args.scale)
        d["density"] = {"scale": args.scale, "edges": edges.tolist(), "mass": mass.tolist()}
    _emit(json.dumps(d) + "\n", args.out)
    return 0


def cmd_charpoly(args) -> int:
    X = build_complex(args)
    M = {"K": mx.counting_matrix, "L": mx.connection_matrix, "Q": mx.supercharge}[args.which](X)
    p = exact.char_poly(M, method=args.method)
    d = p.to_json_dict()
    d["palindromic"] = exact.palindrome_check(p)
    _emit(json.dumps(d) + "\n", args.out)
    return 0


def cmd_ring(args) -> int:
    G, H = cx.load_complex(args.a), cx.load_complex(args.b)
    for X in (G, H):
        if not isinstance(X, cx.SimplicialComplex):
            raise InputError("ring operations need simplicial complexes")
    if args.op == "sum":
        _emit(ring.direct_sum(mx.counting_matrix(G), mx.counting_matrix(H)).to_json(), args.out)
        return 0
    if args.op == "kron":
        _emit(ring.kronecker(mx.counting_matrix(G), mx.counting_matrix(H)).to_json(), args.out)
        return 0
    if args.op == "product":
        prod = ring.product_counting_matrix(G, H)
        kron = ring.kronecker(mx.counting_matrix(G), mx.counting_matrix(H))
        d = ring.first_difference(prod, kron)
        diffs = 0 if d is None else int(np.sum(prod.entries != kron.entries))
        report = ring.RingReport("product_vs_kronecker", d is None, d).to_json_dict()
        report["differing_entries"] = diffs
        _emit(json.dumps(report) + "\n", args.out)
        return 0
    reports = ring.representation_check(G, H)
    _emit("".join(r.to_json() for r in reports), args.out)
    return 0 if ring.required_checks_pass(reports) else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kount", description="Counting matrices of simplicial and CW complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write canonical complex JSON")
    _add_source(s)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("matrix", help="emit an exact matrix")
    _add_source(s)
    s.add_argument("--which", choices=["K", "L", "Kinv", "Linv", "Lt", "gt", "Q"], default="K")
    s.add_argument("--t", help="rational parameter p/q for Lt and gt")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_matrix)

    s = sub.add_parser("verify", help="run every theorem check")
    _add_source(s)
    s.add_argument("--samples", type=int, default=100, help="functional-equation samples")
    s.add_argument("--tol", type=float, help="functional-equation tolerance (default 1e-6*n)")
    s.add_argument("--t", action="append", help="L_t sample (repeatable; default 2, -2, 1/3)")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--timings", action="store_true")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("zeta", help="zeta-function grid as CSV")
    _add_source(s)
    s.add_argument("--re-min", type=float, default=-4.0)
    s.add_argument("--re-max", type=float, default=4.0)
    s.add_argument("--im-min", type=float, default=0.0)
    s.add_argument("--im-max", type=float, default=30.0)
    s.add_argument("--step", type=float, default=0.05)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_zeta)

    s = sub.add_parser("spectrum", help="eigenvalues as JSON")
    _add_source(s)
    s.add_argument("--which", choices=["K", "Q", "L"], default="K")
    s.add_argument("--tol", type=float, default=spectra.DEFAULT_TOL)
    s.add_argument("--dos", type=int, metavar="BINS", help="add a density-of-states histogram")
    s.add_argument("--scale", choices=["linear", "log"], default="log")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_spectrum)

    s = sub.add_parser("charpoly", help="exact characteristic polynomial det(M - xI)")
    _add_source(s)
    s.add_argument("--which", choices=["K", "L", "Q"], default="K")
    s.add_argument("--method", choices=["auto", "interpolation", "modular"], default="auto")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_charpoly)

    s = sub.add_parser("ring", help="direct sum / Kronecker / product checks on two complexes")
    op = s.add_mutually_exclusive_group(required=True)
    for name in ("sum", "kron", "product", "check"):
        op.add_argument(f"--{name}", dest="op", action="store_const", const=name)
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_ring)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (KountError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RecursionError:
        print("error: input too deeply nested", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
