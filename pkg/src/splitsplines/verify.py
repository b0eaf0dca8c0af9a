"""Reproduction suite: every dimension claim checked by independent routes.

Each criterion is a function returning a :class:`CriterionResult`.  The
closed forms are looked up through a ``formulas`` namespace so that a
deliberately broken formula can be injected to test the harness itself.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Callable, Iterable

from . import formulas as _formulas
from .algebra import FrameComplex, build_complex, euler_dim, homology_graded_dims
from .fixtures import builtin, construction, random_mesh, spoke_split
from .linalg import QMatrix, kernel_basis, rank, row_space_equal
from .oracle import is_spline, spline_basis, spline_dim
from .refine import double_alfeld, facet_split, is_split, pyramid, standard_simplex, verify_additivity

__all__ = ["CriterionResult", "CRITERIA", "run_suite", "degree_bound"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool = True
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, what: str) -> bool:
        self.checks += 1
        if not ok:
            self.passed = False
            self.failures.append(what)
        return ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number:>2}. {self.name} ({self.checks} checks, {self.seconds:.1f}s)"
        if self.failures:
            shown = "; ".join(self.failures[:3])
            more = f" (+{len(self.failures) - 3} more)" if len(self.failures) > 3 else ""
            text += f": {shown}{more}"
        return text

    def as_dict(self) -> dict:
        return dict(number=self.number, name=self.name, passed=self.passed, checks=self.checks,
                    failures=self.failures, seconds=round(self.seconds, 3))


def degree_bound(k: int, r: int) -> int:
    """Top degree used when certifying freeness and additivity."""
    return 2 * (r + 1) * (k + 1)


def _want(ks, k):
    return ks is None or k in ks


def alfeld_grid(res, F, ks):
    grid = {2: (range(4), range(9)), 3: (range(3), range(7))}
    for k, (rs, ds) in grid.items():
        if not _want(ks, k):
            continue
        A = builtin("alfeld", k)
        for r, d in itertools.product(rs, ds):
            got = spline_dim(A, r, d, method="auto")
            want = F.binom_safe(d + k, k) + F.A_formula(k, d, r)
            res.check(got == want, f"A(T_{k}) r={r} d={d}: oracle {got} != formula {want}")


def spot_values(res, F, ks):
    cases = [("alfeld", 2, 1, 3, 12), ("facet", 2, 1, 2, 9), ("double-alfeld", 2, 1, 3, 18)]
    cases += [("alfeld", k, 0, 1, k + 2) for k in (2, 3, 4)]
    for scheme, k, r, d, want in cases:
        if not _want(ks, k):
            continue
        got = spline_dim(builtin(scheme, k), r, d, method="auto")
        f = F.scheme_dim(scheme, k, d, r)
        res.check(got == want, f"{scheme} k={k} r={r} d={d}: oracle {got} != {want}")
        res.check(f == want, f"{scheme} k={k} r={r} d={d}: formula {f} != {want}")


def facet_and_double(res, F, ks):
    grid = {2: (range(3), range(8)), 3: (range(2), range(6))}
    for k, (rs, ds) in grid.items():
        if not _want(ks, k):
            continue
        for scheme, fn in (("facet", F.dim_facet), ("double-alfeld", F.dim_double_alfeld)):
            mesh = builtin(scheme, k)
            for r, d in itertools.product(rs, ds):
                got, want = spline_dim(mesh, r, d, method="auto"), fn(k, d, r)
                res.check(got == want, f"{scheme}(T_{k}) r={r} d={d}: oracle {got} != formula {want}")


def pyramid_check(res, F, ks):
    if not _want(ks, 3):
        return
    P = pyramid(3)
    for r, d in itertools.product(range(3), range(6)):
        got, want = spline_dim(P, r, d, method="auto"), F.dim_pyramid(3, d, r)
        res.check(got == want, f"P_3 r={r} d={d}: oracle {got} != formula {want}")
    for r, d in itertools.product(range(4), range(13)):
        res.check(F.pyramid_sum_identity(3, d, r), f"cone sum identity fails at r={r} d={d}")


def three_routes(res, F, ks):
    fixtures = [("alfeld", 2), ("alfeld", 3), ("facet", 2), ("facet", 3), ("double-alfeld", 2),
                ("pyramid", 3)]
    small = {2: 8, 3: 6}
    for name, k in fixtures:
        if not _want(ks, k):
            continue
        mesh = builtin(name, k)
        for r in range(3):
            free = True
            for d in range(degree_bound(k, r) + 1):
                h = homology_graded_dims(mesh, r, d, method="frame")
                if any(h[:k]):
                    free = False
                    res.check(False, f"{name}(T_{k}) r={r} d={d}: lower homology {h[:k]}")
            if not free:
                continue
            for d in range(small[k] + 1):
                e = euler_dim(mesh, r, d)
                a = spline_dim(mesh, r, d, "affine", method="dense")
                c = spline_dim(mesh, r, d, "cone", method="dense")
                res.check(a == c == e, f"{name}(T_{k}) r={r} d={d}: affine {a}, cone {c}, euler {e}")


def split_predicate(res, F, ks):
    if not _want(ks, 2):
        return
    aligned, generic = spoke_split(True), spoke_split(False)
    inner = set(generic.coarse.points(generic.cell))
    for r in (1, 2, 3):
        ok, wit = is_split(aligned, r)
        res.check(ok, f"aligned r={r}: not split, witnesses {_pts(aligned, wit)}")
    ok, wit = is_split(generic, 1)
    res.check(ok, f"generic r=1: not split, witnesses {_pts(generic, wit)}")
    for r in (2, 3):
        ok, wit = is_split(generic, r)
        res.check(not ok, f"generic r={r}: unexpectedly split")
        got = {tuple(p) for g in wit for p in generic.fine.points(g)}
        res.check(got == inner, f"generic r={r}: witnesses {sorted(_fmt(p) for p in got)} "
                                f"!= inner triangle {sorted(_fmt(p) for p in inner)}")


def _fmt(p):
    return "(" + ",".join(str(x) for x in p) + ")"


def _pts(rec, faces):
    return [[_fmt(p) for p in rec.fine.points(g)] for g in faces]


def additivity(res, F, ks):
    for scheme, k in itertools.product(("facet", "double-alfeld"), (2, 3)):
        if not _want(ks, k):
            continue
        for rec in construction(scheme, k):
            for r in range(3):
                rep = verify_additivity(rec, r, range(degree_bound(k, r) + 1))
                res.check(rep.split, f"{scheme} k={k} {rec.label} r={r}: not split")
                for row in rep.failures():
                    res.check(False, f"{scheme} k={k} {rec.label} r={r} d={row['d']}: {row}")
                res.checks += len(rep.rows)


def partial_splits(res, F, ks):
    r = 1
    for k in (2, 3):
        if not _want(ks, k):
            continue
        T = standard_simplex(k)
        for n in range(k + 1):
            for S in itertools.combinations(range(k + 1), n):
                fm = facet_split(T, subset=S)[-1].fine
                dm = double_alfeld(T, subset=S)[-1].fine
                for d in range(7):
                    got, want = spline_dim(fm, r, d, method="auto"), F.dim_partial_facet(k, d, r, n)
                    res.check(got == want, f"facet k={k} S={S} d={d}: oracle {got} != formula {want}")
                    got, want = spline_dim(dm, r, d, method="auto"), F.dim_partial_double_alfeld(k, d, r, n)
                    res.check(got == want, f"double k={k} S={S} d={d}: oracle {got} != formula {want}")


def generator_degrees(res, F, ks):
    cases = [(2, builtin("alfeld", 2), 1, {0: 1, 2: 2}), (3, pyramid(3), 1, {0: 1, 3: 2})]
    for k, mesh, r, want in cases:
        if not _want(ks, k):
            continue
        h = [spline_dim(mesh, r, d, method="auto") for d in range(degree_bound(k, r) + 1)]
        got = F.infer_generator_degrees(h, k)
        res.check(got == want, f"k={k} r={r}: generators {got} != {want} (h={h[:6]}...)")


def properties(res, F, ks):
    meshes = []
    for k in (2, 3):
        if _want(ks, k):
            meshes += [builtin(s, k) for s in ("alfeld", "facet", "double-alfeld")]
    if _want(ks, 3):
        meshes.append(pyramid(3))
    for mesh in meshes:
        for r in range(3):
            for d in range(7 if mesh.k == 2 else 5):
                res.check(build_complex(mesh, r).check_d2(d), f"{mesh!r} r={r} d={d}: d^2 != 0 (monomial)")
                res.check(FrameComplex(mesh, r, d).check_d2(), f"{mesh!r} r={r} d={d}: d^2 != 0 (frame)")
    rng = random.Random(20240601)
    for i in range(20):
        k = 2 if ks is None or 2 in ks else 3
        if ks is None and i % 4 == 3:
            k = 3
        mesh = random_mesh(rng.randrange(10**6), k)
        for r, d in itertools.product(range(2), range(4 if k == 2 else 3)):
            a, c = spline_dim(mesh, r, d, "affine"), spline_dim(mesh, r, d, "cone")
            res.check(a == c, f"random mesh {i} r={r} d={d}: affine {a} != cone {c}")
        for mode in ("affine", "cone"):
            for f in spline_basis(mesh, 1, 2, mode):
                res.check(is_spline(mesh, 1, f), f"random mesh {i}: basis element fails smoothness ({mode})")
    for _ in range(50):
        m, n = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        M = QMatrix(rows)
        ker = kernel_basis(M)
        res.check(rank(M) + len(ker) == n, "rank + nullity != number of columns")
        res.check(all(all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows) for v in ker),
                  "kernel vector not annihilated")
        coeffs = [[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)]
        mix = [[sum(c[i] * rows[i][j] for i in range(m)) for j in range(n)] for c in coeffs]
        res.check(row_space_equal(M, QMatrix(rows + mix)), "row space changed by adding combinations")


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "Alfeld formula vs oracle grid", alfeld_grid),
    (2, "spot values", spot_values),
    (3, "facet and double Alfeld formulas vs oracle", facet_and_double),
    (4, "pyramid formula and cone-sum identity", pyramid_check),
    (5, "oracle, Euler characteristic and homology agree", three_routes),
    (6, "split predicate on the spoke fixtures", split_predicate),
    (7, "additivity along the iterated constructions", additivity),
    (8, "partial splits", partial_splits),
    (9, "generator degree inference", generator_degrees),
    (10, "property suites", properties),
]


def formulas_namespace(**overrides) -> SimpleNamespace:
    """The formula functions, with optional replacements and derived functions rebuilt."""
    base = {name: getattr(_formulas, name) for name in _formulas.__all__}
    base.update(overrides)
    ns = SimpleNamespace(**base)
    binom, A, P = ns.binom_safe, ns.A_formula, ns.P_formula
    derived = {
        "dim_alfeld": lambda k, d, r: binom(d + k, k) + A(k, d, r),
        "dim_pyramid": lambda k, d, r: binom(d + k, k) + P(k, d, r),
        "dim_facet": lambda k, d, r: binom(d + k, k) + A(k, d, r) + (k + 1) * P(k, d, r),
        "dim_double_alfeld": lambda k, d, r: binom(d + k, k) + (k + 2) * A(k, d, r),
        "dim_partial_facet": lambda k, d, r, n: binom(d + k, k) + A(k, d, r) + n * P(k, d, r),
        "dim_partial_double_alfeld": lambda k, d, r, n: binom(d + k, k) + (1 + n) * A(k, d, r),
    }
    for name, fn in derived.items():
        if name not in overrides:
            setattr(ns, name, fn)
    schemes = {"simplex": lambda k, d, r: binom(d + k, k), "alfeld": ns.dim_alfeld,
               "pyramid": ns.dim_pyramid, "facet": ns.dim_facet, "double-alfeld": ns.dim_double_alfeld}
    ns.scheme_dim = lambda s, k, d, r: schemes[s](k, d, r)
    ns.pyramid_sum_identity = lambda k, d, r: (
        sum(binom(i + k - 1, k - 1) + A(k - 1, i, r) for i in range(d + 1)) == ns.dim_pyramid(k, d, r))
    return ns


def run_one(number: int, ks: Iterable[int] | None = None, formulas: SimpleNamespace | None = None) -> CriterionResult:
    num, name, fn = next(c for c in CRITERIA if c[0] == number)
    res = CriterionResult(num, name)
    start = time.perf_counter()
    fn(res, formulas or formulas_namespace(), None if ks is None else set(ks))
    res.seconds = time.perf_counter() - start
    return res


def run_suite(ks: Iterable[int] | None = None, only: Iterable[int] | None = None,
              formulas: SimpleNamespace | None = None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for number, _, _ in CRITERIA:
        if only is not None and number not in set(only):
            continue
        res = run_one(number, ks, formulas)
        if echo:
            echo(res.line())
        out.append(res)
    return out
