"""Simplicial complexes in R^k with exact rational coordinates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, wraps
from typing import Iterable, Sequence


from .linalg import as_fraction, kernel_basis, rref

__all__ = [
    "Point",
    "Simplex",
    "AffineForm",
    "SimplicialComplex",
    "ValidationReport",
    "MeshError",
    "barycenter",
    "barycentric_coordinates",
    "affine_form_through",
    "line_hyperplane_intersection",
    "simplex_volume",
    "points_contain",
]

Point = tuple[Fraction, ...]
Simplex = tuple[int, ...]


class MeshError(ValueError):
    """Raised for degenerate or inconsistent geometric input."""


def as_point(coords: Iterable) -> Point:
    return tuple(as_fraction(c) for c in coords)


@dataclass(frozen=True)
class AffineForm:
    """``coefficients . x + constant``, scaled so the first nonzero coefficient is 1."""

    coefficients: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coefficients)
        const = as_fraction(self.constant)
        lead = next((c for c in coeffs if c != 0), None)
        if lead is None:
            raise MeshError("affine form has no linear part")
        if lead != 1:
            coeffs = tuple(c / lead for c in coeffs)
            const = const / lead
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "constant", const)

    def __call__(self, p: Sequence) -> Fraction:
        return sum((c * as_fraction(x) for c, x in zip(self.coefficients, p)), self.constant)

    def __str__(self):
        names = [f"x{i + 1}" for i in range(len(self.coefficients))]
        if len(names) <= 3:
            names = ["x", "y", "z"][:len(names)]
        return format_linear(self.coefficients, names, self.constant)


def format_linear(coeffs, names, constant=0) -> str:
    out = ""
    for c, n in list(zip(coeffs, names)) + [(constant, "")]:
        if not c:
            continue
        mag = abs(c)
        term = n if (mag == 1 and n) else (f"{mag}*{n}" if n else str(mag))
        if not out:
            out = term if c > 0 else f"-{term}"
        else:
            out += (" + " if c > 0 else " - ") + term
    return out or "0"


def barycenter(points: Sequence[Point]) -> Point:
    n = len(points)
    return tuple(sum(cs, Fraction(0)) / n for cs in zip(*points))


def simplex_volume(points: Sequence[Point]) -> Fraction:
    """Signed determinant of the edge vectors (k! times the signed volume)."""
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    if not rows or len(rows) != len(rows[0]):
        raise MeshError("volume needs k+1 points in R^k")
    return _det(rows)


def _det(rows: list[list[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def barycentric_coordinates(p: Point, points: Sequence[Point]) -> tuple[Fraction, ...] | None:
    """Affine coordinates of ``p`` w.r.t. affinely independent ``points``.

    Returns ``None`` when ``p`` is off their affine hull.
    """
    m = len(points)
    dim = len(p)
    # unknowns lambda_0..lambda_{m-1}; rows: coordinates and the partition of unity
    aug = [[pt[c] for pt in points] + [p[c]] for c in range(dim)]
    aug.append([Fraction(1)] * m + [Fraction(1)])
    red, pivots, rk = rref(aug)
    if m in pivots:
        return None
    if rk < m:
        raise MeshError("points are affinely dependent")
    lam = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        lam[c] = red[i, m]
    return tuple(lam)


def points_contain(inner: Sequence[Point], outer: Sequence[Point]) -> bool:
    """True iff conv(inner) is a subset of conv(outer)."""
    for p in inner:
        lam = barycentric_coordinates(p, outer)
        if lam is None or any(x < 0 for x in lam):
            return False
    return True


def affine_form_through(points: Sequence[Point]) -> AffineForm:
    """Canonical affine form vanishing on the hyperplane through k points of R^k."""
    k = len(points[0])
    if len(points) != k:
        raise MeshError(f"a hyperplane in R^{k} needs {k} points, got {len(points)}")
    ker = kernel_basis([list(p) + [Fraction(1)] for p in points])
    if len(ker) != 1:
        raise MeshError("points do not span a hyperplane")
    v = ker[0]
    return AffineForm(v[:k], v[k])


def line_hyperplane_intersection(p: Point, q: Point, facet_points: Sequence[Point]) -> Point:
    """Point where the line through ``p`` and ``q`` meets aff(facet)."""
    if p == q:
        raise MeshError("line needs two distinct points")
    form = affine_form_through(facet_points)
    fp, fq = form(p), form(q)
    if fp == fq:
        raise MeshError("line is parallel to the hyperplane")
    t = fp / (fp - fq)
    return tuple(a + t * (b - a) for a, b in zip(p, q))


@dataclass
class ValidationReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, kind: str, *where):
        self.violations.append((kind, where))

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return "valid"
        return "\n".join(f"{kind}: {', '.join(map(str, where))}" for kind, where in self.violations)


class SimplicialComplex:
    """A pure k-dimensional simplicial complex in R^k.

    Vertices with identical coordinates are merged on construction.  Cells
    are stored as sorted vertex-index tuples, in the order given.
    """

    def __init__(self, vertices: Iterable[Sequence], cells: Iterable[Sequence[int]]):
        raw = [as_point(v) for v in vertices]
        if not raw:
            raise MeshError("no vertices")
        dims = {len(v) for v in raw}
        if len(dims) != 1:
            raise MeshError("vertices have mixed dimensions")
        self.ambient_dim = dims.pop()
        index: dict[Point, int] = {}
        remap = []
        verts: list[Point] = []
        for v in raw:
            if v not in index:
                index[v] = len(verts)
                verts.append(v)
            remap.append(index[v])
        self.vertices: tuple[Point, ...] = tuple(verts)
        out = []
        for c in cells:
            ids = [remap[int(i)] for i in c]
            out.append(tuple(sorted(set(ids))) if len(set(ids)) == len(ids) else tuple(ids))
        self.cells: tuple[Simplex, ...] = tuple(out)
        self._vindex = index

    # construction helpers
    @classmethod
    def simplex(cls, points: Sequence[Sequence]) -> "SimplicialComplex":
        return cls(points, [range(len(points))])

    def vertex_id(self, p: Sequence) -> int:
        return self._vindex[as_point(p)]

    def points(self, s: Sequence[int]) -> list[Point]:
        return [self.vertices[i] for i in s]

    @property
    def k(self) -> int:
        return self.ambient_dim

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.canonical_cells() == other.canonical_cells()

    def __hash__(self):
        return hash(self.canonical_cells())

    def canonical_cells(self) -> frozenset:
        """Cells as sets of coordinate tuples, independent of vertex numbering."""
        return frozenset(frozenset(self.vertices[i] for i in c) for c in self.cells)

    def __repr__(self):
        return f"SimplicialComplex(k={self.k}, vertices={len(self.vertices)}, cells={len(self.cells)})"

    # face lattice
    @cached_property
    def _faces(self) -> list[tuple[Simplex, ...]]:
        out = []
        for i in range(self.k + 1):
            fs = set()
            for c in self.cells:
                fs.update(itertools.combinations(c, i + 1))
            out.append(tuple(sorted(fs)))
        return out

    def _check_dim(self, i: int):
        if not 0 <= i <= self.k:
            raise ValueError(f"face dimension {i} outside 0..{self.k}")

    def faces(self, i: int) -> tuple[Simplex, ...]:
        self._check_dim(i)
        return self._faces[i]

    @cached_property
    def facet_cells(self) -> dict[Simplex, list[int]]:
        """Map each (k-1)-face to the indices of the cells containing it."""
        out: dict[Simplex, list[int]] = {}
        for ci, c in enumerate(self.cells):
            for f in itertools.combinations(c, self.k):
                out.setdefault(f, []).append(ci)
        return out

    @cached_property
    def boundary_facets(self) -> tuple[Simplex, ...]:
        return tuple(sorted(f for f, cs in self.facet_cells.items() if len(cs) == 1))

    @cached_property
    def _interior(self) -> list[tuple[Simplex, ...]]:
        bpts = [self.points(f) for f in self.boundary_facets]
        bsets = [set(f) for f in self.boundary_facets]
        out = []
        for i in range(self.k):
            keep = []
            for g in self._faces[i]:
                gs = set(g)
                if any(gs <= b for b in bsets):
                    continue
                gp = self.points(g)
                if any(points_contain(gp, bp) for bp in bpts):
                    continue
                keep.append(g)
            out.append(tuple(keep))
        out.append(self.cells)
        return out

    def interior_faces(self, i: int) -> tuple[Simplex, ...]:
        self._check_dim(i)
        return self._interior[i]

    def boundary_vertices(self) -> tuple[int, ...]:
        interior = set(self.interior_faces(0)) if self.k > 0 else set()
        return tuple(v for (v,) in self.faces(0) if (v,) not in interior)

    def facet_form(self, tau: Sequence[int]) -> AffineForm:
        if len(tau) != self.k:
            raise MeshError(f"{tuple(tau)} is not a (k-1)-face")
        return affine_form_through(self.points(tau))

    def cell_volume(self, c: Sequence[int]) -> Fraction:
        return abs(simplex_volume(self.points(c)))

    def geometric_contains(self, gamma: Sequence[int], tau: Sequence[int], other: "SimplicialComplex | None" = None) -> bool:
        """Whether conv(gamma) lies in conv(tau); ``gamma`` may index ``other``."""
        src = self if other is None else other
        if src.ambient_dim != self.ambient_dim:
            raise MeshError("ambient dimensions differ")
        return points_contain(src.points(gamma), self.points(tau))

    # validation
    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        k = self.k
        good_cells = []
        for ci, c in enumerate(self.cells):
            if len(c) != k + 1 or len(set(c)) != len(c):
                rep.add("non-pure", ci, c)
                continue
            if simplex_volume(self.points(c)) == 0:
                rep.add("degenerate cell", ci, c)
                continue
            good_cells.append(ci)
        if not self.cells:
            rep.add("non-pure", "no cells")
        seen = {}
        for ci in good_cells:
            key = self.cells[ci]
            if key in seen:
                rep.add("duplicate cell", seen[key], ci)
            seen.setdefault(key, ci)
        for f, cs in self.facet_cells.items():
            if len(cs) > 2 and all(len(self.cells[c]) == k + 1 for c in cs):
                rep.add("facet shared by more than two cells", f, tuple(cs))
        for a, b in itertools.combinations(good_cells, 2):
            if self.cells[a] == self.cells[b]:
                continue
            if not _proper_intersection(self.points(self.cells[a]), self.points(self.cells[b]),
                                        set(self.cells[a]) & set(self.cells[b]), self.cells[a], self.cells[b]):
                rep.add("improper intersection", a, b)
        return rep

    def require_valid(self) -> "SimplicialComplex":
        rep = self.validate()
        if not rep.valid:
            raise MeshError(f"invalid complex:\n{rep}")
        return self


class _ExactKey:
    """Hashable wrapper comparing complexes by vertex list and cells, numbering included."""

    __slots__ = ("delta", "_h")

    def __init__(self, delta: SimplicialComplex):
        self.delta = delta
        self._h = hash((delta.vertices, delta.cells))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return (isinstance(other, _ExactKey) and self.delta.vertices == other.delta.vertices
                and self.delta.cells == other.delta.cells)


def complex_cache(maxsize: int | None = 128):
    """``lru_cache`` for functions of a complex whose results depend on its numbering.

    Complexes compare equal when they have the same cells as point sets, so
    a plain ``lru_cache`` could hand back face indices of a renumbered copy.
    Extra arguments must be passed positionally.
    """
    def deco(fn):
        @lru_cache(maxsize=maxsize)
        def inner(key, *args):
            return fn(key.delta, *args)

        @wraps(fn)
        def wrapper(delta, *args):
            return inner(_ExactKey(delta), *args)

        wrapper.cache_clear = inner.cache_clear
        wrapper.cache_info = inner.cache_info
        return wrapper
    return deco


def _bbox_disjoint(pa, pb) -> bool:
    for c in range(len(pa[0])):
        if max(p[c] for p in pa) < min(p[c] for p in pb) or max(p[c] for p in pb) < min(p[c] for p in pa):
            return True
    return False


def _proper_intersection(pa, pb, common: set[int], ca: Simplex, cb: Simplex) -> bool:
    """conv(pa) and conv(pb) meet exactly in the hull of their shared vertices."""
    if not common and _bbox_disjoint(pa, pb):
        return True
    k = len(pa[0])
    # fast path: a facet hyperplane through the shared face strictly separating the rest
    for pts, ids, other, oids in ((pa, ca, pb, cb), (pb, cb, pa, ca)):
        for drop in range(len(ids)):
            fids = ids[:drop] + ids[drop + 1:]
            if not common <= set(fids):
                continue
            form = affine_form_through([pts[i] for i in range(len(ids)) if i != drop])
            side = form(pts[drop])
            vals = [form(q) for q, qi in zip(other, oids) if qi not in common]
            if all(v * side < 0 for v in vals):
                return True
    # general case: look for an affine w with w = 0 on the shared vertices,
    # w >= 1 on the other vertices of pa and w <= -1 on those of pb.  Such a
    # w exists iff the two simplices meet exactly in their common face.
    rows = []
    for p, pid in zip(pa, ca):
        vec = list(p) + [Fraction(1)]
        if pid in common:
            rows.append((vec, Fraction(0)))
            rows.append(([-x for x in vec], Fraction(0)))
        else:
            rows.append((vec, Fraction(1)))
    for q, qid in zip(pb, cb):
        if qid not in common:
            rows.append(([-x for x in q] + [Fraction(-1)], Fraction(1)))
    return _fourier_motzkin_feasible(rows, k + 1)


def _fourier_motzkin_feasible(rows: list[tuple[list[Fraction], Fraction]], nvars: int) -> bool:
    """Exact feasibility of ``{x : a . x >= b for (a, b) in rows}``."""
    current = {(tuple(a), b) for a, b in rows}
    for j in range(nvars):
        pos, neg, keep = [], [], set()
        for a, b in current:
            if a[j] > 0:
                pos.append((a, b))
            elif a[j] < 0:
                neg.append((a, b))
            else:
                keep.add((a, b))
        for ap, bp in pos:
            for an, bn in neg:
                sp, sn = 1 / ap[j], -1 / an[j]
                a = tuple(x * sp + y * sn for x, y in zip(ap, an))
                b = bp * sp + bn * sn
                keep.add((a, b))
        current = {_normalize_row(a, b) for a, b in keep}
    return all(b <= 0 for _, b in current)


def _normalize_row(a: tuple, b: Fraction) -> tuple:
    scale = next((abs(x) for x in a if x), None)
    if scale is None or scale == 1:
        return a, b
    return tuple(x / scale for x in a), b / scale
