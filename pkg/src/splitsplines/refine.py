"""Subdivision constructors, the simple/split predicates and dimension additivity.

A refinement step replaces one cell ``sigma`` of a complex ``delta`` by a
subdivision ``piece`` of it, giving ``fine``.  The step is *simple* when
``piece`` leaves the facets ``sigma`` shares with other cells untouched, and
*split* when, in addition, the face ideals along the boundary of ``piece``
(away from the boundary of ``fine``) are the same in ``fine`` as in
``delta``.  For split steps

    dim S_d(fine) = dim S_d(delta) + dim S_d(piece) - binom(d+k, k),

which :func:`verify_additivity` checks degree by degree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .algebra import face_ideal, homology_graded_dims, ideals_equal
from .mesh import (
    MeshError,
    Point,
    SimplicialComplex,
    as_point,
    barycenter,
    barycentric_coordinates,
    line_hyperplane_intersection,
    points_contain,
)
from .oracle import spline_dim

__all__ = [
    "SubdivisionRecord",
    "standard_simplex",
    "alfeld",
    "alfeld_complex",
    "facet_split",
    "double_alfeld",
    "pyramid",
    "replace_cell",
    "is_simple",
    "is_split",
    "new_boundary_faces",
    "AdditivityReport",
    "verify_additivity",
]


def standard_simplex(k: int, scale: int | None = None) -> SimplicialComplex:
    """``T_k`` with vertices ``0`` and ``scale * e_i``; default scale ``k+1`` puts the barycenter at ``(1,..,1)``."""
    if k < 1:
        raise ValueError("k must be positive")
    s = k + 1 if scale is None else scale
    pts = [(0,) * k] + [tuple(s * int(i == j) for j in range(k)) for i in range(k)]
    return SimplicialComplex.simplex(pts)


@dataclass(frozen=True)
class SubdivisionRecord:
    """One refinement step: ``cell`` of ``coarse`` is replaced by ``piece``, giving ``fine``."""

    coarse: SimplicialComplex
    cell: tuple[int, ...]
    piece: SimplicialComplex
    fine: SimplicialComplex
    new_boundary_faces: tuple[tuple[int, ...], ...]
    label: str = ""

    @property
    def cell_index(self) -> int:
        return self.coarse.cells.index(self.cell)

    @property
    def k(self) -> int:
        return self.coarse.k

    def new_vertices(self) -> list[Point]:
        old = set(self.coarse.vertices)
        return [p for p in self.piece.vertices if p not in old]


def _cell_of(delta: SimplicialComplex, sigma) -> tuple[int, ...]:
    if isinstance(sigma, int):
        if not 0 <= sigma < len(delta.cells):
            raise MeshError(f"cell index {sigma} out of range")
        return delta.cells[sigma]
    s = tuple(sorted(sigma))
    if s not in delta.cells:
        raise MeshError(f"{s} is not a cell")
    return s


def _strictly_interior(p: Point, pts: Sequence[Point]) -> bool:
    bc = barycentric_coordinates(p, pts)
    return bc is not None and all(c > 0 for c in bc)


def _alfeld_cells(points: Sequence[Sequence], u: Sequence | None = None):
    """Vertices and cells of the cone from ``u`` over the boundary of ``conv(points)``.

    ``points`` may span a lower-dimensional simplex (a facet); interiority
    is then relative to its affine hull.
    """
    pts = [as_point(p) for p in points]
    u = barycenter(pts) if u is None else as_point(u)
    if not _relatively_interior(u, pts):
        raise MeshError(f"point {_fmt(u)} is not strictly interior")
    n = len(pts)
    return pts + [u], [tuple(j for j in range(n) if j != i) + (n,) for i in range(n)]


def alfeld_complex(points: Sequence[Sequence], u: Sequence | None = None) -> SimplicialComplex:
    """Alfeld split of the full-dimensional simplex ``conv(points)`` at ``u`` (default barycenter)."""
    verts, cells = _alfeld_cells(points, u)
    if len(verts[0]) != len(points) - 1:
        raise MeshError("points do not span a full-dimensional simplex")
    return SimplicialComplex(verts, cells)


def _cone(apex: Point, verts, cells) -> SimplicialComplex:
    n = len(verts)
    return SimplicialComplex(list(verts) + [apex], [tuple(c) + (n,) for c in cells])


def _relatively_interior(p: Point, pts: Sequence[Point]) -> bool:
    """Strictly positive affine weights of ``p`` with respect to ``pts``."""
    from .linalg import rref

    n = len(pts)
    rows = [[q[i] for q in pts] + [p[i]] for i in range(len(p))] + [[1] * n + [1]]
    red, pivots, rk = rref(rows)
    if n in pivots or len(pivots) < n:
        return False
    weights = [red[i, n] for i in range(n)]
    return all(w > 0 for w in weights)


def _fmt(p: Point) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"


def _covers(delta: SimplicialComplex, sigma: tuple[int, ...], piece: SimplicialComplex) -> None:
    if piece.ambient_dim != delta.ambient_dim:
        raise MeshError("piece lives in a different dimension")
    rep = piece.validate()
    if not rep.valid:
        raise MeshError(f"piece is not a valid complex: {rep}")
    spts = delta.points(sigma)
    outside = [v for v in piece.vertices if not points_contain([v], spts)]
    if outside:
        raise MeshError(f"piece has vertices outside the cell: {_fmt(outside[0])}")
    total = sum((piece.cell_volume(c) for c in piece.cells), Fraction(0))
    if total != delta.cell_volume(sigma):
        raise MeshError("piece does not cover the cell (volumes differ)")


def is_simple(delta: SimplicialComplex, sigma, piece: SimplicialComplex) -> bool:
    """Whether ``piece`` changes the boundary of ``sigma`` only inside the boundary of ``delta``.

    Raises :class:`MeshError` if ``piece`` does not subdivide ``sigma``.
    """
    sigma = _cell_of(delta, sigma)
    _covers(delta, sigma, piece)
    shared = [f for f in itertools.combinations(sigma, delta.k) if len(delta.facet_cells[f]) == 2]
    bfacets = [frozenset(piece.points(f)) for f in piece.boundary_facets]
    for f in shared:
        fpts = delta.points(f)
        inside = [b for b in bfacets if points_contain(list(b), fpts)]
        if inside != [frozenset(fpts)]:
            return False
    return True


def new_boundary_faces(fine: SimplicialComplex, piece: SimplicialComplex) -> tuple[tuple[int, ...], ...]:
    """Faces of the boundary of ``piece`` that are not on the boundary of ``fine``, as ``fine`` simplices."""
    k = fine.k
    fb = [fine.points(f) for f in fine.boundary_facets]
    faces = set()
    for f in piece.boundary_facets:
        ids = tuple(sorted(fine.vertex_id(p) for p in piece.points(f)))
        for i in range(1, k + 1):
            faces.update(itertools.combinations(ids, i))
    out = [g for g in faces if not any(points_contain(fine.points(g), b) for b in fb)]
    return tuple(sorted(out, key=lambda g: (len(g), g)))


def replace_cell(delta: SimplicialComplex, sigma, piece: SimplicialComplex, label: str = "") -> SubdivisionRecord:
    """Replace one cell by a subdivision of it."""
    sigma = _cell_of(delta, sigma)
    if not is_simple(delta, sigma, piece):
        raise MeshError("subdivision is not simple: it alters a facet shared with another cell")
    verts = list(delta.vertices) + list(piece.vertices)
    off = len(delta.vertices)
    cells = [c for c in delta.cells if c != sigma] + [tuple(off + i for i in c) for c in piece.cells]
    fine = SimplicialComplex(verts, cells)
    rep = fine.validate()
    if not rep.valid:
        raise MeshError(f"refined complex is invalid: {rep}")
    return SubdivisionRecord(delta, sigma, piece, fine, new_boundary_faces(fine, piece), label)


def alfeld(delta: SimplicialComplex, sigma=0, u: Sequence | None = None) -> SubdivisionRecord:
    """Alfeld split of one cell at ``u`` (default: its barycenter)."""
    sigma = _cell_of(delta, sigma)
    piece = alfeld_complex(delta.points(sigma), u)
    return replace_cell(delta, sigma, piece, label="alfeld")


def _single_cell(T: SimplicialComplex) -> None:
    if len(T.cells) != 1:
        raise MeshError("expected a single simplex")
    T.require_valid()


def _subset(subset: Iterable[int] | None, k: int) -> list[int]:
    idx = list(range(k + 1)) if subset is None else sorted(set(int(i) for i in subset))
    for i in idx:
        if not 0 <= i <= k:
            raise ValueError(f"facet index {i} outside 0..{k}")
    return idx


def _find(delta: SimplicialComplex, pts: Sequence[Point]) -> tuple[int, ...]:
    return tuple(sorted(delta.vertex_id(p) for p in pts))


def facet_split(T: SimplicialComplex, u: Sequence | None = None, subset: Iterable[int] | None = None,
                points: dict | None = None) -> list[SubdivisionRecord]:
    """Facet split of a simplex as a sequence of refinement steps.

    The first step is the Alfeld split at ``u``.  Then for each selected
    facet ``F_i`` (opposite vertex ``v_i``) the cell ``[u, F_i]`` is replaced
    by the pyramid with apex ``u`` over the Alfeld split of ``F_i`` at
    ``u_i``, where ``u_i`` is where the line ``v_i u`` meets ``F_i``.
    ``points`` may override ``u_i`` (collinearity is then not imposed).
    """
    _single_cell(T)
    k = T.k
    v = [T.vertices[i] for i in T.cells[0]]
    first = alfeld(T, 0, u)
    u = next(iter(first.new_vertices()))
    steps = [first]
    current = first.fine
    for i in _subset(subset, k):
        F = [v[j] for j in range(k + 1) if j != i]
        if points and i in points:
            ui = as_point(points[i])
        else:
            ui = line_hyperplane_intersection(v[i], u, F)
        if not _relatively_interior(ui, F):
            raise MeshError(f"u_{i} = {_fmt(ui)} is not strictly interior to facet {i}")
        piece = _cone(u, *_alfeld_cells(F, ui))
        sigma = _find(current, F + [u])
        rec = replace_cell(current, sigma, piece, label=f"facet pyramid {i}")
        steps.append(rec)
        current = rec.fine
    return steps


def double_alfeld(T: SimplicialComplex, u: Sequence | None = None, subset: Iterable[int] | None = None,
                  points: dict | None = None, require_collinear: bool = True) -> list[SubdivisionRecord]:
    """Double Alfeld split of a simplex as a sequence of refinement steps.

    After the Alfeld split at ``u`` each selected cell ``T^i = [u, F_i]`` is
    Alfeld-split at ``u_i``, by default its barycenter, which lies on the
    line through ``v_i`` and ``u``.  Custom ``points`` must be collinear with
    ``v_i`` and ``u`` unless ``require_collinear`` is off.
    """
    _single_cell(T)
    k = T.k
    v = [T.vertices[i] for i in T.cells[0]]
    first = alfeld(T, 0, u)
    u = next(iter(first.new_vertices()))
    steps = [first]
    current = first.fine
    for i in _subset(subset, k):
        F = [v[j] for j in range(k + 1) if j != i]
        sub = F + [u]
        ui = as_point(points[i]) if points and i in points else barycenter(sub)
        if require_collinear and not _collinear(v[i], u, ui):
            raise MeshError(f"u_{i} = {_fmt(ui)} is not on the line through v_{i} and u")
        sigma = _find(current, sub)
        rec = replace_cell(current, sigma, alfeld_complex(sub, ui), label=f"alfeld of T^{i}")
        steps.append(rec)
        current = rec.fine
    return steps


def _collinear(a: Point, b: Point, c: Point) -> bool:
    ab = [y - x for x, y in zip(a, b)]
    ac = [y - x for x, y in zip(a, c)]
    return all(ab[i] * ac[j] == ab[j] * ac[i] for i in range(len(ab)) for j in range(i + 1, len(ab)))


def pyramid(k: int, scale: int | None = None) -> SimplicialComplex:
    """``P_k``: cone from vertex 0 of ``T_k`` over the Alfeld split of the opposite facet."""
    T = standard_simplex(k, scale)
    v = list(T.vertices)
    return _cone(v[0], *_alfeld_cells(v[1:]))


def is_split(rec: SubdivisionRecord, r: int) -> tuple[bool, list[tuple[int, ...]]]:
    """Compare ``J(fine)_g`` with ``J(coarse)_g`` on every new boundary face ``g``.

    Returns the verdict and the faces (indexed in ``rec.fine``) where the
    ideals differ.
    """
    if not is_simple(rec.coarse, rec.cell, rec.piece):
        raise MeshError("record is not a simple subdivision")
    witnesses = []
    for g in rec.new_boundary_faces:
        fine_ideal = face_ideal(rec.fine, g, r)
        coarse_ideal = face_ideal(rec.coarse, g, r, source=rec.fine)
        if not ideals_equal(fine_ideal, coarse_ideal):
            witnesses.append(g)
    return not witnesses, witnesses


@dataclass
class AdditivityReport:
    r: int
    split: bool
    witnesses: list
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.split and all(row["ok"] for row in self.rows)

    def failures(self) -> list[dict]:
        return [row for row in self.rows if not row["ok"]]

    def __str__(self):
        head = f"r={self.r} split={self.split}"
        if self.witnesses:
            head += f" witnesses={self.witnesses}"
        lines = [head]
        for row in self.rows:
            lines.append(
                f"  d={row['d']}: fine={row['fine']} coarse={row['coarse']} piece={row['piece']} "
                f"poly={row['poly']} H_k-1={row['h']} {'ok' if row['ok'] else 'FAIL'}"
            )
        return "\n".join(lines)


def verify_additivity(rec: SubdivisionRecord, r: int, d_range: Iterable[int], method: str = "auto",
                      homology: str = "frame") -> AdditivityReport:
    """Check the dimension identity of a split step in each degree.

    Each degree also records ``dim H_{k-1}(R/J(coarse))_d``; the identity is
    only guaranteed when that vanishes, so a nonzero value fails the row.
    ``method`` selects the spline-dimension oracle and ``homology`` the
    realization of ``R/J`` (see :func:`homology_graded_dims`).
    """
    split, witnesses = is_split(rec, r)
    report = AdditivityReport(r, split, [rec.fine.points(g) for g in witnesses])
    k = rec.k
    mode = "cone" if method == "reduced" else "affine"
    for d in d_range:
        fine = spline_dim(rec.fine, r, d, mode, method=method)
        coarse = spline_dim(rec.coarse, r, d, mode, method=method)
        piece = spline_dim(rec.piece, r, d, mode, method=method)
        poly = comb(d + k, k)
        h = homology_graded_dims(rec.coarse, r, d, method=homology)[k - 1]
        ok = h == 0 and fine == coarse + piece - poly
        report.rows.append(dict(d=d, fine=fine, coarse=coarse, piece=piece, poly=poly, h=h, ok=ok))
    return report
