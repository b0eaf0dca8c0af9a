"""Spline spaces by brute force: the kernel of the smoothness conditions.

Each cell carries a polynomial with ``binom(d+k, k)`` unknown coefficients.
Across an interior facet ``tau`` between cells ``s1 < s2`` the difference
``f_s1 - f_s2`` must lie in ``l_tau^(r+1) * (polys of degree d-r-1)``.  That
subspace is row-reduced and the constraint rows give the coordinates of the
difference in the complementary (non-pivot) monomials, so the kernel of the
stacked system is exactly the spline space.

``mode="affine"`` uses polynomials of degree <= d in ``x_1..x_k``;
``mode="cone"`` uses forms of degree ``d`` in ``x_0..x_k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

import flint

from .algebra import essential_frame, homogenize
from .linalg import QMatrix, clear_denominators, kernel_basis, sparse_rank
from .mesh import SimplicialComplex, barycentric_coordinates, complex_cache
from .poly import Poly, linear_power, monomial_index, monomials, monomials_upto, n_monomials

__all__ = [
    "SplineSystem",
    "PiecewisePoly",
    "smoothness_system",
    "spline_dim",
    "cone_dim_reduced",
    "bernstein_conditions",
    "spline_basis",
    "is_spline",
    "random_piecewise",
]

MODES = ("affine", "cone")


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def cell_basis(k: int, d: int, mode: str):
    """Per-cell monomial basis and its variable count."""
    _check_mode(mode)
    if mode == "affine":
        return monomials_upto(k, d), k
    return monomials(k + 1, d), k + 1


@dataclass(frozen=True)
class PiecewisePoly:
    """One polynomial per cell of a complex."""

    pieces: tuple[Poly, ...]
    mode: str
    degree: int

    def __post_init__(self):
        _check_mode(self.mode)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        nv = {p.nvars for p in self.pieces}
        if len(nv) > 1:
            raise ValueError("pieces have different variable counts")
        for p in self.pieces:
            deg = p.degree()
            if deg > self.degree:
                raise ValueError("piece exceeds the declared degree")
            if self.mode == "cone" and not p.is_homogeneous():
                raise ValueError("cone-mode pieces must be homogeneous")

    def __len__(self):
        return len(self.pieces)

    def __getitem__(self, i: int) -> Poly:
        return self.pieces[i]

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        if len(other) != len(self) or other.mode != self.mode:
            raise ValueError("shape mismatch")
        return PiecewisePoly(tuple(a + b for a, b in zip(self.pieces, other.pieces)),
                             self.mode, max(self.degree, other.degree))

    def scale(self, c) -> "PiecewisePoly":
        return PiecewisePoly(tuple(p * c for p in self.pieces), self.mode, self.degree)


def _facet_data(delta: SimplicialComplex, tau) -> tuple[int, int, list]:
    cells = delta.facet_cells[tau]
    s1, s2 = sorted(cells)
    form = delta.facet_form(tau)
    return s1, s2, form


def _divisible_rows(form, m: int, d: int, mode: str, k: int) -> list[list[int]]:
    """Integer coefficient rows of ``l^m * mu`` for every monomial ``mu`` of degree ``d - m``."""
    if d < m:
        return []
    basis, nv = cell_basis(k, d, mode)
    index = monomial_index(nv, d, upto=(mode == "affine"))
    if mode == "cone":
        coeffs = clear_denominators(homogenize(form).coefficients)
        shifts = monomials(nv, d - m)
        power = [(e, int(c)) for e, c in linear_power(coeffs, m).items()]
    else:
        coeffs = clear_denominators((form.constant,) + tuple(form.coefficients))
        shifts = monomials_upto(nv, d - m)
        power = [(e[1:], int(c)) for e, c in linear_power(coeffs, m).items()]
    rows = []
    for mu in shifts:
        row = [0] * len(basis)
        for e, c in power:
            row[index[tuple(a + b for a, b in zip(e, mu))]] += c
        rows.append(row)
    return rows


def _complement_projection(div_rows: list[list[int]], size: int) -> list[list[int]]:
    """Integer matrix whose kernel is the span of ``div_rows``.

    Row ``f`` (for each non-pivot column) reads off the ``f``-th coordinate
    after reducing a vector modulo the divisible subspace, scaled by the
    common denominator of the reduced echelon form.
    """
    if not div_rows:
        return [[int(i == j) for j in range(size)] for i in range(size)]
    M = flint.fmpz_mat(len(div_rows), size, [x for r in div_rows for x in r])
    red, den, rk = M.rref()
    den = int(den)
    data = [[int(x) for x in row] for row in red.tolist()[:rk]]
    pivots = [next(c for c, x in enumerate(row) if x) for row in data]
    pivset = set(pivots)
    out = []
    for f in range(size):
        if f in pivset:
            continue
        row = [0] * size
        row[f] = den
        for i, p in enumerate(pivots):
            row[p] = -data[i][f]
        out.append(row)
    return out


@dataclass(frozen=True)
class SplineSystem:
    """Constraint matrix whose kernel is ``S^r_d`` of a complex.

    Unknowns are laid out cell by cell in the order of ``basis``.
    ``blocks`` lists ``(tau, s1, s2, first_row, nrows)`` per interior facet.
    Rows are stored as integers; each row is a rational row times a positive
    scalar, so the kernel is unchanged.
    """

    mode: str
    k: int
    r: int
    d: int
    ncells: int
    basis: tuple
    nvars: int
    rows: tuple[tuple[int, ...], ...]
    blocks: tuple

    @property
    def block_size(self) -> int:
        return len(self.basis)

    @property
    def nunknowns(self) -> int:
        return self.ncells * self.block_size

    @cached_property
    def matrix(self) -> QMatrix:
        return QMatrix(self.rows, self.nunknowns)

    def integer_matrix(self) -> flint.fmpz_mat:
        return flint.fmpz_mat(len(self.rows), self.nunknowns, [x for r in self.rows for x in r])

    def rank(self) -> int:
        if not self.rows:
            return 0
        return self.integer_matrix().rank()


def smoothness_system(delta: SimplicialComplex, r: int, d: int, mode: str = "affine",
                      validate: bool = True) -> SplineSystem:
    _check_mode(mode)
    if r < 0 or d < 0:
        raise ValueError("r and d must be nonnegative")
    if validate:
        delta.require_valid()
    k = delta.k
    basis, nv = cell_basis(k, d, mode)
    size = len(basis)
    ncells = len(delta.cells)
    rows: list[tuple[int, ...]] = []
    blocks = []
    for tau in delta.interior_faces(k - 1):
        s1, s2, form = _facet_data(delta, tau)
        proj = _complement_projection(_divisible_rows(form, r + 1, d, mode, k), size)
        start = len(rows)
        for prow in proj:
            full = [0] * (ncells * size)
            full[s1 * size:(s1 + 1) * size] = prow
            full[s2 * size:(s2 + 1) * size] = [-x for x in prow]
            rows.append(tuple(full))
        blocks.append((tau, s1, s2, start, len(proj)))
    return SplineSystem(mode, k, r, d, ncells, basis, nv, tuple(rows), tuple(blocks))


def _homogeneous_rows(coeffs: Sequence[int], m: int, nv: int, d: int) -> list[list[int]]:
    if d < m:
        return []
    index = monomial_index(nv, d)
    power = [(e, int(c)) for e, c in linear_power(coeffs, m).items()]
    rows = []
    for mu in monomials(nv, d - m):
        row = [0] * len(index)
        for e, c in power:
            row[index[tuple(a + b for a, b in zip(e, mu))]] += c
        rows.append(row)
    return rows


@complex_cache(maxsize=4096)
def _direct_dim(delta: SimplicialComplex, r: int, d: int, mode: str) -> int:
    system = smoothness_system(delta, r, d, mode)
    return system.nunknowns - system.rank()


@complex_cache(maxsize=256)
def _essential(delta: SimplicialComplex):
    """Interior facets, their cells and forms written in a basis of the span of all forms."""
    k = delta.k
    data = []
    for tau in delta.interior_faces(k - 1):
        s1, s2, form = _facet_data(delta, tau)
        data.append((s1, s2, homogenize(form).coefficients))
    pivots, _ = essential_frame([c for _, _, c in data]) if data else ([], [])
    reduced = [(s1, s2, tuple(clear_denominators([c[p] for p in pivots]))) for s1, s2, c in data]
    return len(pivots), reduced


@complex_cache(maxsize=4096)
def _reduced_strand(delta: SimplicialComplex, r: int, j: int) -> int:
    e, facets = _essential(delta)
    size = n_monomials(e, j)
    ncells = len(delta.cells)
    rows = []
    for s1, s2, coeffs in facets:
        for prow in _complement_projection(_homogeneous_rows(coeffs, r + 1, e, j), size):
            full = [0] * (ncells * size)
            full[s1 * size:(s1 + 1) * size] = prow
            full[s2 * size:(s2 + 1) * size] = [-x for x in prow]
            rows.append(full)
    rk = flint.fmpz_mat(len(rows), ncells * size, [x for r_ in rows for x in r_]).rank() if rows else 0
    return ncells * size - rk


def cone_dim_reduced(delta: SimplicialComplex, r: int, d: int) -> int:
    """Cone-mode dimension computed over the span of the interior facet forms.

    With ``e`` independent forms among ``n = k+1`` variables the polynomial
    ring is free over the ring generated by those forms, and the smoothness
    conditions only see that subring, so
    ``dim S_d = sum_j dim S'_j * #monomials(d-j, n-e)``.
    """
    delta.require_valid()
    e, _ = _essential(delta)
    n = delta.k + 1
    if e == 0:
        return len(delta.cells) * n_monomials(n, d)
    return sum(_reduced_strand(delta, r, j) * n_monomials(n - e, d - j) for j in range(d + 1)
               if n_monomials(n - e, d - j))


def bernstein_conditions(delta: SimplicialComplex, r: int, d: int) -> tuple[list[dict], int]:
    """Smoothness conditions on Bernstein-Bezier coefficients.

    On each cell write ``f = sum_a c_a lambda^a`` in the (homogeneous)
    barycentric forms of that cell.  Across a facet ``tau`` with cells
    ``[tau, v]`` and ``[tau, w]`` the forms of the second cell are
    ``mu_i = lambda_i + b_i lambda_v`` (``i`` in ``tau``) and
    ``mu_w = b_w lambda_v``, where ``b`` are the barycentric coordinates of
    ``v`` in the second cell.  Matching the coefficients of
    ``lambda_tau^g lambda_v^rho`` for ``rho <= r`` is exactly ``C^r``
    smoothness.  The ``rho = 0`` conditions identify coefficients and are
    applied by merging unknowns; the remaining rows are returned together
    with the number of merged unknowns.
    """
    k = delta.k
    parent: dict = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent.get(x, x)
        return root

    raw = []
    for tau in delta.interior_faces(k - 1):
        s1, s2 = sorted(delta.facet_cells[tau])
        c1, c2 = delta.cells[s1], delta.cells[s2]
        v = next(x for x in c1 if x not in tau)
        w = next(x for x in c2 if x not in tau)
        b = dict(zip(c2, barycentric_coordinates(delta.vertices[v], delta.points(c2))))
        pos1 = {x: i for i, x in enumerate(c1)}
        pos2 = {x: i for i, x in enumerate(c2)}
        expansions = {}
        for rho in range(r + 1):
            for bw in range(rho + 1):
                expansions[rho, bw] = [
                    (t, b[w] ** bw * _prod(b[i] ** ti for i, ti in zip(tau, t)))
                    for t in monomials(k, rho - bw)
                ]
        for rho in range(min(r, d) + 1):
            for g in monomials(k, d - rho):
                a1 = [0] * (k + 1)
                for x, gi in zip(tau, g):
                    a1[pos1[x]] = gi
                a1[pos1[v]] = rho
                key1 = (s1, tuple(a1))
                if rho == 0:
                    a2 = [0] * (k + 1)
                    for x, gi in zip(tau, g):
                        a2[pos2[x]] = gi
                    r1, r2 = find(key1), find((s2, tuple(a2)))
                    if r1 != r2:
                        parent[r1] = r2
                    continue
                row = {key1: Fraction(1)}
                for bw in range(rho + 1):
                    for t, base in expansions[rho, bw]:
                        if not base:
                            continue
                        coef = base
                        a2 = [0] * (k + 1)
                        for x, gi, ti in zip(tau, g, t):
                            a2[pos2[x]] = gi + ti
                            if ti:
                                coef *= comb(gi + ti, ti)
                        a2[pos2[w]] = bw
                        key2 = (s2, tuple(a2))
                        row[key2] = row.get(key2, 0) - coef
                raw.append(row)
    classes: dict = {}
    for s, _ in enumerate(delta.cells):
        for a in monomials(k + 1, d):
            classes.setdefault(find((s, a)), len(classes))
    rows = []
    for row in raw:
        merged: dict[int, Fraction] = {}
        for key, c in row.items():
            j = classes[find(key)]
            merged[j] = merged.get(j, 0) + c
        merged = {j: c for j, c in merged.items() if c}
        if merged:
            rows.append(merged)
    return rows, len(classes)


def _prod(xs) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


@complex_cache(maxsize=4096)
def _bernstein_dim(delta: SimplicialComplex, r: int, d: int) -> int:
    rows, n = bernstein_conditions(delta, r, d)
    return n - sparse_rank(rows, n)


# above this many unknowns "auto" switches from the dense system to the sparse one
DENSE_LIMIT = 1500

METHODS = ("auto", "dense", "reduced", "bernstein")


def spline_dim(delta: SimplicialComplex, r: int, d: int, mode: str = "affine",
               method: str = "dense", reduce: bool = False) -> int:
    """``dim S^r_d`` as the nullity of a system of smoothness conditions.

    ``method``:

    * ``"dense"`` - the monomial system of :func:`smoothness_system`;
    * ``"reduced"`` - the same in cone mode over the span of the interior
      facet forms (:func:`cone_dim_reduced`);
    * ``"bernstein"`` - sparse conditions on Bernstein-Bezier coefficients
      (:func:`bernstein_conditions`); the two modes coincide here;
    * ``"auto"`` - dense for small systems, sparse otherwise.

    ``reduce=True`` is shorthand for ``method="reduced"``.
    """
    _check_mode(mode)
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if r < 0 or d < 0:
        raise ValueError("r and d must be nonnegative")
    delta.require_valid()
    if reduce:
        method = "reduced"
    if method == "auto":
        method = "dense" if len(delta.cells) * comb(d + delta.k, delta.k) <= DENSE_LIMIT else "bernstein"
    if method == "reduced":
        if mode != "cone":
            raise ValueError("the reduction is defined for cone mode")
        return cone_dim_reduced(delta, r, d)
    if method == "bernstein":
        return _bernstein_dim(delta, r, d)
    return _direct_dim(delta, r, d, mode)


def _to_piecewise(vec: Sequence, system: SplineSystem) -> PiecewisePoly:
    size = system.block_size
    pieces = []
    for c in range(system.ncells):
        block = vec[c * size:(c + 1) * size]
        pieces.append(Poly.from_vector(system.nvars, system.basis, block))
    return PiecewisePoly(tuple(pieces), system.mode, system.d)


def spline_basis(delta: SimplicialComplex, r: int, d: int, mode: str = "affine") -> list[PiecewisePoly]:
    """Kernel basis of the smoothness system, one spline per free unknown."""
    system = smoothness_system(delta, r, d, mode)
    if system.rows:
        vecs = kernel_basis(system.matrix)
    else:
        n = system.nunknowns
        vecs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return [_to_piecewise(v, system) for v in vecs]


def _divisible_by_power(p: Poly, coeffs: Sequence, m: int) -> bool:
    """Whether ``p`` is divisible by ``(sum coeffs[i] x_i)^m``.

    Change coordinates so the form becomes a single variable ``x_i`` and
    check that every term carries ``x_i`` to a power >= m.
    """
    if p.is_zero():
        return True
    lead = next(i for i, c in enumerate(coeffs) if c)
    n = p.nvars
    sub = Poly.variable(n, lead) * (1 / coeffs[lead])
    for j, c in enumerate(coeffs):
        if j != lead and c:
            sub = sub - Poly.variable(n, j) * (c / coeffs[lead])
    q = p.substitute(lead, sub)
    return all(e[lead] >= m for e in q.terms)


def is_spline(delta: SimplicialComplex, r: int, F: PiecewisePoly) -> bool:
    """Check ``C^r`` smoothness of ``F`` across every interior facet by exact division."""
    if len(F) != len(delta.cells):
        raise ValueError(f"{len(F)} pieces for {len(delta.cells)} cells")
    k = delta.k
    want = k if F.mode == "affine" else k + 1
    if any(p.nvars != want for p in F.pieces):
        raise ValueError(f"{F.mode} pieces need {want} variables")
    for tau in delta.interior_faces(k - 1):
        s1, s2, form = _facet_data(delta, tau)
        diff = F[s1] - F[s2]
        if F.mode == "cone":
            coeffs = homogenize(form).coefficients
        else:
            # affine: x_0 plays no role, so fold the constant in via one extra variable
            coeffs = (form.constant,) + tuple(form.coefficients)
            diff = Poly(k + 1, {(F.degree - sum(e),) + e: c for e, c in diff.terms.items()})
        if not _divisible_by_power(diff, coeffs, r + 1):
            return False
    return True


def random_piecewise(delta: SimplicialComplex, d: int, mode: str = "affine", seed: int = 0,
                     bound: int = 9) -> PiecewisePoly:
    """Independent random integer polynomials on each cell."""
    rng = random.Random(seed)
    basis, nv = cell_basis(delta.k, d, mode)
    pieces = tuple(Poly(nv, {m: rng.randint(-bound, bound) for m in basis}) for _ in delta.cells)
    return PiecewisePoly(pieces, mode, d)
