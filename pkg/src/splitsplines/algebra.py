"""Face ideals, Hilbert functions and the graded chain complex R/J of a mesh.

Polynomials live in ``R = Q[x_0, ..., x_k]`` where ``x_0`` is the
homogenizing variable.  An affine form ``a . x + c`` becomes the linear form
``c x_0 + a_1 x_1 + ... + a_k x_k``.

When every linear form of a complex lies in an ``e``-dimensional subspace
``V`` of linear forms (e.g. every interior facet passes through one common
vertex), ``R`` is free over ``S = Sym(V)`` and the whole complex is extended
from ``S``.  Graded pieces are then computed over ``S`` and recombined with
``dim M_d = sum_j dim N_j * #monomials(d - j, n - e)``.  Every routine that
uses this shortcut accepts ``reduce=False`` to force the direct computation.
"""
from __future__ import annotations

import itertools
import math
from math import comb
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .linalg import as_fraction, clear_denominators, integer_rank, row_space_equal, rref, sparse_rank
from .mesh import (AffineForm, MeshError, SimplicialComplex, barycentric_coordinates, complex_cache, format_linear,
                   points_contain)
from .poly import linear_power, monomial_index, monomials, n_monomials

__all__ = [
    "LinearHomogeneousForm",
    "PowerIdeal",
    "ChainComplexRJ",
    "homogenize",
    "face_ideal",
    "ideal_graded_dim",
    "ideal_hilbert",
    "ideals_equal",
    "essential_frame",
    "build_complex",
    "homology_graded_dims",
    "euler_dim",
    "term_dims",
    "FrameComplex",
]


@dataclass(frozen=True, order=True)
class LinearHomogeneousForm:
    """Linear form in ``x_0..x_k``, stored up to scalar.

    Scaled so the first nonzero coefficient among ``x_1..x_k`` is 1 (falling
    back to ``x_0``), which agrees with the scaling of :class:`AffineForm`.
    """

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(as_fraction(c) for c in self.coefficients)
        lead = next((c for c in cs[1:] if c), None)
        if lead is None:
            lead = cs[0] if cs else 0
        if not lead:
            raise ValueError("zero linear form")
        if lead != 1:
            cs = tuple(c / lead for c in cs)
        object.__setattr__(self, "coefficients", cs)

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def integer_coefficients(self) -> list[int]:
        return clear_denominators(self.coefficients)

    def dehomogenize(self) -> AffineForm:
        return AffineForm(self.coefficients[1:], self.coefficients[0])

    def __call__(self, point: Sequence) -> Fraction:
        return sum((c * as_fraction(x) for c, x in zip(self.coefficients, point)), Fraction(0))

    def __str__(self):
        names = ["x0"] + ([f"x{i}" for i in range(1, self.nvars)] if self.nvars > 4
                          else ["x", "y", "z"][:self.nvars - 1])
        lin = format_linear(self.coefficients[1:], names[1:])
        c0 = self.coefficients[0]
        if not c0:
            return lin
        tail = format_linear([c0], ["x0"])
        if lin == "0":
            return tail
        return f"{lin} - {tail[1:]}" if tail.startswith("-") else f"{lin} + {tail}"


def homogenize(f: AffineForm) -> LinearHomogeneousForm:
    if not isinstance(f, AffineForm):
        raise TypeError("expected an AffineForm")
    return LinearHomogeneousForm((f.constant,) + tuple(f.coefficients))


@dataclass(frozen=True)
class PowerIdeal:
    """Ideal generated by ``l^exponent`` for each form ``l``."""

    forms: tuple[LinearHomogeneousForm, ...]
    exponent: int
    nvars: int

    def __post_init__(self):
        forms = tuple(sorted(set(self.forms)))
        for f in forms:
            if f.nvars != self.nvars:
                raise ValueError("form has the wrong number of variables")
        if self.exponent < 1:
            raise ValueError("exponent must be positive")
        object.__setattr__(self, "forms", forms)

    @classmethod
    def zero(cls, nvars: int, exponent: int) -> "PowerIdeal":
        return cls((), exponent, nvars)

    def __len__(self):
        return len(self.forms)

    def generator_rows(self, d: int) -> list[list[int]]:
        """Integer rows spanning the degree-``d`` piece, in ``monomials(nvars, d)`` order."""
        return _generator_rows(tuple(tuple(f.integer_coefficients()) for f in self.forms),
                               self.exponent, self.nvars, d)

    def __str__(self):
        gens = ", ".join(f"({f})^{self.exponent}" for f in self.forms)
        return f"<{gens}>"


def _generator_rows(int_forms, m: int, n: int, d: int) -> list[list[int]]:
    if d < m or not int_forms:
        return []
    index = monomial_index(n, d)
    size = len(index)
    shifts = monomials(n, d - m)
    rows = []
    for coeffs in int_forms:
        power = [(e, int(c)) for e, c in linear_power(coeffs, m).items()]
        for mu in shifts:
            row = [0] * size
            for e, c in power:
                row[index[tuple(a + b for a, b in zip(e, mu))]] = c
            rows.append(row)
    return rows


def _form_for_facet(delta: SimplicialComplex, tau) -> LinearHomogeneousForm:
    return homogenize(delta.facet_form(tau))


@complex_cache(maxsize=256)
def _facet_forms(delta: SimplicialComplex) -> dict:
    return {tau: _form_for_facet(delta, tau) for tau in delta.faces(delta.k - 1)}


def face_ideal(delta: SimplicialComplex, gamma: Sequence[int], r: int,
               source: SimplicialComplex | None = None) -> PowerIdeal:
    """``J_gamma``: (r+1)-st powers of the forms of every (k-1)-face containing gamma.

    ``gamma`` indexes the vertices of ``source`` (default ``delta``);
    containment is geometric, so faces of a refinement can be tested
    against a coarser complex.
    """
    if r < 0:
        raise ValueError("smoothness must be nonnegative")
    src = delta if source is None else source
    if src.ambient_dim != delta.ambient_dim:
        raise MeshError("ambient dimensions differ")
    pts = src.points(gamma)
    forms = []
    same = src is delta
    for tau, form in _facet_forms(delta).items():
        if same and set(gamma) <= set(tau):
            forms.append(form)
        elif points_contain(pts, delta.points(tau)):
            forms.append(form)
    return PowerIdeal(tuple(forms), r + 1, delta.k + 1)


def essential_frame(vectors: Sequence[Sequence[Fraction]]) -> tuple[list[int], list]:
    """Pivot columns and RREF basis of the span of ``vectors``.

    A vector ``v`` of the span has coordinates ``[v[p] for p in pivots]``
    with respect to that basis.
    """
    if not vectors:
        return [], []
    red, pivots, rk = rref(vectors)
    return pivots, [red.row(i) for i in range(rk)]


def _reduce_forms(forms: Sequence[LinearHomogeneousForm], pivots: list[int]) -> tuple[LinearHomogeneousForm, ...]:
    return tuple(LinearHomogeneousForm(tuple(f.coefficients[p] for p in pivots)) for f in forms)


@lru_cache(maxsize=100_000)
def _ideal_hilbert_direct(int_forms: tuple, m: int, n: int, upto: int) -> tuple[int, ...]:
    """dim J_j for j = 0..upto of the ideal generated by the m-th powers."""
    out = []
    for j in range(upto + 1):
        if j < m or not int_forms:
            out.append(0)
            continue
        total = n_monomials(n, j)
        if out and j > m and out[-1] == n_monomials(n, j - 1):
            out.append(total)
            continue
        if len(int_forms) == 1:
            out.append(n_monomials(n, j - m))
            continue
        out.append(min(total, integer_rank(_generator_rows(int_forms, m, n, j), total)))
    return tuple(out)


def ideal_hilbert(J: PowerIdeal, dmax: int, reduce: bool = True) -> list[int]:
    """``[dim J_d for d in 0..dmax]``."""
    n = J.nvars
    if not J.forms:
        return [0] * (dmax + 1)
    if reduce:
        pivots, _ = essential_frame([f.coefficients for f in J.forms])
        e = len(pivots)
        if e < n:
            red = _reduce_forms(J.forms, pivots)
            inner = _ideal_hilbert_direct(tuple(tuple(f.integer_coefficients()) for f in red),
                                          J.exponent, e, dmax)
            return [sum(inner[j] * n_monomials(n - e, d - j) for j in range(d + 1))
                    for d in range(dmax + 1)]
    return list(_ideal_hilbert_direct(tuple(tuple(f.integer_coefficients()) for f in J.forms),
                                      J.exponent, n, dmax))


def ideal_graded_dim(J: PowerIdeal, d: int, nvars: int | None = None, reduce: bool = True) -> int:
    """Dimension of the degree-``d`` piece of ``J``."""
    if nvars is not None and nvars != J.nvars:
        raise ValueError(f"ideal lives in {J.nvars} variables, not {nvars}")
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return ideal_hilbert(J, d, reduce=reduce)[d]


def ideals_equal(J1: PowerIdeal, J2: PowerIdeal) -> bool:
    """Equality of ideals generated purely in one degree ``m``.

    Such ideals agree iff their degree-``m`` pieces agree, i.e. iff the
    spans of the ``m``-th powers coincide.
    """
    if J1.exponent != J2.exponent:
        raise ValueError("exponents differ")
    if J1.nvars != J2.nvars:
        raise ValueError("variable counts differ")
    if not J1.forms or not J2.forms:
        return not J1.forms and not J2.forms
    m, n = J1.exponent, J1.nvars
    a = _generator_rows(tuple(tuple(f.integer_coefficients()) for f in J1.forms), m, n, m)
    b = _generator_rows(tuple(tuple(f.integer_coefficients()) for f in J2.forms), m, n, m)
    return row_space_equal(a, b)


# ---------------------------------------------------------------------------
# the chain complex


@dataclass
class _Quotient:
    """Degree-j data of R/J: standard monomials and the reduction of the others."""

    nonpivots: list[int]
    pivot_row: dict[int, int]
    rows: list[list[int]]  # rref rows (integers, common denominator ``den``)
    den: int

    @property
    def dim(self) -> int:
        return len(self.nonpivots)


def _quotient(int_forms: tuple, m: int, n: int, j: int) -> _Quotient:
    size = n_monomials(n, j)
    rows = _generator_rows(int_forms, m, n, j)
    if not rows:
        return _Quotient(list(range(size)), {}, [], 1)
    M = flint.fmpz_mat(len(rows), size, [x for r in rows for x in r])
    red, den, rk = M.rref()
    data = red.tolist()[:rk]
    pivot_row = {}
    for i, row in enumerate(data):
        p = next(c for c, x in enumerate(row) if x != 0)
        pivot_row[p] = i
    nonpivots = [c for c in range(size) if c not in pivot_row]
    return _Quotient(nonpivots, pivot_row, [[int(x) for x in row] for row in data], int(den))


@dataclass
class ChainComplexRJ:
    """The complex ``0 -> R^{cells} -> (+) R/J_tau -> ... -> (+) R/J_v -> 0``.

    ``faces[i]`` lists the interior ``i``-faces (all cells for ``i = k``),
    ``ideals[i]`` their face ideals and ``boundary[i]`` the signed incidences
    ``(source, target, sign)`` of the map from index ``i`` to ``i - 1``.
    ``extra_vars`` counts polynomial variables split off by the reduction.
    """

    k: int
    r: int
    nvars: int
    faces: list[list[tuple]]
    ideals: list[list[PowerIdeal]]
    boundary: list[list[tuple[int, int, int]]]
    extra_vars: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def total_vars(self) -> int:
        return self.nvars + self.extra_vars

    def _int_forms(self, i: int, a: int) -> tuple:
        return tuple(tuple(f.integer_coefficients()) for f in self.ideals[i][a].forms)

    def _quotients(self, j: int) -> list[list[_Quotient]]:
        return [[_quotient(self._int_forms(i, a), self.r + 1, self.nvars, j)
                 for a in range(len(self.faces[i]))] for i in range(self.k + 1)]

    def boundary_matrix(self, i: int, j: int, quotients=None) -> flint.fmpz_mat:
        """Integer matrix of the degree-``j`` map from index ``i`` to ``i - 1``.

        Rows of target block ``b`` are scaled by that block's denominator, so
        the matrix has the rank of the rational map.
        """
        qs = quotients if quotients is not None else self._quotients(j)
        src, tgt = qs[i], qs[i - 1]
        src_off = list(itertools.accumulate([0] + [q.dim for q in src]))
        tgt_off = list(itertools.accumulate([0] + [q.dim for q in tgt]))
        nrows, ncols = tgt_off[-1], src_off[-1]
        if nrows == 0 or ncols == 0:
            return flint.fmpz_mat(nrows, ncols)
        mat = [[0] * ncols for _ in range(nrows)]
        tgt_pos = [{c: t for t, c in enumerate(q.nonpivots)} for q in tgt]
        for s, t, sign in self.boundary[i]:
            qs_, qt = src[s], tgt[t]
            pos = tgt_pos[t]
            for col_local, mono in enumerate(qs_.nonpivots):
                col = src_off[s] + col_local
                if mono in pos:
                    mat[tgt_off[t] + pos[mono]][col] += sign * qt.den
                else:
                    row = qt.rows[qt.pivot_row[mono]]
                    for tl, c in enumerate(qt.nonpivots):
                        if row[c]:
                            mat[tgt_off[t] + tl][col] -= sign * row[c]
        return flint.fmpz_mat(nrows, ncols, [x for row in mat for x in row])

    def degree_data(self, j: int) -> tuple[list[int], list[int]]:
        """Term dimensions and boundary ranks of the degree-``j`` strand (own variables)."""
        if j in self._cache:
            return self._cache[j]
        if j < 0:
            return [0] * (self.k + 1), [0] * (self.k + 2)
        qs = self._quotients(j)
        dims = [sum(q.dim for q in qs[i]) for i in range(self.k + 1)]
        ranks = [0] * (self.k + 2)
        for i in range(1, self.k + 1):
            if dims[i] and dims[i - 1]:
                ranks[i] = self.boundary_matrix(i, j, qs).rank()
        self._cache[j] = (dims, ranks)
        return dims, ranks

    def check_d2(self, j: int) -> bool:
        """Whether consecutive boundary maps compose to zero in degree ``j``."""
        qs = self._quotients(j)
        for i in range(2, self.k + 1):
            a = self.boundary_matrix(i - 1, j, qs)
            b = self.boundary_matrix(i, j, qs)
            if not (a.nrows() and b.ncols() and a.ncols()):
                continue
            # rows of b carry the denominators of the middle blocks; undo them
            dens = [q.den for q in qs[i - 1] for _ in range(q.dim)]
            top = math.lcm(*dens)
            scale = flint.fmpz_mat(len(dens), len(dens))
            for t, den in enumerate(dens):
                scale[t, t] = top // den
            if not (a * scale * b).is_zero():
                return False
        return True

    def _strand_homology(self, j: int) -> list[int]:
        dims, ranks = self.degree_data(j)
        return [dims[i] - ranks[i] - ranks[i + 1] for i in range(self.k + 1)]

    def homology(self, d: int) -> list[int]:
        """``[dim H_i(R/J)_d for i in 0..k]`` in the full ring."""
        if self.extra_vars == 0:
            return self._strand_homology(d)
        out = [0] * (self.k + 1)
        for j in range(d + 1):
            w = n_monomials(self.extra_vars, d - j)
            for i, h in enumerate(self._strand_homology(j)):
                out[i] += w * h
        return out

    def term_dims(self, d: int) -> list[int]:
        if self.extra_vars == 0:
            return self.degree_data(d)[0]
        out = [0] * (self.k + 1)
        for j in range(d + 1):
            w = n_monomials(self.extra_vars, d - j)
            for i, x in enumerate(self.degree_data(j)[0]):
                out[i] += w * x
        return out


def _assemble(delta: SimplicialComplex, r: int) -> ChainComplexRJ:
    k = delta.k
    n = k + 1
    faces = [list(delta.interior_faces(i)) for i in range(k + 1)]
    ideals = [[face_ideal(delta, g, r) for g in faces[i]] for i in range(k)]
    ideals.append([PowerIdeal.zero(n, r + 1) for _ in faces[k]])
    boundary: list[list[tuple[int, int, int]]] = [[]]
    for i in range(1, k + 1):
        pos = {g: t for t, g in enumerate(faces[i - 1])}
        inc = []
        for s, g in enumerate(faces[i]):
            for drop in range(len(g)):
                sub = g[:drop] + g[drop + 1:]
                if sub in pos:
                    inc.append((s, pos[sub], -1 if drop % 2 else 1))
        boundary.append(inc)
    return ChainComplexRJ(k, r, n, faces, ideals, boundary)


def _reduced(cx: ChainComplexRJ) -> ChainComplexRJ:
    forms = sorted({f for row in cx.ideals for J in row for f in J.forms})
    pivots, _ = essential_frame([f.coefficients for f in forms])
    e = len(pivots)
    if e >= cx.nvars or e == 0:
        return cx
    ideals = [[PowerIdeal(_reduce_forms(J.forms, pivots), J.exponent, e) for J in row] for row in cx.ideals]
    return ChainComplexRJ(cx.k, cx.r, e, cx.faces, ideals, cx.boundary, extra_vars=cx.nvars - e)


@complex_cache(maxsize=64)
def _cached_complex(delta: SimplicialComplex, r: int, reduce: bool) -> ChainComplexRJ:
    cx = _assemble(delta, r)
    return _reduced(cx) if reduce else cx


def build_complex(delta: SimplicialComplex, r: int, reduce: bool = False, validate: bool = True) -> ChainComplexRJ:
    """Assemble ``R/J(delta)`` for smoothness ``r``."""
    if r < 0:
        raise ValueError("smoothness must be nonnegative")
    if validate:
        delta.require_valid()
    return _cached_complex(delta, r, reduce)


def homology_graded_dims(delta: SimplicialComplex, r: int, d: int, method: str = "monomial",
                         reduce: bool = True) -> list[int]:
    """``[dim H_i(R/J(delta))_d for i = 0..k]``.

    ``method="monomial"`` uses standard-monomial bases of each ``(R/J)_d``
    (over the span of the forms when ``reduce`` and that span is smaller);
    ``method="frame"`` uses :class:`FrameComplex`.  Both are exact.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if r < 0:
        raise ValueError("smoothness must be nonnegative")
    if method == "frame":
        return _frame_complex(delta, r, d).homology()
    if method != "monomial":
        raise ValueError(f"unknown method {method!r}")
    return build_complex(delta, r, reduce=reduce).homology(d)


def term_dims(delta: SimplicialComplex, r: int, d: int) -> list[int]:
    """``dim (R/J)_d`` summed over the interior faces of each dimension ``0..k``."""
    delta.require_valid()
    n = delta.k + 1
    out = []
    for i in range(delta.k + 1):
        total = 0
        for g in delta.interior_faces(i):
            if i == delta.k:
                total += n_monomials(n, d)
            else:
                total += n_monomials(n, d) - ideal_graded_dim(face_ideal(delta, g, r), d)
        out.append(total)
    return out


def euler_dim(delta: SimplicialComplex, r: int, d: int) -> int:
    """Alternating sum ``sum_i (-1)^i dim (R/J_{k-i})_d`` of quotient dimensions."""
    dims = term_dims(delta, r, d)
    k = delta.k
    return sum((-1) ** (k - i) * dims[i] for i in range(k + 1))


# ---------------------------------------------------------------------------
# realization in local barycentric frames


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_pow(a: dict, n: int, nvars: int) -> dict:
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


class _LocalQuotient:
    """``S/J'`` for ``J'`` generated by ``m``-th powers of forms in ``e`` variables, degree by degree."""

    def __init__(self, int_forms: tuple, m: int, e: int, dmax: int):
        self.e = e
        self.degrees: list[_Quotient] = []
        for j in range(dmax + 1):
            q = _quotient(int_forms, m, e, j)
            if q.dim == 0:
                break
            self.degrees.append(q)
        self.index = [monomial_index(e, j) for j in range(len(self.degrees))]
        self.basis = [[monomials(e, j)[c] for c in q.nonpivots] for j, q in enumerate(self.degrees)]
        self._pos = [{c: t for t, c in enumerate(q.nonpivots)} for q in self.degrees]

    @property
    def top(self) -> int:
        """First degree in which the quotient vanishes (or ``dmax + 1``)."""
        return len(self.degrees)

    def normal_form(self, mono: tuple) -> dict[int, Fraction]:
        """Coordinates of a monomial of degree ``j < top`` on the standard monomials of degree ``j``."""
        j = sum(mono)
        q = self.degrees[j]
        c = self.index[j][mono]
        pos = self._pos[j]
        if c in pos:
            return {pos[c]: Fraction(1)}
        row = q.rows[q.pivot_row[c]]
        return {t: Fraction(-row[col], q.den) for t, col in enumerate(q.nonpivots) if row[col]}


@dataclass
class _FaceFrame:
    face: tuple
    cell: tuple             # frame cell containing the face
    free: list[int]         # positions (in cell) of the face's vertices
    vpos: list[int]         # the other positions
    quotient: _LocalQuotient | None
    basis: list[tuple]      # (V exponents, free exponents), grouped by V-degree
    index: dict


class FrameComplex:
    """``R/J(delta)`` in degree ``d`` written in barycentric coordinates of nearby cells.

    Each interior face ``g`` takes the barycentric forms of a cell containing
    it as coordinates.  The forms vanishing on ``g`` are the coordinates of
    the vertices outside ``g``, so ``J_g`` only involves those and
    ``R/J_g = (S/J') (x) Q[free]`` with ``S/J'`` finite dimensional.  The
    boundary maps become sparse after this change of coordinates.
    """

    def __init__(self, delta: SimplicialComplex, r: int, d: int):
        delta.require_valid()
        self.delta, self.r, self.d, self.k = delta, r, d, delta.k
        cx = build_complex(delta, r, reduce=False, validate=False)
        self.faces = cx.faces
        self.incidence = cx.boundary
        self.frames = [[self._frame(g, i) for g in self.faces[i]] for i in range(self.k + 1)]
        self._ranks: list[int] | None = None

    def _cell_for(self, g: tuple) -> tuple:
        gs = set(g)
        return next(c for c in self.delta.cells if gs <= set(c))

    def _frame(self, g: tuple, i: int) -> _FaceFrame:
        delta, k, d = self.delta, self.k, self.d
        cell = self._cell_for(g)
        free = [cell.index(v) for v in g]
        vpos = [p for p in range(k + 1) if p not in free]
        if i == k:
            basis = [((), e) for e in monomials(k + 1, d)]
            return _FaceFrame(g, cell, free, vpos, None, basis, {b: n for n, b in enumerate(basis)})
        lifted = [(Fraction(1),) + tuple(p) for p in delta.points(cell)]
        int_forms = []
        for f in face_ideal(delta, g, self.r).forms:
            vals = [sum(c * x for c, x in zip(f.coefficients, lifted[p])) for p in vpos]
            int_forms.append(tuple(clear_denominators(vals)))
        q = _LocalQuotient(tuple(sorted(set(int_forms))), self.r + 1, len(vpos), d)
        basis = []
        for j in range(q.top):
            for s in q.basis[j]:
                for e in monomials(len(free), d - j):
                    basis.append((s, e))
        return _FaceFrame(g, cell, free, vpos, q, basis, {b: n for n, b in enumerate(basis)})

    def dims(self) -> list[int]:
        return [sum(len(f.basis) for f in row) for row in self.frames]

    def _transition(self, src: _FaceFrame, tgt: _FaceFrame):
        """Linear forms of the target frame's V-part for each source coordinate."""
        pts = self.delta.points(src.cell)
        out = []
        tverts = [self.delta.points([v])[0] for v in tgt.cell]
        bary = [barycentric_coordinates(p, pts) for p in tverts]
        for a in range(self.k + 1):
            out.append({tuple(int(q == n) for n in range(len(tgt.vpos))): bary[b][a]
                        for q, b in enumerate(tgt.vpos) if bary[b][a]})
        return out

    def map_columns(self, i: int) -> list[dict[int, Fraction]]:
        """Sparse columns of the map from index ``i`` to ``i - 1``."""
        src_frames, tgt_frames = self.frames[i], self.frames[i - 1]
        offs = list(itertools.accumulate([0] + [len(f.basis) for f in tgt_frames]))
        cols: list[dict] = []
        per_src: dict[int, list] = {}
        for s, t, sign in self.incidence[i]:
            per_src.setdefault(s, []).append((t, sign))
        for s, sf in enumerate(src_frames):
            pieces = [(tgt_frames[t], offs[t], sign, self._transition(sf, tgt_frames[t]))
                      for t, sign in per_src.get(s, [])]
            caches = [dict() for _ in pieces]
            for sv, se in sf.basis:
                col: dict[int, Fraction] = {}
                for (tf, off, sign, trans), cache in zip(pieces, caches):
                    self._image(sf, tf, sv, se, trans, cache, off, sign, col)
                cols.append({r_: c for r_, c in col.items() if c})
        return cols

    def _image(self, sf, tf, sv, se, trans, cache, off, sign, col):
        """Add ``sign`` times the image of basis element ``(sv, se)`` of ``sf`` in ``tf``."""
        k = self.k
        expo = [0] * (k + 1)
        for p, x in zip(sf.vpos, sv):
            expo[p] = x
        for p, x in zip(sf.free, se):
            expo[p] = x
        tcell_pos = {v: n for n, v in enumerate(tf.cell)}
        # source positions whose vertex lies in the target face (they carry a free part)
        shared = [(p, tf.free.index(tcell_pos[sf.cell[p]])) for p in range(k + 1) if sf.cell[p] in tf.face]
        shared_p = {p for p, _ in shared}
        outside = tuple(expo[p] if p not in shared_p else 0 for p in range(k + 1))
        e_out = sum(outside)
        q = tf.quotient
        top = q.top
        if e_out >= top:
            return
        nv = len(tf.vpos)
        key_out = outside
        base = cache.get(key_out)
        if base is None:
            base = {(0,) * nv: Fraction(1)}
            for p in range(k + 1):
                if outside[p]:
                    base = _poly_mul(base, _poly_pow(trans[p], outside[p], nv))
            cache[key_out] = base
        ranges = [range(min(expo[p], top - 1 - e_out) + 1) for p, _ in shared]
        for t in itertools.product(*ranges):
            st = sum(t)
            if e_out + st >= top:
                continue
            key = (key_out, t)
            nf = cache.get(key)
            if nf is None:
                poly = base
                for (p, _), tp in zip(shared, t):
                    if tp:
                        poly = _poly_mul(poly, _poly_pow(trans[p], tp, nv))
                nf = {}
                for mono, c in poly.items():
                    for idx, v in q.normal_form(mono).items():
                        sm = q.basis[sum(mono)][idx]
                        nf[sm] = nf.get(sm, 0) + c * v
                nf = {m_: c for m_, c in nf.items() if c}
                cache[key] = nf
            if not nf:
                continue
            coef = Fraction(sign)
            fe = [0] * len(tf.free)
            for (p, fpos), tp in zip(shared, t):
                coef *= comb(expo[p], tp)
                fe[fpos] = expo[p] - tp
            fe = tuple(fe)
            for sm, c in nf.items():
                row = off + tf.index[(sm, fe)]
                col[row] = col.get(row, 0) + coef * c

    def ranks(self) -> list[int]:
        if self._ranks is None:
            dims = self.dims()
            out = [0] * (self.k + 2)
            for i in range(1, self.k + 1):
                if dims[i] and dims[i - 1]:
                    out[i] = sparse_rank(self.map_columns(i))
            self._ranks = out
        return self._ranks

    def homology(self) -> list[int]:
        dims, ranks = self.dims(), self.ranks()
        return [dims[i] - ranks[i] - ranks[i + 1] for i in range(self.k + 1)]

    def check_d2(self) -> bool:
        """Whether each composite of consecutive maps vanishes."""
        for i in range(2, self.k + 1):
            first = self.map_columns(i)
            second = self.map_columns(i - 1)
            for col in first:
                acc: dict[int, Fraction] = {}
                for mid, c in col.items():
                    for row, x in second[mid].items():
                        acc[row] = acc.get(row, 0) + c * x
                if any(acc.values()):
                    return False
        return True


@complex_cache(maxsize=512)
def _frame_complex(delta: SimplicialComplex, r: int, d: int) -> FrameComplex:
    return FrameComplex(delta, r, d)
