"""Exact rational linear algebra.

Everything here works over ``fractions.Fraction``.  Dense elimination for
anything beyond toy sizes is delegated to FLINT (``python-flint``), whose
``fmpq_mat``/``fmpz_mat`` routines are exact; :func:`rref_python` is a
plain-Python Gauss-Jordan kept as an independent reference.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import flint

__all__ = [
    "QMatrix",
    "as_fraction",
    "rref",
    "rref_python",
    "rank",
    "kernel_basis",
    "row_space_equal",
    "integer_rank",
    "clear_denominators",
    "sparse_rank",
]

# Below this many entries the pure-Python path is faster than converting.
_SMALL = 64


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, flint numbers and strings (``"p/q"``, decimals) exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational or a string")
    raise TypeError(f"cannot interpret {x!r} as a rational")


class QMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("nrows", "ncols", "_rows", "_flint")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        self.nrows = len(data)
        self.ncols = ncols
        self._rows = data
        self._flint = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "QMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_flint(cls, m: flint.fmpq_mat) -> "QMatrix":
        nr, nc = m.nrows(), m.ncols()
        ent = m.entries()
        out = cls.__new__(cls)
        out.nrows, out.ncols = nr, nc
        out._rows = tuple(
            tuple(Fraction(int(e.p), int(e.q)) for e in ent[i * nc:(i + 1) * nc])
            for i in range(nr)
        )
        out._flint = m
        return out

    def to_flint(self) -> flint.fmpq_mat:
        if self._flint is None:
            flat = [flint.fmpq(x.numerator, x.denominator) for row in self._rows for x in row]
            self._flint = flint.fmpq_mat(self.nrows, self.ncols, flat)
        return self._flint

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def transpose(self) -> "QMatrix":
        return QMatrix(zip(*self._rows), self.nrows) if self.nrows else QMatrix.zeros(self.ncols, 0)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
            return QMatrix(
                [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols]
                 for row in self._rows],
                other.ncols,
            )
        vec = [as_fraction(x) for x in other]
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self._rows)

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._rows for x in row)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"QMatrix({self.nrows}x{self.ncols}: [{body}])"


def _coerce(m) -> QMatrix:
    return m if isinstance(m, QMatrix) else QMatrix(m)


def rref_python(m) -> tuple[QMatrix, list[int], int]:
    """Gauss-Jordan over Fractions, pivoting on the first nonzero entry."""
    m = _coerce(m)
    a = [list(r) for r in m.rows()]
    pivots: list[int] = []
    prow = 0
    for c in range(m.ncols):
        if prow == m.nrows:
            break
        sel = next((i for i in range(prow, m.nrows) if a[i][c] != 0), None)
        if sel is None:
            continue
        a[prow], a[sel] = a[sel], a[prow]
        piv = a[prow][c]
        if piv != 1:
            a[prow] = [x / piv for x in a[prow]]
        prow_vals = a[prow]
        for i in range(m.nrows):
            if i != prow and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], prow_vals)]
        pivots.append(c)
        prow += 1
    return QMatrix(a, m.ncols), pivots, len(pivots)


def _pivots_of_rref(rows: Sequence[Sequence], rk: int) -> list[int]:
    out = []
    for i in range(rk):
        row = rows[i]
        out.append(next(j for j, x in enumerate(row) if x != 0))
    return out


def rref(m) -> tuple[QMatrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank.

    The reduced form is unique, so the FLINT and pure-Python paths agree.
    """
    m = _coerce(m)
    if m.nrows * m.ncols <= _SMALL:
        return rref_python(m)
    red, rk = m.to_flint().rref()
    out = QMatrix.from_flint(red)
    return out, _pivots_of_rref(out.rows(), rk), rk


def rank(m) -> int:
    m = _coerce(m)
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.nrows * m.ncols <= _SMALL:
        return rref_python(m)[2]
    return m.to_flint().rank()


def kernel_basis(m) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space, one vector per free column.

    Vector ``j`` has a 1 in the ``j``-th free column and zeros in the other
    free columns.
    """
    m = _coerce(m)
    red, pivots, rk = rref(m)
    pivset = set(pivots)
    out = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        out.append(tuple(v))
    return out


def row_space_equal(a, b) -> bool:
    a, b = _coerce(a), _coerce(b)
    if a.ncols != b.ncols:
        raise ValueError(f"column counts differ: {a.ncols} vs {b.ncols}")
    ra, _, ka = rref(a)
    rb, _, kb = rref(b)
    return ka == kb and ra.rows()[:ka] == rb.rows()[:kb]


def clear_denominators(row: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive-ish integer vector with the same span."""
    den = math.lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * den) for x in row]


def integer_rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    """Exact rank of an integer matrix given as rows."""
    rows = [r for r in rows if any(r)]
    if not rows or ncols == 0:
        return 0
    flat = [x for r in rows for x in r]
    return flint.fmpz_mat(len(rows), ncols, flat).rank()


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    f = as_fraction(x)
    return flint.fmpq(f.numerator, f.denominator)


def sparse_rank(rows: Iterable, ncols: int | None = None) -> int:
    """Exact rank of a sparse rational matrix given as ``{column: value}`` rows.

    Gaussian elimination with a Markowitz-style pivot choice: the column with
    the fewest entries, then the shortest row in it.  Meant for the very
    sparse, locally coupled systems of smoothness conditions, where fill-in
    stays small.
    """
    import heapq

    work = []
    for r in rows:
        d = {j: _to_fmpq(x) for j, x in dict(r).items() if x != 0}
        if d:
            work.append(d)
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(work):
        for j in r:
            cols.setdefault(j, set()).add(i)
    heap = [(len(s), j) for j, s in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        n, j = heapq.heappop(heap)
        live = cols.get(j)
        if not live:
            continue
        if n != len(live):
            heapq.heappush(heap, (len(live), j))
            continue
        pi = min(live, key=lambda i: len(work[i]))
        prow = work[pi]
        pv = prow[j]
        touched = set()
        for i in list(live):
            if i == pi:
                continue
            row = work[i]
            f = row[j] / pv
            for c, x in prow.items():
                nv = row.get(c, 0) - f * x
                if nv == 0:
                    if c in row:
                        del row[c]
                        cols[c].discard(i)
                        touched.add(c)
                else:
                    if c not in row:
                        cols[c].add(i)
                        touched.add(c)
                    row[c] = nv
        for c in prow:
            cols[c].discard(pi)
            touched.add(c)
        del cols[j]
        work[pi] = {}
        rank += 1
        for c in touched:
            s = cols.get(c)
            if s:
                heapq.heappush(heap, (len(s), c))
    return rank
