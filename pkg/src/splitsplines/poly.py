"""Sparse multivariate polynomials over Q and graded monomial bases."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .linalg import as_fraction

__all__ = [
    "Monomial",
    "Poly",
    "monomials",
    "monomials_upto",
    "monomial_index",
    "n_monomials",
    "linear_power",
]

Monomial = tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[Monomial, ...]:
    """Degree-``d`` monomials in ``nvars`` variables, lex order with x_0 largest."""
    if d < 0:
        return ()
    if nvars == 0:
        return ((),) if d == 0 else ()
    if nvars == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_upto(nvars: int, d: int) -> tuple[Monomial, ...]:
    """Monomials of degree <= ``d``, by increasing degree, lex within a degree."""
    return tuple(m for e in range(d + 1) for m in monomials(nvars, e))


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int, upto: bool = False) -> dict[Monomial, int]:
    basis = monomials_upto(nvars, d) if upto else monomials(nvars, d)
    return {m: i for i, m in enumerate(basis)}


def n_monomials(nvars: int, d: int) -> int:
    if d < 0:
        return 0
    if nvars == 0:
        return int(d == 0)
    return comb(d + nvars - 1, nvars - 1)


@lru_cache(maxsize=4096)
def _multinomials(nvars: int, m: int) -> tuple[tuple[Monomial, int], ...]:
    out = []
    fm = factorial(m)
    for e in monomials(nvars, m):
        c = fm
        for x in e:
            c //= factorial(x)
        out.append((e, c))
    return tuple(out)


def linear_power(coeffs: Sequence, m: int) -> dict[Monomial, Fraction]:
    """Expand ``(c_0 x_0 + ... + c_{n-1} x_{n-1})^m`` by the multinomial theorem."""
    cs = [as_fraction(c) for c in coeffs]
    out = {}
    for e, mult in _multinomials(len(cs), m):
        v = Fraction(mult)
        for c, x in zip(cs, e):
            if x:
                if c == 0:
                    v = 0
                    break
                v *= c ** x
        if v:
            out[e] = v
    return out


class Poly:
    """Polynomial as a map exponent-tuple -> nonzero Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, constant=0) -> "Poly":
        n = len(coeffs)
        terms = {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)}
        terms[(0,) * n] = constant
        return cls(n, terms)

    @classmethod
    def from_vector(cls, nvars: int, basis: Sequence[Monomial], vec: Sequence) -> "Poly":
        return cls(nvars, zip(basis, vec))

    def to_vector(self, index: Mapping[Monomial, int]) -> list[Fraction]:
        v = [Fraction(0)] * len(index)
        for e, c in self.terms.items():
            try:
                v[index[e]] = c
            except KeyError:
                raise ValueError(f"monomial {e} outside the basis") from None
        return v

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable counts differ")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return Poly(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._lift(other)
        out: dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.nvars, 1)
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = point[0]
        pt = [as_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, a in zip(pt, e):
                if a:
                    v *= x ** a
            total += v
        return total

    def substitute(self, i: int, q: "Poly") -> "Poly":
        """Replace variable ``i`` by the polynomial ``q``."""
        by_power: dict[int, dict] = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            by_power.setdefault(e[i], {})
            by_power[e[i]][rest] = by_power[e[i]].get(rest, 0) + c
        out = Poly(self.nvars)
        qpow = {0: Poly.constant(self.nvars, 1)}
        for p in sorted(by_power):
            if p not in qpow:
                qpow[p] = q ** p
            out = out + Poly(self.nvars, by_power[p]) * qpow[p]
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)
