"""Closed-form spline dimensions for Alfeld, pyramid, facet and double Alfeld splits.

All binomials use :func:`binom_safe`, which is zero whenever the top is
smaller than the bottom (negative tops included), so the formulas hold for
every degree ``d >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

__all__ = [
    "DimFormulaParams",
    "binom_safe",
    "A_formula",
    "P_formula",
    "dim_alfeld",
    "dim_pyramid",
    "dim_facet",
    "dim_double_alfeld",
    "dim_partial_facet",
    "dim_partial_double_alfeld",
    "pyramid_sum_identity",
    "infer_generator_degrees",
    "SCHEMES",
    "scheme_dim",
]


@dataclass(frozen=True)
class DimFormulaParams:
    k: int
    d: int
    r: int

    def __post_init__(self):
        if self.k < 1 or self.d < 0 or self.r < 0:
            raise ValueError(f"need k >= 1, d >= 0, r >= 0 (got {self})")


def binom_safe(n: int, k: int) -> int:
    if k < 0 or n < k:
        return 0
    return comb(n, k)


def A_formula(k: int, d: int, r: int) -> int:
    """Excess of ``dim S^r_d`` on the Alfeld split over global polynomials."""
    DimFormulaParams(k, d, r)
    if r % 2:
        return k * binom_safe(d + k - (r + 1) * (k + 1) // 2, k)
    s = r * (k + 1) // 2
    return sum(binom_safe(d + j - s, k) for j in range(k))


def P_formula(k: int, d: int, r: int) -> int:
    """Excess of ``dim S^r_d`` on the pyramid over global polynomials.

    For even ``r`` the sum runs over ``k - 1`` consecutive binomials, from
    ``d+k-1-rk/2`` down to ``d+1-rk/2``.
    """
    DimFormulaParams(k, d, r)
    if r % 2:
        return (k - 1) * binom_safe(d + k - (r + 1) * k // 2, k)
    s = r * k // 2
    return sum(binom_safe(d + j - s, k) for j in range(1, k))


def dim_alfeld(k: int, d: int, r: int) -> int:
    return binom_safe(d + k, k) + A_formula(k, d, r)


def dim_pyramid(k: int, d: int, r: int) -> int:
    return binom_safe(d + k, k) + P_formula(k, d, r)


def dim_facet(k: int, d: int, r: int) -> int:
    return binom_safe(d + k, k) + A_formula(k, d, r) + (k + 1) * P_formula(k, d, r)


def dim_double_alfeld(k: int, d: int, r: int) -> int:
    return binom_safe(d + k, k) + (k + 2) * A_formula(k, d, r)


def dim_partial_facet(k: int, d: int, r: int, n_split: int) -> int:
    """Facet split carried out on ``n_split`` of the ``k+1`` facets."""
    return binom_safe(d + k, k) + A_formula(k, d, r) + n_split * P_formula(k, d, r)


def dim_partial_double_alfeld(k: int, d: int, r: int, n_split: int) -> int:
    """Double Alfeld split carried out on ``n_split`` of the ``k+1`` subsimplices."""
    return binom_safe(d + k, k) + (1 + n_split) * A_formula(k, d, r)


def pyramid_sum_identity(k: int, d: int, r: int) -> bool:
    """Cone over an Alfeld split: summing the ``(k-1)``-dim Alfeld dimensions gives the pyramid formula."""
    if k < 2:
        raise ValueError("the pyramid needs k >= 2")
    total = sum(binom_safe(i + k - 1, k - 1) + A_formula(k - 1, i, r) for i in range(d + 1))
    return total == dim_pyramid(k, d, r)


def infer_generator_degrees(h: Mapping[int, int] | Sequence[int], k: int) -> dict[int, int]:
    """Degrees of free generators matching ``h(d) = sum_j binom(d - a_j + k, k)``.

    ``h`` maps each degree ``0..d_max`` to a dimension.  Generators are peeled
    off greedily from the lowest degree with a positive residual.
    """
    if not isinstance(h, Mapping):
        h = dict(enumerate(h))
    degrees = sorted(h)
    if degrees != list(range(len(degrees))):
        raise ValueError("h must be given for every degree 0..d_max")
    residual = dict(h)
    out: dict[int, int] = {}
    for d in degrees:
        m = residual[d]
        if m < 0:
            raise ValueError(f"residual is negative in degree {d}: not a free-module dimension function")
        if m == 0:
            continue
        out[d] = m
        for e in degrees[d:]:
            residual[e] -= m * binom_safe(e - d + k, k)
    return out


SCHEMES = {
    "simplex": lambda k, d, r: binom_safe(d + k, k),
    "alfeld": dim_alfeld,
    "pyramid": dim_pyramid,
    "facet": dim_facet,
    "double-alfeld": dim_double_alfeld,
}


def scheme_dim(scheme: str, k: int, d: int, r: int) -> int:
    try:
        f = SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}") from None
    return f(k, d, r)
