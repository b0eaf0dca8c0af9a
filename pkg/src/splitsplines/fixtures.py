"""Named test meshes: builtin simplices, the split constructions, and random meshes."""
from __future__ import annotations

import random
from fractions import Fraction

from .mesh import SimplicialComplex
from .refine import SubdivisionRecord, alfeld, double_alfeld, facet_split, pyramid, standard_simplex

__all__ = [
    "SPOKE_POINTS",
    "spoke_complex",
    "spoke_split",
    "construction",
    "builtin",
    "stellar",
    "random_mesh",
]

# Inner triangle abc surrounded by a ring of nine triangles.  The spokes
# aA, bB, cC all pass through the origin.
SPOKE_POINTS = {
    "a": (1, 0), "b": (0, 1), "c": (-1, -1),
    "A": (3, 0), "B": (0, 3), "C": (-5, -5),
    "P": (-5, -3), "Q": (-3, -5), "Z": (5, 5),
}
_SPOKE_CELLS = ["abc", "acQ", "aQA", "aAZ", "aZb", "bZB", "bBP", "bPc", "cPC", "cCQ"]
ALIGNED_POINT = (0, 0)
GENERIC_POINT = (Fraction(1, 5), Fraction(1, 10))


def spoke_complex() -> SimplicialComplex:
    names = list(SPOKE_POINTS)
    return SimplicialComplex([SPOKE_POINTS[n] for n in names],
                             [[names.index(x) for x in c] for c in _SPOKE_CELLS])


def spoke_split(aligned: bool = True) -> SubdivisionRecord:
    """Alfeld split of the inner triangle at the spoke intersection or at a generic point."""
    return alfeld(spoke_complex(), 0, ALIGNED_POINT if aligned else GENERIC_POINT)


def construction(scheme: str, k: int) -> list[SubdivisionRecord]:
    """The refinement steps building ``scheme`` on ``T_k``."""
    T = standard_simplex(k)
    if scheme == "alfeld":
        return [alfeld(T)]
    if scheme == "facet":
        return facet_split(T)
    if scheme == "double-alfeld":
        return double_alfeld(T)
    raise ValueError(f"unknown scheme {scheme!r}")


def builtin(name: str, k: int) -> SimplicialComplex:
    """``simplex``, ``alfeld``, ``facet``, ``double-alfeld`` or ``pyramid`` on ``T_k``."""
    if name == "simplex":
        return standard_simplex(k)
    if name == "pyramid":
        return pyramid(k)
    return construction(name, k)[-1].fine


def stellar(delta: SimplicialComplex, face, p) -> SimplicialComplex:
    """Insert ``p``, interior to ``face``, and cone it over the link of the face."""
    face = tuple(face)
    verts = list(delta.vertices) + [tuple(Fraction(x) for x in p)]
    new = len(verts) - 1
    cells = []
    for c in delta.cells:
        if not set(face) <= set(c):
            cells.append(c)
            continue
        for v in face:
            cells.append(tuple(new if x == v else x for x in c))
    return SimplicialComplex(verts, cells)


def _random_interior(rng: random.Random, pts, den: int):
    w = [rng.randint(1, den) for _ in pts]
    total = sum(w)
    return tuple(sum(Fraction(wi, total) * x[j] for wi, x in zip(w, pts)) for j in range(len(pts[0])))


def random_mesh(seed: int, k: int = 2, steps: int = 3, den: int = 7) -> SimplicialComplex:
    """A valid mesh from ``T_k`` by ``steps`` random stellar subdivisions.

    Each step picks a random face of dimension >= 1 and a random rational
    point in its relative interior, so the result is always a proper
    triangulation of ``T_k``.
    """
    rng = random.Random(seed)
    delta = standard_simplex(k)
    for _ in range(steps):
        dim = rng.randint(1, k)
        faces = [f for f in delta.faces(dim) if len(f) == dim + 1]
        face = rng.choice(sorted(faces))
        delta = stellar(delta, face, _random_interior(rng, delta.points(face), den))
    return delta
