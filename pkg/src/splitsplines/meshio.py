"""JSON mesh files with exact rational coordinates.

A mesh file looks like::

    {"ambient_dim": 2,
     "vertices": [["0", "0"], ["3", "0"], ["0", "3"], ["1", "1"]],
     "cells": [[0, 1, 3], [1, 2, 3], [0, 2, 3]]}

Coordinates may be integers or strings holding an integer, ``"p/q"`` or a
decimal; decimals are read as the exact fraction they denote.  Floats are
rejected because they are not exact.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .mesh import MeshError, SimplicialComplex
from .refine import SubdivisionRecord

__all__ = [
    "MeshFormatError",
    "parse_rational",
    "format_rational",
    "mesh_from_dict",
    "mesh_to_dict",
    "load_mesh",
    "dump_mesh",
    "record_to_dict",
]


class MeshFormatError(ValueError):
    """The file is not a well-formed mesh description."""


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise MeshFormatError(f"coordinate {x!r} is not exact; write it as a string")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise MeshFormatError(f"cannot read {x!r} as a rational")
    try:
        return Fraction(x.strip())
    except ZeroDivisionError:
        raise MeshFormatError(f"zero denominator in {x!r}") from None
    except ValueError:
        raise MeshFormatError(f"malformed rational {x!r}") from None


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def mesh_from_dict(data: dict, validate: bool = True) -> SimplicialComplex:
    if not isinstance(data, dict):
        raise MeshFormatError("mesh must be a JSON object")
    missing = {"vertices", "cells"} - data.keys()
    if missing:
        raise MeshFormatError(f"missing keys: {', '.join(sorted(missing))}")
    verts = [[parse_rational(c) for c in v] for v in data["vertices"]]
    k = data.get("ambient_dim", len(verts[0]) if verts else 0)
    if not isinstance(k, int) or k < 1:
        raise MeshFormatError(f"bad ambient_dim {k!r}")
    for i, v in enumerate(verts):
        if len(v) != k:
            raise MeshFormatError(f"vertex {i} has {len(v)} coordinates, expected {k}")
    cells = []
    for c in data["cells"]:
        if not all(isinstance(i, int) and not isinstance(i, bool) for i in c):
            raise MeshFormatError(f"cell {c!r} must list vertex indices")
        if any(not 0 <= i < len(verts) for i in c):
            raise MeshFormatError(f"cell {c!r} refers to a missing vertex")
        cells.append(c)
    try:
        delta = SimplicialComplex(verts, cells)
    except MeshError as exc:
        raise MeshFormatError(str(exc)) from None
    if validate:
        delta.require_valid()
    return delta


def mesh_to_dict(delta: SimplicialComplex, canonical: bool = True) -> dict:
    """Serialize; with ``canonical`` the vertices are sorted and cells renumbered."""
    verts = list(delta.vertices)
    cells = [list(c) for c in delta.cells]
    if canonical:
        order = sorted(range(len(verts)), key=lambda i: verts[i])
        new = {old: n for n, old in enumerate(order)}
        verts = [verts[i] for i in order]
        cells = sorted(sorted(new[i] for i in c) for c in cells)
    return {
        "ambient_dim": delta.k,
        "vertices": [[format_rational(x) for x in v] for v in verts],
        "cells": cells,
    }


def load_mesh(path: str | Path, validate: bool = True) -> SimplicialComplex:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"{path}: {exc}") from None
    return mesh_from_dict(data, validate)


def dump_mesh(delta: SimplicialComplex, path: str | Path) -> None:
    Path(path).write_text(json.dumps(mesh_to_dict(delta), indent=1) + "\n")


def record_to_dict(rec: SubdivisionRecord) -> dict:
    """Sidecar data for one refinement step, with faces given by coordinates."""
    pts = lambda s, cx: [[format_rational(x) for x in p] for p in cx.points(s)]
    return {
        "label": rec.label,
        "cell": pts(rec.cell, rec.coarse),
        "cell_index": rec.cell_index,
        "piece": mesh_to_dict(rec.piece),
        "new_vertices": [[format_rational(x) for x in p] for p in rec.new_vertices()],
        "new_boundary_faces": [pts(g, rec.fine) for g in rec.new_boundary_faces],
    }
