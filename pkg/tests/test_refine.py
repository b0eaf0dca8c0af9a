from fractions import Fraction

import pytest

from splitsplines.fixtures import spoke_complex, spoke_split
from splitsplines.formulas import binom_safe
from splitsplines.mesh import MeshError, SimplicialComplex, barycenter, simplex_volume
from splitsplines.oracle import spline_dim
from splitsplines.refine import (alfeld, alfeld_complex, double_alfeld, facet_split, is_simple, is_split, pyramid,
                                 replace_cell, standard_simplex, verify_additivity)

F = Fraction


def test_alfeld_examples():
    T = standard_simplex(2)
    assert T.vertices == ((0, 0), (3, 0), (0, 3))
    rec = alfeld(T, 0, (1, 1))
    assert len(rec.fine.cells) == 3 and rec.new_vertices() == [(1, 1)]
    assert len(alfeld(standard_simplex(3)).fine.cells) == 4
    with pytest.raises(MeshError):
        alfeld(T, 0, (1, 0))


def test_facet_split_examples():
    T2, T3 = standard_simplex(2), standard_simplex(3)
    assert len(facet_split(T2)[-1].fine.cells) == 6
    steps = facet_split(T3, subset=[0])
    assert len(steps) == 2 and len(steps[-1].fine.cells) == 6
    v = T3.vertices
    for i, rec in enumerate(facet_split(T3)[1:]):
        (ui,) = rec.new_vertices()
        assert ui == barycenter([p for j, p in enumerate(v) if j != i])


def test_facet_split_rejects_boundary_point():
    T = standard_simplex(2)
    with pytest.raises(MeshError):
        facet_split(T, points={0: (3, 0)})


def test_double_alfeld_examples():
    T2, T3 = standard_simplex(2), standard_simplex(3)
    assert len(double_alfeld(T2)[-1].fine.cells) == 9
    steps = double_alfeld(T3, subset=[0])
    fine = steps[-1].fine
    assert len(fine.cells) == 7
    first = steps[0].fine
    kept = set(first.canonical_cells()) & set(fine.canonical_cells())
    assert len(kept) == 3
    k, u = 3, barycenter(T3.vertices)
    for i, rec in enumerate(double_alfeld(T3)[1:]):
        (ui,) = rec.new_vertices()
        assert ui == tuple(a + (a - b) / (k + 1) for a, b in zip(u, T3.vertices[i]))


def test_double_alfeld_collinearity():
    T = standard_simplex(2)
    with pytest.raises(MeshError):
        double_alfeld(T, points={0: (F(3, 2), F(5, 4))})
    steps = double_alfeld(T, points={0: (F(3, 2), F(5, 4))}, require_collinear=False)
    assert len(steps[-1].fine.cells) == 9


def test_replace_cell_examples():
    A = alfeld(standard_simplex(2)).fine
    rec = alfeld(A, 1)
    assert rec.fine.validate().valid
    A3 = alfeld(standard_simplex(3)).fine
    u = A3.vertices[-1]
    v = standard_simplex(3).vertices
    sigma = tuple(sorted(A3.vertex_id(p) for p in [u, v[1], v[2], v[3]]))
    piece = facet_split(standard_simplex(3), subset=[0])[1].piece
    rec = replace_cell(A3, sigma, piece)
    assert len(rec.fine.cells) == 6


def two_triangles():
    return SimplicialComplex([(0, 0), (2, 0), (0, 2), (2, 2)], [(0, 1, 2), (1, 2, 3)])


def test_simplicity():
    D = two_triangles()
    sigma = D.cells[0]
    assert is_simple(D, sigma, alfeld_complex(D.points(sigma)))
    # bisect the shared edge (1,2) at its midpoint (1,1)
    bis = SimplicialComplex([(0, 0), (2, 0), (0, 2), (1, 1)], [(0, 1, 3), (0, 2, 3)])
    assert not is_simple(D, sigma, bis)
    with pytest.raises(MeshError):
        replace_cell(D, sigma, bis)
    # bisecting a boundary edge is allowed
    bnd = SimplicialComplex([(0, 0), (2, 0), (0, 2), (1, 0)], [(0, 3, 2), (3, 1, 2)])
    assert is_simple(D, sigma, bnd)


def test_pyramid_piece_is_simple():
    steps = facet_split(standard_simplex(2))
    for rec in steps:
        assert is_simple(rec.coarse, rec.cell, rec.piece)


def test_coverage_by_volume():
    for rec in double_alfeld(standard_simplex(3)):
        total = sum(abs(simplex_volume(rec.piece.points(c))) for c in rec.piece.cells)
        assert total == abs(simplex_volume(rec.coarse.points(rec.cell)))


def test_spoke_fixtures():
    aligned, generic = spoke_split(True), spoke_split(False)
    assert spoke_complex().validate().valid
    for r in (1, 2, 3):
        assert is_split(aligned, r) == (True, [])
    assert is_split(generic, 1)[0]
    inner = set(generic.coarse.points(generic.cell))
    for r in (2, 3):
        ok, wit = is_split(generic, r)
        assert not ok and wit
        assert all(len(g) == 1 and generic.fine.points(g)[0] in inner for g in wit)


def test_r1_split_without_collinearity():
    T = standard_simplex(2)
    for rec in double_alfeld(T, points={0: (F(3, 2), F(5, 4)), 2: (F(3, 2), F(1, 4))}, require_collinear=False):
        assert is_split(rec, 1)[0]


def test_additivity_examples():
    A = alfeld(standard_simplex(2)).fine
    rep = verify_additivity(alfeld(A, 0), 1, range(7))
    assert rep.passed and len(rep.rows) == 7
    A3 = alfeld(standard_simplex(3))
    step = facet_split(standard_simplex(3), subset=[0])[1]
    assert step.coarse == A3.fine
    assert verify_additivity(step, 1, range(6)).passed
    rec = alfeld(standard_simplex(2))
    rep = verify_additivity(rec, 1, range(6))
    assert rep.passed
    assert all(row["fine"] == row["piece"] for row in rep.rows)


def test_additivity_reports_failure():
    # a non-split step: the identity fails at some degree and the report says so
    rec = spoke_split(False)
    rep = verify_additivity(rec, 2, range(5))
    assert not rep.split and not rep.passed
    assert "split=False" in str(rep)


def test_pyramid_shape():
    P = pyramid(3)
    assert len(P.cells) == 3 and P.validate().valid
    assert spline_dim(P, 0, 1) == len(P.vertices)
