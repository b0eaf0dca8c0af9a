from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splitsplines.fixtures import builtin, random_mesh
from splitsplines.mesh import (AffineForm, MeshError, SimplicialComplex, barycenter,
                               line_hyperplane_intersection)
from splitsplines.refine import alfeld, standard_simplex

TRI = SimplicialComplex([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
TWO = SimplicialComplex([(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 1, 2), (1, 2, 3)])


def test_validate_examples():
    assert TRI.validate().valid
    assert TWO.validate().valid
    bad = SimplicialComplex([(0, 0), (2, 0), (0, 2), (1, 0), (3, 0), (1, 2)], [(0, 1, 2), (3, 4, 5)])
    rep = bad.validate()
    assert not rep.valid and "improper intersection" in str(rep)


def test_validate_degenerate_and_shared_facet():
    flat = SimplicialComplex([(0, 0), (1, 1), (2, 2)], [(0, 1, 2)])
    assert "degenerate cell" in str(flat.validate())
    fan = SimplicialComplex([(0, 0), (1, 0), (0, 1), (1, 1), (-1, -1)], [(0, 1, 2), (1, 2, 3), (0, 1, 4), (0, 2, 4)])
    assert fan.validate().valid


def test_faces():
    assert len(TRI.faces(1)) == 3
    assert len(alfeld(standard_simplex(2)).fine.faces(1)) == 6
    assert len(builtin("facet", 2).faces(2)) == 6
    with pytest.raises(ValueError):
        TRI.faces(3)


def test_interior_faces():
    assert TRI.interior_faces(0) == () and TRI.interior_faces(1) == ()
    assert TWO.interior_faces(1) == ((1, 2),)
    assert TWO.interior_faces(0) == ()
    A = alfeld(standard_simplex(2)).fine
    (u,) = A.interior_faces(0)
    assert A.points(u) == [(1, 1)]


def test_facet_forms():
    m = SimplicialComplex([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1, 2), (0, 2, 3)])
    assert m.facet_form((0, 1)) == AffineForm((0, 1), 0)
    assert m.facet_form((0, 2)) == AffineForm((1, -1), 0)
    t = SimplicialComplex([(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)], [(0, 1, 2, 3)])
    assert t.facet_form((0, 1, 2)) == AffineForm((1, 1, 1), -1)


def test_affine_form_canonical():
    f = AffineForm((0, 2, 4), 6)
    assert f.coefficients == (0, 1, 2) and f.constant == 3
    with pytest.raises(MeshError):
        AffineForm((0, 0), 1)


def test_geometric_contains():
    m = SimplicialComplex([(0, 0), (1, 0), (0, 1), (Fraction(1, 3), Fraction(1, 3)), (1, 1)], [(0, 1, 2)])
    assert m.geometric_contains((0, 1, 2), (0, 1, 2))
    assert m.geometric_contains((3,), (0, 1, 2))
    assert not m.geometric_contains((4,), (0, 1, 2))


def test_barycenter_and_intersection():
    assert barycenter([(0, 0), (3, 0), (0, 3)]) == (1, 1)
    p = line_hyperplane_intersection((0, 0), (1, 1), [(3, 0), (0, 3)])
    assert p == (Fraction(3, 2), Fraction(3, 2))
    with pytest.raises(MeshError):
        line_hyperplane_intersection((0, 0), (1, -1), [(3, 0), (0, 3)])


def test_vertex_dedup():
    m = SimplicialComplex([(0, 0), (1, 0), (0, 1), ("0", "0.0")], [(3, 1, 2)])
    assert len(m.vertices) == 3 and m.cells == ((0, 1, 2),)


@pytest.mark.parametrize("k", [2, 3])
def test_construction_counts(k):
    A, F, AA = builtin("alfeld", k), builtin("facet", k), builtin("double-alfeld", k)
    assert len(A.cells) == k + 1
    assert len(F.cells) == k * k + k
    assert len(AA.cells) == (k + 1) ** 2
    assert len(F.interior_faces(0)) == 1 and len(F.boundary_vertices()) == 2 * k + 2
    assert len(AA.interior_faces(0)) == k + 2 and len(AA.boundary_vertices()) == k + 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_mesh_invariants(seed, k):
    m = random_mesh(seed, k)
    assert m.validate().valid
    counts = m.facet_cells
    assert all(len(c) in (1, 2) for c in counts.values())
    assert len(m.boundary_facets) + len(m.interior_faces(k - 1)) == len(m.faces(k - 1))
    for tau, cells in counts.items():
        f = m.facet_form(tau)
        assert all(f(p) == 0 for p in m.points(tau))
        for c in cells:
            (opp,) = set(m.cells[c]) - set(tau)
            assert f(m.vertices[opp]) != 0
    for g in m.faces(1):
        for tau in m.faces(k - 1):
            assert m.geometric_contains(g, tau) == (set(g) <= set(tau))
