import pytest
from hypothesis import given, settings, strategies as st

from splitsplines.fixtures import builtin, random_mesh
from splitsplines.formulas import binom_safe
from splitsplines.mesh import SimplicialComplex
from splitsplines.oracle import (PiecewisePoly, bernstein_conditions, is_spline, random_piecewise, smoothness_system,
                                 spline_basis, spline_dim)
from splitsplines.poly import Poly
from splitsplines.refine import standard_simplex

TWO = SimplicialComplex([(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 1, 2), (1, 2, 3)])
A2 = builtin("alfeld", 2)


def test_single_simplex_system():
    sys_ = smoothness_system(standard_simplex(2), 2, 3)
    assert sys_.rows == () and sys_.nunknowns == 10
    for k in (2, 3):
        for d in range(4):
            assert spline_dim(standard_simplex(k), 1, d) == binom_safe(d + k, k)


def test_two_triangles():
    s = smoothness_system(TWO, 1, 2)
    assert s.nunknowns == 12 and s.rank() == 5
    assert spline_dim(TWO, 1, 2) == 7


def test_low_degree_forces_equality():
    # d < r+1: every spline is a global polynomial
    for d in range(3):
        assert spline_dim(A2, 2, d) == binom_safe(d + 2, 2)


def test_alfeld_value():
    assert spline_dim(A2, 1, 3) == 12
    assert spline_dim(A2, 1, 3, "cone") == 12


@pytest.mark.parametrize("method", ["dense", "bernstein", "auto"])
def test_methods_agree(method):
    for name in ("alfeld", "facet", "double-alfeld"):
        m = builtin(name, 2)
        for r in range(3):
            for d in range(6):
                assert spline_dim(m, r, d, method=method) == spline_dim(m, r, d, method="dense")


def test_reduced_method():
    P = builtin("pyramid", 3)
    for r in range(3):
        for d in range(5):
            assert spline_dim(P, r, d, "cone", method="reduced") == spline_dim(P, r, d)
    with pytest.raises(ValueError):
        spline_dim(P, 1, 1, "affine", method="reduced")


def test_bernstein_unknown_count():
    # C^0 identifications leave one coefficient per domain point:
    # 4 vertices, 2 inside each of 6 edges, 1 inside each of 3 triangles
    rows, n = bernstein_conditions(A2, 0, 3)
    assert n == 19 and rows == []
    assert spline_dim(A2, 0, 3) == 19
    rows, n = bernstein_conditions(A2, 1, 3)
    assert spline_dim(A2, 1, 3, method="bernstein") == 12


def test_bad_arguments():
    with pytest.raises(ValueError):
        spline_dim(A2, 1, 2, mode="projective")
    with pytest.raises(ValueError):
        spline_dim(A2, -1, 2)
    with pytest.raises(ValueError):
        spline_dim(A2, 1, 2, method="magic")


def test_basis_examples():
    basis = spline_basis(A2, 1, 3)
    assert len(basis) == 12
    assert all(is_spline(A2, 1, f) for f in basis)
    assert len(spline_basis(TWO, 1, 2, "cone")) == 7


def test_global_polynomial_in_span():
    from splitsplines.linalg import QMatrix, rank
    from splitsplines.oracle import cell_basis
    basis = spline_basis(A2, 1, 2)
    mons, nv = cell_basis(2, 2, "affine")
    idx = {m: i for i, m in enumerate(mons)}
    vec = lambda F: [c for p in F.pieces for c in p.to_vector(idx)]
    g = Poly(2, {(2, 0): 1, (1, 1): -3, (0, 0): 5})
    G = PiecewisePoly((g,) * 3, "affine", 2)
    rows = [vec(F) for F in basis]
    assert rank(QMatrix(rows + [vec(G)])) == rank(QMatrix(rows))


def test_is_spline_examples():
    one = Poly.constant(2, 1)
    assert is_spline(A2, 3, PiecewisePoly((one,) * 3, "affine", 0))
    for seed in range(5):
        assert not is_spline(TWO, 0, random_piecewise(TWO, 2, seed=seed))
        assert not is_spline(TWO, 1, random_piecewise(TWO, 2, "cone", seed=seed))
    with pytest.raises(ValueError):
        is_spline(A2, 1, PiecewisePoly((one,) * 2, "affine", 0))


def test_is_spline_detects_exact_order():
    # |y|-like spline across the x-axis: y^2 on one side, 0 on the other is C^1 but not C^2
    m = SimplicialComplex([(-1, 0), (1, 0), (0, 1), (0, -1)], [(0, 1, 2), (0, 1, 3)])
    y2 = Poly(2, {(0, 2): 1})
    F = PiecewisePoly((y2, Poly(2)), "affine", 2)
    assert is_spline(m, 1, F) and not is_spline(m, 2, F)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.integers(0, 2), st.integers(0, 3))
def test_mode_agreement_and_bounds(seed, k, r, d):
    m = random_mesh(seed, k)
    a = spline_dim(m, r, d, "affine")
    assert a == spline_dim(m, r, d, "cone")
    assert binom_safe(d + k, k) <= a <= len(m.cells) * binom_safe(d + k, k)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 2))
def test_monotone(seed, r):
    m = random_mesh(seed, 2)
    dims = [spline_dim(m, r, d) for d in range(5)]
    assert dims == sorted(dims)
    assert all(spline_dim(m, r + 1, d) <= x for d, x in enumerate(dims))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["affine", "cone"]))
def test_basis_nesting(seed, mode):
    m = random_mesh(seed, 2)
    for F in spline_basis(m, 2, 3, mode):
        assert is_spline(m, 2, F) and is_spline(m, 1, F)
