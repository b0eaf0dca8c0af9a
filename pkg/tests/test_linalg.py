from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splitsplines.linalg import QMatrix, as_fraction, kernel_basis, rank, rref, row_space_equal, sparse_rank
from splitsplines.poly import monomial_index, monomials, linear_power


def small_matrices(max_rows=6, max_cols=6, lo=-4, hi=4):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=1, max_size=max_rows)
    )


def test_rref_identity():
    red, piv, rk = rref(QMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert red.rows() == QMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).rows()
    assert piv == [0, 1, 2] and rk == 3


def test_rref_zero():
    red, piv, rk = rref(QMatrix([[0, 0], [0, 0]]))
    assert piv == [] and rk == 0
    assert all(x == 0 for row in red.rows() for x in row)


def test_rref_rank_one():
    red, piv, rk = rref(QMatrix([[1, 2], [2, 4]]))
    assert red.rows() == ((1, 2), (0, 0))
    assert rk == 1 and piv == [0]


def test_rref_large_matches_python():
    # more than 64 entries goes through FLINT
    rows = [[(i * j + i - 2 * j) % 7 - 3 for j in range(10)] for i in range(9)]
    from splitsplines.linalg import rref_python
    assert rref(QMatrix(rows))[0].rows() == rref_python(QMatrix(rows))[0].rows()


def test_kernel_examples():
    assert kernel_basis(QMatrix([[1, 0], [0, 1]])) == []
    (v,) = kernel_basis(QMatrix([[1, 1]]))
    assert v[0] == -v[1] != 0
    (w,) = kernel_basis(QMatrix([[1, 2], [2, 4]]))
    assert w[0] == -2 * w[1] != 0


def quadratic(coeffs):
    """Coefficient row of (a x + b y)^2 in the degree-2 monomial basis."""
    idx = monomial_index(2, 2)
    row = [Fraction(0)] * len(idx)
    for e, c in linear_power(coeffs, 2).items():
        row[idx[e]] = c
    return row


def test_row_space_examples():
    a = QMatrix([[1, 2, 3], [0, 1, 1]])
    assert row_space_equal(a, a)
    sq = QMatrix([quadratic((1, 0)), quadratic((0, 1)), quadratic((1, -1))])
    mono = QMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])  # x^2, xy, y^2
    assert row_space_equal(sq, mono)
    assert not row_space_equal(QMatrix([[1, 0, 0], [0, 0, 1]]), QMatrix([[1, 0, 0], [0, 1, 0]]))


def test_row_space_column_mismatch():
    with pytest.raises(ValueError):
        row_space_equal(QMatrix([[1, 2]]), QMatrix([[1, 2, 3]]))


def test_as_fraction():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction("0.25") == Fraction(1, 4)
    with pytest.raises(TypeError):
        as_fraction(0.5)


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_rank_nullity(rows):
    m = QMatrix(rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)
    assert rank(QMatrix(ker, m.ncols)) == len(ker) if ker else True


@settings(max_examples=100, deadline=None)
@given(small_matrices())
def test_rref_idempotent(rows):
    red = rref(QMatrix(rows))[0]
    assert rref(red)[0].rows() == red.rows()


@settings(max_examples=100, deadline=None)
@given(small_matrices(max_rows=4), st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=1, max_size=4))
def test_row_space_combinations(rows, coeffs):
    m = len(rows)
    mix = [[sum(c[i] * rows[i][j] for i in range(m)) for j in range(len(rows[0]))] for c in coeffs]
    assert row_space_equal(QMatrix(rows), QMatrix(rows + mix))
    assert row_space_equal(QMatrix(rows + mix), QMatrix(rows))


@settings(max_examples=60, deadline=None)
@given(small_matrices(max_rows=4, max_cols=3, lo=-1, hi=1), small_matrices(max_rows=4, max_cols=3, lo=-1, hi=1),
       small_matrices(max_rows=4, max_cols=3, lo=-1, hi=1))
def test_row_space_equivalence_relation(a, b, c):
    n = min(len(a[0]), len(b[0]), len(c[0]))
    A, B, C = (QMatrix([row[:n] for row in x]) for x in (a, b, c))
    assert row_space_equal(A, A)
    assert row_space_equal(A, B) == row_space_equal(B, A)
    if row_space_equal(A, B) and row_space_equal(B, C):
        assert row_space_equal(A, C)


@settings(max_examples=150, deadline=None)
@given(small_matrices(max_rows=8, max_cols=8, lo=-2, hi=2))
def test_sparse_rank_agrees(rows):
    sparse = [{j: x for j, x in enumerate(row) if x} for row in rows]
    assert sparse_rank(sparse, len(rows[0])) == rank(QMatrix(rows))


def test_monomial_order():
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
