import pytest
from hypothesis import given, strategies as st

from splitsplines.formulas import (A_formula, DimFormulaParams, P_formula, binom_safe, dim_alfeld, dim_double_alfeld,
                                   dim_facet, dim_partial_double_alfeld, dim_partial_facet, dim_pyramid,
                                   infer_generator_degrees, pyramid_sum_identity, scheme_dim)


def test_binom_safe():
    assert binom_safe(5, 2) == 10
    assert binom_safe(1, 3) == 0
    assert binom_safe(-2, 3) == 0


def test_A_examples():
    assert A_formula(2, 3, 1) == 2
    assert A_formula(2, 1, 0) == 1
    assert dim_alfeld(2, 1, 0) == 4
    assert A_formula(3, 2, 1) == 0


def test_P_examples():
    assert P_formula(2, 2, 1) == 1
    assert P_formula(3, 4, 1) == 8
    for k in (2, 3, 4):
        for r in range(1, 5):
            assert P_formula(k, 0, r) == 0


def test_dimension_examples():
    assert dim_alfeld(2, 3, 1) == 12
    assert dim_facet(2, 2, 1) == 9
    assert dim_double_alfeld(2, 3, 1) == 18
    assert scheme_dim("double-alfeld", 2, 3, 1) == 18
    with pytest.raises(ValueError):
        scheme_dim("powell", 2, 3, 1)


def test_params_validation():
    with pytest.raises(ValueError):
        DimFormulaParams(0, 1, 1)
    with pytest.raises(ValueError):
        A_formula(2, -1, 1)


def test_pyramid_identity_examples():
    assert all(pyramid_sum_identity(3, d, 1) for d in range(11))
    assert all(pyramid_sum_identity(2, d, 0) for d in range(11))
    for r in range(4):
        assert dim_pyramid(2, 0, r) == 1 and pyramid_sum_identity(2, 0, r)
    with pytest.raises(ValueError):
        pyramid_sum_identity(1, 2, 1)


def test_generator_degrees():
    assert infer_generator_degrees([binom_safe(d + 2, 2) for d in range(8)], 2) == {0: 1}
    assert infer_generator_degrees([dim_pyramid(3, d, 1) for d in range(10)], 3) == {0: 1, 3: 2}
    # the odd-r Alfeld excess is 2*binom(d-1, 2): two generators in degree 3
    assert infer_generator_degrees([dim_alfeld(2, d, 1) for d in range(10)], 2) == {0: 1, 3: 2}
    with pytest.raises(ValueError):
        infer_generator_degrees([1, 2, 2], 2)
    with pytest.raises(ValueError):
        infer_generator_degrees({0: 1, 2: 5}, 2)


@given(st.integers(2, 4), st.integers(0, 12), st.integers(0, 4))
def test_formula_structure(k, d, r):
    base = binom_safe(d + k, k)
    A, P = A_formula(k, d, r), P_formula(k, d, r)
    assert A >= 0 and P >= 0
    assert dim_facet(k, d, r) == base + A + (k + 1) * P
    assert dim_double_alfeld(k, d, r) == base + (k + 2) * A
    assert dim_partial_facet(k, d, r, k + 1) == dim_facet(k, d, r)
    assert dim_partial_double_alfeld(k, d, r, k + 1) == dim_double_alfeld(k, d, r)
    assert dim_partial_facet(k, d, r, 0) == dim_alfeld(k, d, r) == dim_partial_double_alfeld(k, d, r, 0)
    assert pyramid_sum_identity(k, d, r)


@given(st.integers(2, 4), st.integers(0, 4))
def test_generator_inference_exact_on_families(k, r):
    for fn in (dim_alfeld, dim_pyramid, dim_facet, dim_double_alfeld):
        h = [fn(k, d, r) for d in range(16)]
        gens = infer_generator_degrees(h, k)
        rebuilt = [sum(m * binom_safe(d - a + k, k) for a, m in gens.items()) for d in range(16)]
        assert rebuilt == h
