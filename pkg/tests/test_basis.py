from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kkl_observer.basis import build_basis, eval_basis


def test_degree5_two_vars_count():
    assert build_basis(2, 5).size == 21


def test_degree0_is_constant_only():
    basis = build_basis(2, 0)
    assert basis.exponents == ((0, 0),)


def test_degree2_ordering():
    basis = build_basis(2, 2)
    assert basis.exponents == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


def test_constant_comes_first_always():
    assert build_basis(3, 4).exponents[0] == (0, 0, 0)


@given(n_vars=st.integers(1, 4), max_degree=st.integers(0, 6))
def test_count_matches_binomial(n_vars, max_degree):
    basis = build_basis(n_vars, max_degree)
    assert basis.size == comb(max_degree + n_vars, n_vars)
    assert len(set(basis.exponents)) == basis.size


def test_eval_at_origin():
    basis = build_basis(2, 2)
    row = eval_basis(basis, np.array([[0.0, 0.0]]))[0]
    assert np.array_equal(row, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0])


def test_eval_linear_basis():
    basis = build_basis(2, 1)
    row = eval_basis(basis, np.array([[2.0, 3.0]]))[0]
    assert np.array_equal(row, [1.0, 2.0, 3.0])


def test_eval_mixed_monomial():
    basis = build_basis(2, 3)
    col = basis.exponents.index((2, 1))
    assert eval_basis(basis, np.array([[2.0, 3.0]]))[0, col] == 12.0


def test_eval_rejects_wrong_width():
    with pytest.raises(ValueError):
        eval_basis(build_basis(2, 2), np.ones((3, 3)))


@given(
    e=st.tuples(st.integers(0, 2), st.integers(0, 2)),
    f=st.tuples(st.integers(0, 2), st.integers(0, 2)),
    x=st.floats(-2.0, 2.0),
    y=st.floats(-2.0, 2.0),
)
def test_monomial_product_identity(e, f, x, y):
    # Evaluating the product monomial equals the product of the evaluations.
    basis = build_basis(2, 8)
    X = np.array([[x, y]])
    prod_col = basis.exponents.index((e[0] + f[0], e[1] + f[1]))
    vals = eval_basis(basis, X)[0]
    lhs = vals[prod_col]
    rhs = vals[basis.exponents.index(e)] * vals[basis.exponents.index(f)]
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
