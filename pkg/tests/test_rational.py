from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracpairs import rational as rat

ints = st.integers(min_value=-9, max_value=9)


def int_matrix(max_dim=5):
    return st.integers(min_value=1, max_value=max_dim).flatmap(
        lambda n: st.integers(min_value=1, max_value=max_dim).flatmap(
            lambda m: st.lists(
                st.lists(ints, min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def test_scalar_accepts_exact_inputs_only():
    assert rat.scalar(3) == Fraction(3)
    assert rat.scalar(Fraction(2, 7)) == Fraction(2, 7)
    assert rat.scalar("-3/4") == Fraction(-3, 4)
    with pytest.raises(TypeError):
        rat.scalar(0.5)
    with pytest.raises(TypeError):
        rat.scalar(None)


def test_rationalize_is_the_float_gateway():
    assert rat.rationalize(0.5) == Fraction(1, 2)
    assert rat.rationalize(7) == Fraction(7)
    approx = rat.rationalize(3.14159265358979, max_denominator=1000)
    assert approx.denominator <= 1000
    assert abs(float(approx) - 3.14159265358979) < 1e-5


def test_matrix_building_and_arithmetic():
    a = rat.matrix([[1, 2], [3, 4]])
    b = rat.matrix([["1/2", 0], [0, "1/3"]])
    assert rat.mat_mul(a, b) == rat.matrix([["1/2", "2/3"], ["3/2", "4/3"]])
    assert rat.mat_add(a, rat.mat_neg(a)) == rat.zeros(2, 2)
    assert rat.mat_sub(a, a) == rat.zeros(2, 2)
    assert rat.mat_scale(Fraction(2), a) == rat.matrix([[2, 4], [6, 8]])
    assert rat.mat_vec(a, (1, 0)) == (Fraction(1), Fraction(3))
    assert rat.transpose(rat.transpose(a)) == a
    assert rat.is_zero_matrix(rat.zeros(3, 2))
    assert not rat.is_zero_matrix(a)


def test_stacking_shapes():
    a = rat.identity(2)
    b = rat.zeros(2, 3)
    h = rat.hstack(a, b)
    assert len(h) == 2 and len(h[0]) == 5
    v = rat.vstack(a, rat.zeros(1, 2))
    assert len(v) == 3 and len(v[0]) == 2
    d = rat.block_diag(a, rat.identity(3))
    assert d == rat.identity(5)


def test_rref_known_values():
    red, piv = rat.rref([[2, 0], [0, 3]])
    assert red == rat.identity(2)
    assert piv == (0, 1)
    red, piv = rat.rref([[1, 1], [2, 2]])
    assert red == (tuple(rat.vec((1, 1))),)
    assert piv == (0,)
    assert rat.rref([]) == ((), ())


def test_solve_right_and_invert():
    a = rat.matrix([[1, 2], [3, 5]])
    inv = rat.invert(a)
    assert rat.mat_mul(a, inv) == rat.identity(2)
    assert rat.mat_mul(inv, a) == rat.identity(2)
    b = rat.matrix([[1], [0]])
    x = rat.solve_right(a, b)
    assert rat.mat_mul(a, x) == b
    with pytest.raises(ValueError):
        rat.invert(rat.matrix([[1, 2], [2, 4]]))


def test_solve_linear_inconsistent_and_underdetermined():
    assert rat.solve_linear([[1, 1], [1, 1]], (0, 1)) is None
    part, null = rat.solve_linear([[1, 1]], (2,))
    assert sum(part) == Fraction(2)
    assert len(null) == 1
    part, null = rat.solve_linear((), (), ncols=3)
    assert part == (Fraction(0),) * 3
    assert null == rat.identity(3)


@settings(max_examples=60, deadline=None)
@given(int_matrix())
def test_rref_idempotent(rows):
    red, piv = rat.rref(rows)
    again, piv2 = rat.rref(red)
    assert again == red
    assert piv2 == piv


@settings(max_examples=60, deadline=None)
@given(int_matrix())
def test_rank_transpose_invariant(rows):
    assert rat.rank(rows) == rat.rank(rat.transpose(rat.matrix(rows)))


@settings(max_examples=60, deadline=None)
@given(int_matrix())
def test_kernel_dimension_and_orthogonality(rows):
    a = rat.matrix(rows)
    n = len(a[0])
    k = rat.kernel(a, ncols=n)
    assert len(k) == n - rat.rank(a)
    for v in k:
        assert all(x == 0 for x in rat.mat_vec(a, v))


@settings(max_examples=40, deadline=None)
@given(int_matrix(max_dim=3), int_matrix(max_dim=3))
def test_mat_mul_respects_transpose(a_rows, b_rows):
    a = rat.matrix(a_rows)
    b = rat.matrix(b_rows)
    if len(a[0]) != len(b):
        b = rat.transpose(b)
    if len(a[0]) != len(b):
        return
    left = rat.transpose(rat.mat_mul(a, b))
    right = rat.mat_mul(rat.transpose(b), rat.transpose(a))
    assert left == right
