"""Exact linear algebra over the rationals and integer lattices."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logfol import linalg


fractions = st.fractions(
    min_value=-6, max_value=6, max_denominator=4
)


def small_matrix(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(fractions, min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            )
        )
    )


def det3(a):
    # cofactor expansion, used as an independent oracle for small inverses
    n = len(a)
    if n == 1:
        return a[0][0]
    total = Fraction(0)
    sign = 1
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        total += sign * a[0][j] * det3(minor)
        sign = -sign
    return total


# -- rref / rank / solve ------------------------------------------------


def test_rref_known_matrix():
    a = [[1, 2, 3], [2, 4, 7], [1, 2, 4]]
    r, pivots = linalg.rref(linalg.mat(a))
    assert pivots == [0, 2]
    assert r[0] == [Fraction(1), Fraction(2), Fraction(0)]
    assert r[1] == [Fraction(0), Fraction(0), Fraction(1)]
    assert linalg.is_zero_vec(r[2])


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rref_is_idempotent(a):
    a = linalg.mat(a)
    r, pivots = linalg.rref(a)
    r2, pivots2 = linalg.rref(r)
    assert r == r2 and pivots == pivots2


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rank_bounded_and_transpose_invariant(a):
    a = linalg.mat(a)
    rk = linalg.rank(a)
    assert 0 <= rk <= min(len(a), len(a[0]))
    assert rk == linalg.rank(linalg.transpose(a))


@settings(max_examples=60, deadline=None)
@given(small_matrix(), st.lists(fractions, min_size=1, max_size=4))
def test_solve_returns_actual_solutions(a, x):
    # make a consistent system by construction
    a = linalg.mat(a)
    n = len(a[0])
    x = (x * n)[:n]
    b = linalg.mat_vec(a, [Fraction(v) for v in x])
    sol = linalg.solve(a, b)
    assert sol is not None
    assert linalg.mat_vec(a, sol) == b


def test_solve_inconsistent_returns_none():
    a = linalg.mat([[1, 1], [1, 1]])
    assert linalg.solve(a, [Fraction(0), Fraction(1)]) is None


def test_solve_picks_zero_for_free_variables():
    a = linalg.mat([[1, 1]])
    assert linalg.solve(a, [Fraction(5)]) == [Fraction(5), Fraction(0)]


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_nullspace_vectors_are_in_kernel(a):
    a = linalg.mat(a)
    basis = linalg.nullspace(a)
    assert len(basis) == len(a[0]) - linalg.rank(a)
    for v in basis:
        assert linalg.is_zero_vec(linalg.mat_vec(a, v))


# -- inverse ------------------------------------------------------------


def test_inverse_known_2x2():
    a = linalg.mat([[2, 1], [1, 1]])
    inv = linalg.inverse(a)
    assert inv == [[Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(2)]]


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        linalg.inverse(linalg.mat([[1, 2], [2, 4]]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_inverse_agrees_with_cofactor_oracle(rows):
    a = linalg.mat(rows)
    d = det3(a)
    if d == 0:
        with pytest.raises(ValueError):
            linalg.inverse(a)
        return
    inv = linalg.inverse(a)
    assert linalg.mat_mul(a, inv) == linalg.identity(3)
    assert linalg.mat_mul(inv, a) == linalg.identity(3)
    assert det3(inv) * d == 1


# -- Hermite normal form ------------------------------------------------


def test_hnf_examples():
    assert linalg.hermite_normal_form([[1, 1], [1, -1]]) == [(1, 1), (0, 2)]
    assert linalg.hermite_normal_form([[2], [3]]) == [(1,)]
    assert linalg.hermite_normal_form([[0, 0]]) == []


def test_hnf_shape_and_pivot_reduction():
    h = linalg.hermite_normal_form([[4, 6, 2], [2, 0, 8], [0, 6, -6]])
    cols = [next(j for j, v in enumerate(row) if v) for row in h]
    assert cols == sorted(cols)
    for i, row in enumerate(h):
        p = row[cols[i]]
        assert p > 0
        for k in range(i):
            assert 0 <= h[k][cols[i]] < p


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
                min_size=1, max_size=4))
def test_hnf_preserves_rational_row_span(rows):
    h = linalg.hermite_normal_form(rows)
    for row in rows:
        assert linalg.in_row_span_q(h, row) or not any(row)
    for row in h:
        assert linalg.in_row_span_q(rows, row)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
                min_size=1, max_size=4),
       st.randoms(use_true_random=False))
def test_hnf_canonical_under_row_shuffle(rows, rng):
    shuffled = list(rows)
    rng.shuffle(shuffled)
    assert linalg.hermite_normal_form(rows) == linalg.hermite_normal_form(shuffled)


# -- nonnegative rational solutions -------------------------------------


def test_simplex_feasible_example():
    # x + y = 3, x - y = 1 -> (2, 1)
    a = [[1, 1], [1, -1]]
    t = linalg.nonneg_rational_solution(a, [3, 1])
    assert t == [Fraction(2), Fraction(1)]


def test_simplex_infeasible_example():
    # x + y = -1 has no nonnegative solution
    assert linalg.nonneg_rational_solution([[1, 1]], [-1]) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=4),
                min_size=1, max_size=3),
       st.data())
def test_simplex_finds_constructed_solutions(a, data):
    n = min(len(row) for row in a)
    a = [row[:n] for row in a]
    x = [Fraction(data.draw(st.integers(0, 3)), data.draw(st.integers(1, 3)))
         for _ in range(n)]
    b = linalg.mat_vec(linalg.mat(a), x)
    t = linalg.nonneg_rational_solution(a, b)
    assert t is not None
    assert all(v >= 0 for v in t)
    assert linalg.mat_vec(linalg.mat(a), t) == b
