from fractions import Fraction

from hypothesis import given, strategies as st

from qmatsym import linalg
from qmatsym.scalars import Q


def test_echelon_pivots_are_largest_columns():
    rows = [{0: 1, 1: 2}, {1: 1, 2: 1}]
    red = linalg.echelon(rows)
    assert set(red) == {1, 2}
    for p, row in red.items():
        assert row[p] == 1
        assert max(row) == p


def test_solve_over_qrat():
    cols = [{"a": Q, "b": 1}, {"b": Q ** -1}]
    rhs = {"a": Q ** 2, "b": Q + 1}
    x, r = linalg.solve(cols, rhs)
    assert r == 2
    assert x[0] == Q and x[1] == Q


def test_solve_inconsistent():
    x, r = linalg.solve([{"a": 1}], {"b": 1})
    assert x is None and r == 1


mat = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4)


@given(mat, st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_returns_a_solution(rows, xs):
    cols = [{i: Fraction(r[j]) for i, r in enumerate(rows) if r[j]} for j in range(3)]
    rhs = {i: Fraction(sum(r[j] * xs[j] for j in range(3))) for i, r in enumerate(rows)}
    rhs = {k: v for k, v in rhs.items() if v}
    x, _ = linalg.solve(cols, rhs)
    assert x is not None
    for i, r in enumerate(rows):
        assert sum(r[j] * x[j] for j in range(3)) == rhs.get(i, 0)


def test_kron_and_matmul():
    a = {1: {1: 1, 2: 1}, 2: {2: 1}}
    one = linalg.identity([1, 2])
    k = linalg.kron(a, one)
    assert k[(1, 1)] == {(1, 1): 1, (2, 1): 1}
    assert linalg.matmul(a, one) == a
    assert linalg.is_zero(linalg.matadd(a, a, -1))
