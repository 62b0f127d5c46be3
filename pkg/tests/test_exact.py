from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strataspin.exact import (
    UniPoly,
    RatMatrix,
    format_rat,
    lagrange_interpolate,
    lcm_list,
    matrix_rank,
    parse_rat,
    solve_rational_system,
)


def test_lagrange_constant():
    p = lagrange_interpolate([(0, 1), (1, 1), (2, 1)])
    assert p == UniPoly([1])


def test_lagrange_quadratic():
    p = lagrange_interpolate([(1, 1), (2, 4), (3, 9)])
    assert p == UniPoly([0, 0, 1])


def test_lagrange_duplicate_nodes():
    with pytest.raises(ValueError, match="degenerate nodes"):
        lagrange_interpolate([(1, 1), (1, 2)])


@given(
    st.lists(st.integers(-30, 30), min_size=1, max_size=6),
    st.lists(st.integers(-50, 50), min_size=7, max_size=7, unique=True),
)
def test_lagrange_reproduces_polynomial(coeffs, xs):
    p = UniPoly(coeffs)
    pts = [(x, p(x)) for x in xs[: p.degree + 1 if p.degree >= 0 else 1]]
    assert lagrange_interpolate(pts) == p


def test_solve_identity():
    rep = solve_rational_system([[1, 0], [0, 1]], [Fraction(3, 2), -7])
    assert rep.ok and rep.solution == (Fraction(3, 2), Fraction(-7))


def test_solve_singular_consistent():
    rep = solve_rational_system([[1, 1], [2, 2]], [1, 2])
    assert rep.status == "non-unique"
    assert len(rep.kernel) == 1
    # every reported kernel vector really is in the kernel
    k = rep.kernel[0]
    assert k[0] + k[1] == 0


def test_solve_inconsistent():
    rep = solve_rational_system([[1, 1], [1, 1]], [1, 2])
    assert rep.status == "no-solution"


def test_solve_example_a2_vector():
    # 5x5 identity-shaped check that exact fractions round-trip the
    # coordinates used in the acceptance suite
    A = RatMatrix.from_rows([[1 if i == j else 0 for j in range(5)] for i in range(5)])
    rep = solve_rational_system(A, [0, 1, 3, 3, -8])
    assert rep.solution == (0, 1, 3, 3, -8)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_solve_then_multiply_roundtrip(rows, b):
    rep = solve_rational_system(rows, b)
    if rep.solution is not None:
        for row, want in zip(rows, b):
            assert sum(Fraction(c) * x for c, x in zip(row, rep.solution)) == want


def test_lcm():
    assert lcm_list([3, 1]) == 3
    assert lcm_list([2, 2]) == 2
    assert lcm_list([]) == 1
    with pytest.raises(ValueError):
        lcm_list([0, 2])


@given(st.integers(-10**12, 10**12), st.integers(1, 10**9))
def test_rat_serialization_roundtrip(p, q):
    x = Fraction(p, q)
    assert parse_rat(format_rat(x)) == x


def test_matrix_rank():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([[1, 0], [0, 1]]) == 2
    assert matrix_rank([]) == 0
