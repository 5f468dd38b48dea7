#!/usr/bin/env python3
"""
Tests for exact elimination and the numpy helpers
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import EXACT, GaussianRational, SingularMatrixError
from linalg import determinant, fraction_free_eliminate, mat_vec, nullspace, numeric_rank, rank, solve


def gr_matrix(rows):
    return [[GaussianRational(x) for x in row] for row in rows]


def test_solve_exact():
    m = gr_matrix([[2, 1], [1, 3]])
    x = solve(m, [GaussianRational(3), GaussianRational(5)])
    assert x == [GaussianRational(Fraction(4, 5)), GaussianRational(Fraction(7, 5))]


def test_solve_singular_raises():
    m = gr_matrix([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        solve(m, [GaussianRational(1), GaussianRational(1)])


def test_nullspace_and_rank():
    m = gr_matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    basis = nullspace(m)
    assert len(basis) == 1
    assert all(x == 0 for x in mat_vec(m, basis[0]))
    assert rank(m) == 2
    assert len(nullspace([], n_cols=3, backend=EXACT)) == 3


def test_gaussian_entries():
    i = GaussianRational(0, 1)
    m = [[i, GaussianRational(1)], [GaussianRational(1), -i]]
    # det = -i*i - 1 = 0
    assert determinant(m) == 0
    assert len(nullspace(m)) == 1


def test_determinant_with_swap():
    m = gr_matrix([[0, 1], [1, 0]])
    assert determinant(m) == -1


def test_fraction_free_needs_column_pivot():
    half = Fraction(1, 2)
    m = gr_matrix([[0, 0, half], [0, 3, 1], [2, 1, 0]])
    assert determinant(m) == -3
    x = solve(m, [GaussianRational(2), GaussianRational(10), GaussianRational(4)])
    assert x == [GaussianRational(1), GaussianRational(2), GaussianRational(4)]


def test_fraction_free_elimination_is_integral():
    i = GaussianRational(0, 1)
    m = [[GaussianRational(2), i, GaussianRational(1)],
         [GaussianRational(1), GaussianRational(3), -i],
         [i, GaussianRational(1), GaussianRational(4)]]
    columns, sign = fraction_free_eliminate(m)
    assert sorted(columns) == [0, 1, 2]
    for row in m:
        for x in row:
            assert x.re.denominator == 1 and x.im.denominator == 1
    # 2*(12 + i) - i*(4 - 1) + (1 - 3i)
    assert m[-1][-1] * sign == GaussianRational(25, -4)


def test_zero_column_is_singular_after_full_pivoting():
    m = gr_matrix([[1, 0, 2], [3, 0, 1], [0, 0, 5]])
    assert determinant(m) == 0
    with pytest.raises(SingularMatrixError):
        solve(m, [GaussianRational(1)] * 3)


def test_float_rank():
    m = [[1 + 0j, 2 + 0j], [2 + 0j, 4 + 1e-14j]]
    assert numeric_rank(m, 1e-9) == 1
    assert rank(m) == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
