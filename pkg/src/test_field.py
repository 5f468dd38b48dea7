#!/usr/bin/env python3
"""
Tests for projective-line arithmetic and the octahedron solver
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import (
    EXACT, FLOAT, GaussianRational, IrrationalFixedPointError, ProjValue, arith, cross_ratio,
    format_value, harmonic_mean, mobius_apply, mobius_compose, mobius_fixed_points, multi_ratio6,
    parse_value, random_values, solve_apex, solve_cross_ratio, solve_dskp
)

INF = ProjValue.infinity()
NAN = ProjValue.undefined()


def pv(x):
    return ProjValue.of(x)


def test_gaussian_rational_arithmetic():
    a = GaussianRational(Fraction(1, 2), 3)
    b = GaussianRational(2, -1)
    assert a * b == GaussianRational(Fraction(1) + 3, Fraction(-1, 2) + 6)
    assert (a / b) * b == a
    assert GaussianRational.parse(a.format()) == a
    assert GaussianRational.parse('-3/4-i') == GaussianRational(Fraction(-3, 4), -1)
    assert GaussianRational(-4).sqrt() == GaussianRational(0, 2)
    assert GaussianRational(2).sqrt() is None


def test_infinity_rules():
    z = pv(3)
    assert arith('add', z, INF).is_infinite
    assert arith('add', INF, INF).is_undefined
    assert arith('mul', pv(0), INF).is_undefined
    assert arith('mul', INF, INF).is_infinite
    assert arith('div', z, pv(0)).is_infinite
    assert arith('div', pv(0), pv(0)).is_undefined
    assert arith('div', INF, INF).is_undefined
    assert arith('div', INF, pv(0)).is_infinite
    assert arith('neg', INF).is_infinite
    assert arith('conj', INF).is_infinite
    assert arith('inv', INF) == pv(0)
    assert arith('add', NAN, z).is_undefined


def test_undefined_is_never_equal():
    assert NAN != NAN
    assert not (NAN == pv(1))
    assert INF == ProjValue.infinity()


def test_cross_ratio_values():
    assert cross_ratio(pv(0), pv(1), pv(2), pv(3)) == pv(Fraction(-1, 3))
    # a point at infinity drops out of the ratio
    assert cross_ratio(INF, pv(0), pv(1), pv(2)) == pv(Fraction(-1, 1))
    assert cross_ratio(pv(1), pv(1), pv(1), pv(2)).is_undefined


def test_solve_cross_ratio_inverts_cross_ratio():
    a, b, d = pv(2), pv(GaussianRational(1, 1)), pv(-3)
    ratio = pv(Fraction(5, 7))
    c = solve_cross_ratio(a, b, d, ratio)
    assert cross_ratio(a, b, c, d) == ratio


def test_solve_apex_matches_affine_formula():
    # c=0, N=4, W=1, S=3, E=2
    x = solve_apex(pv(0), pv(4), pv(3), pv(2), pv(1))
    assert x == pv(Fraction(11, 5))
    assert multi_ratio6(pv(0), pv(4), pv(1), x, pv(3), pv(2)) == pv(-1)


def test_solve_dskp_any_slot():
    rng = random.Random(7)
    values = dict(zip(['-e3', '+e2', '-e1', '+e3', '-e2', '+e1'], random_values(rng, 6)))
    values['+e3'] = solve_dskp(values, '+e3')
    for slot in values:
        known = {k: v for k, v in values.items() if k != slot}
        assert solve_dskp(known, slot) == values[slot]


def test_solve_dskp_constant_and_degenerate():
    five = {'-e3': pv(2), '+e2': pv(2), '-e1': pv(2), '-e2': pv(2), '+e1': pv(2)}
    assert solve_dskp(five) == pv(2)
    # bottom, north and west coincide: every coefficient vanishes
    degenerate = {'-e3': pv(1), '+e2': pv(1), '-e1': pv(1), '-e2': pv(2), '+e1': pv(3)}
    assert solve_dskp(degenerate).is_undefined
    assert solve_dskp({**five, '-e1': NAN}).is_undefined


def test_solve_dskp_with_infinite_input():
    x = solve_apex(INF, pv(4), pv(3), pv(2), pv(1))
    assert multi_ratio6(INF, pv(4), pv(1), x, pv(3), pv(2)) == pv(-1)


def test_harmonic_mean():
    assert harmonic_mean([pv(1), pv(3)]) == pv(Fraction(3, 2))
    assert harmonic_mean([pv(1), pv(-1)]).is_infinite
    assert harmonic_mean([pv(0), pv(2)]) == pv(0)


def test_mobius_fixed_points():
    # z -> (2z + 3) / (z + 0): fixed points 3 and -1
    matrix = ((GaussianRational(2), GaussianRational(3)), (GaussianRational(1), GaussianRational(0)))
    points = mobius_fixed_points(matrix).points
    assert {format_value(p) for p in points} == {format_value(pv(3)), format_value(pv(-1))}
    for p in points:
        assert mobius_apply(matrix, p) == p
    identity = ((GaussianRational(5), GaussianRational(0)), (GaussianRational(0), GaussianRational(5)))
    assert mobius_fixed_points(identity).degenerate
    translation = ((GaussianRational(1), GaussianRational(1)), (GaussianRational(0), GaussianRational(1)))
    assert all(p.is_infinite for p in mobius_fixed_points(translation).points)


def test_mobius_irrational_fixed_points():
    matrix = ((GaussianRational(0), GaussianRational(2)), (GaussianRational(1), GaussianRational(0)))
    with pytest.raises(IrrationalFixedPointError):
        mobius_fixed_points(matrix)
    float_matrix = ((0j, 2 + 0j), (1 + 0j, 0j))
    points = mobius_fixed_points(float_matrix).points
    assert all(mobius_apply(float_matrix, p) == p for p in points)


def test_mobius_compose():
    f = ((GaussianRational(1), GaussianRational(2)), (GaussianRational(0), GaussianRational(1)))
    g = ((GaussianRational(0), GaussianRational(1)), (GaussianRational(1), GaussianRational(0)))
    z = pv(GaussianRational(3, 1))
    assert mobius_apply(mobius_compose(f, g), z) == mobius_apply(f, mobius_apply(g, z))


def test_float_backend_tolerance():
    x = solve_apex(ProjValue.of(0j), ProjValue.of(4 + 0j), ProjValue.of(3 + 0j), ProjValue.of(2 + 0j),
                   ProjValue.of(1 + 0j))
    assert x.backend is FLOAT
    assert abs(x.value - 2.2) < 1e-9
    assert x == pv(Fraction(11, 5))


def test_format_and_parse():
    for value in (pv(GaussianRational(Fraction(-2, 3), Fraction(1, 5))), INF):
        assert parse_value(format_value(value)) == value
    assert parse_value('nan').is_undefined
    assert parse_value('1.5-0.25i', FLOAT) == ProjValue.of(1.5 - 0.25j)
    assert parse_value('2', EXACT) == pv(2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
