#!/usr/bin/env python3
"""
Tests for P-net propagation, the explicit form and the singularity theorems
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import GaussianRational, ProjValue, harmonic_mean, random_values, solve_apex
from pnet import (
    alternating_inverse_sum, check_pnet_singularity, make_premature_row, pnet_defect, pnet_explicit,
    pnet_from_rows, pnet_iterate, pnet_relation, pnet_step, pnet_violations
)


def pv(x):
    return ProjValue.of(x)


def random_rows(m, seed):
    rng = random.Random(seed)
    return random_values(rng, m), random_values(rng, m)


def test_linear_net_stays_linear():
    omega = GaussianRational(2, 1)
    row0 = [pv(i) for i in range(-3, 4)]
    row1 = [pv(omega + i) for i in range(-3, 4)]
    p = pnet_from_rows(row0, row1, periodic=False, offset=-3)
    row = pnet_step(p, 1)
    assert sorted(row) == list(range(-2, 3))
    assert all(v == pv(omega * 2 + i) for i, v in row.items())
    assert pnet_defect(p, 0, 1).is_zero()


def test_step_matches_octahedron_and_relation():
    row0, row1 = random_rows(5, seed=4)
    p = pnet_from_rows(row0, row1)
    pnet_iterate(p, 2)
    for i in range(5):
        expected = solve_apex(p.value(i, 0), p.value(i, 1), p.value(i, 1), p.value(i + 1, 1), p.value(i - 1, 1))
        assert p.value(i, 2) == expected
        assert pnet_relation(p, i, 1) == pv(-1)
    assert pnet_violations(p) == []


def test_explicit_matches_iteration():
    row0, row1 = random_rows(5, seed=9)
    p = pnet_from_rows(row0, row1)
    pnet_iterate(p, 3)
    assert pnet_explicit(p, 3, 1) == p.value(3, 1)
    # the diamond A_2 around p_{2,1} computes p_{2,3}
    assert pnet_explicit(p, 2, 3) == p.value(2, 3)
    assert pnet_explicit(p, 0, 4) == p.value(0, 4)
    assert pnet_explicit(p, 1, 2, method='ratio') == p.value(1, 2)


def test_singularity_m2():
    report = check_pnet_singularity([1, 3])
    assert report.passed
    assert report.value == pv(Fraction(3, 2))


def test_singularity_m3_random():
    values = random_values(random.Random(17), 3)
    report = check_pnet_singularity(values)
    assert report.passed
    assert report.value == harmonic_mean(values)
    assert report.observed_step == 2


def test_premature_m4():
    values = make_premature_row(4, seed=5)
    assert alternating_inverse_sum(values).is_zero()
    report = check_pnet_singularity(values, variant='premature')
    assert report.passed
    assert report.steps == 2
    assert report.value == harmonic_mean(values)


def test_premature_needs_constraint():
    report = check_pnet_singularity([1, 2, 3, 5], variant='premature')
    assert not report.passed
    with pytest.raises(ValueError):
        make_premature_row(3)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
