#!/usr/bin/env python3
"""
Tests for Miquel dynamics, its explicit form and Dodgson circle patterns
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import ProjValue, GaussianRational, random_value
from planar import LatticeMap
from miquel import (
    CirclePattern, TRealization, check_miquel_dodgson, make_dodgson_circle_pattern, miquel_explicit,
    miquel_iterate, miquel_point_step, miquel_step, relation_violations
)


def pv(x):
    return ProjValue.of(x)


def random_realization(size=4, seed=3):
    rng = random.Random(seed)
    values = {(i, j): random_value(rng) for i in range(-size, size + 1) for j in range(-size, size + 1)}
    return TRealization(LatticeMap(values, name='t'))


def test_equal_centres_are_undefined():
    values = {(i, j): pv(2) for i in range(-1, 2) for j in range(-1, 2)}
    values[(0, 0)] = pv(5)
    stepped = miquel_step(TRealization(LatticeMap(values)), parity=0)
    assert stepped.value(0, 0).is_undefined


def test_step_satisfies_multi_ratio():
    t = random_realization()
    stepped = miquel_step(t, parity=0)
    assert relation_violations(t, stepped, parity=0) == []
    # odd faces are unchanged
    assert stepped.value(1, 0) == t.value(1, 0)


def test_explicit_matches_steps():
    t = random_realization(seed=8)
    states = miquel_iterate(t, 2)
    assert miquel_explicit(t, (0, 0), 0) == t.value(0, 0)
    assert miquel_explicit(t, (0, 0), 1) == states[1].value(0, 0)
    assert miquel_explicit(t, (1, 0), 2) == states[2].value(1, 0)
    assert miquel_explicit(t, (1, 0), 2, method='ratio') == states[2].value(1, 0)
    with pytest.raises(ValueError):
        miquel_explicit(t, (0, 0), 2)


def test_angle_ratio_detects_non_realization():
    i = GaussianRational(0, 1)
    values = {(0, 0): pv(0), (1, 0): pv(1), (-1, 0): pv(2), (0, 1): pv(i), (0, -1): pv(1 + i)}
    assert TRealization(LatticeMap(values)).violations() == [(0, 0)]


def test_dodgson_pattern_is_circle_pattern():
    pattern = make_dodgson_circle_pattern(3, center=GaussianRational(1, 1), radius=2, seed=5)
    assert pattern.violations() == []
    assert pattern.realization.violations() == []
    centre = pattern.centers.value(0, 0)
    assert pattern.centers.value(2, 4) == centre
    assert len(pattern.distinct_points()) == 6


def test_point_step_keeps_circles():
    pattern = make_dodgson_circle_pattern(3, seed=7)
    successor, diagnostics = miquel_point_step(pattern, parity=0)
    assert diagnostics['mismatches'] == []
    assert successor.violations() == []
    assert isinstance(successor, CirclePattern)


def test_miquel_theorem_m2():
    for seed in range(1, 6):
        report = check_miquel_dodgson(make_dodgson_circle_pattern(2, seed=seed), 2)
        assert report.passed
        assert report.observed_step == 1
        assert report.details['circles'] == 6
        assert report.details['points'] == 8
        assert report.details['points_on_final_circle'] == 4


def test_auxiliary_circle_equal_to_d_is_rejected():
    # the circle through i and 1 centred at the origin is D itself
    with pytest.raises(ValueError):
        make_dodgson_circle_pattern(2, parameters=[0, 1, 2, 3], offsets={(0, 0): Fraction(-1, 2)})


def test_dodgson_m3():
    report = check_miquel_dodgson(make_dodgson_circle_pattern(3, seed=2), 3)
    assert report.passed
    assert report.details['circles'] == 20
    assert report.details['points_on_final_circle'] == 6


def test_dodgson_m4():
    report = check_miquel_dodgson(make_dodgson_circle_pattern(4, seed=4), 4)
    assert report.passed
    assert report.steps == 3


def test_repeated_parameters_rejected():
    with pytest.raises(ValueError):
        make_dodgson_circle_pattern(2, parameters=[0, 1, 1, 2])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
