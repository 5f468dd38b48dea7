#!/usr/bin/env python3
"""
Tests for circle intersection dynamics
"""

import random
import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import ProjValue, random_values
from planar import equidistant
from circle_intersection import (
    check_cid_devron, check_cid_dodgson, cid_as_backlund, cid_iterate, cid_polygon, cid_rows, cid_vertex,
    cid_violations, make_cid_devron, make_cid_dodgson, polygon_centers
)


def pv(x):
    return ProjValue.of(x)


def random_polygon(n=6, seed=2):
    points = random_values(random.Random(seed), n)
    return points, polygon_centers(points)


def test_move_is_an_involution():
    points, centers = random_polygon()
    moved_points, moved_centers = cid_vertex(points, centers, 3)
    assert moved_points[3] != points[3]
    # the new point is on both neighbouring circles
    assert equidistant(centers[2], [points[2], moved_points[3]])
    assert equidistant(centers[4], [points[4], moved_points[3]])
    back_points, back_centers = cid_vertex(moved_points, moved_centers, 3)
    assert back_points == points
    assert back_centers == centers


def test_rows_match_polygon_moves():
    points, centers = random_polygon(seed=3)
    zt, wt = cid_iterate(*cid_rows(points, centers), 2)
    assert cid_polygon(zt, wt, 0) == (points, centers)
    stepped_points, stepped_centers = cid_polygon(zt, wt, 1)
    for k in (0, 2, 4):
        moved_points, moved_centers = cid_vertex(points, centers, k)
        assert stepped_points[k] == moved_points[k]
        assert stepped_centers[k] == moved_centers[k]
    assert stepped_points[1] == points[1]
    assert cid_violations(zt, wt) == []


def test_dynamics_is_backlund_pair():
    points, centers = random_polygon(seed=4)
    zt, wt = cid_iterate(*cid_rows(points, centers), 3)
    pair, problems = cid_as_backlund(zt, wt)
    assert problems == []
    assert pair.labels.gamma == pv(1)


def test_polygon_needs_even_length():
    with pytest.raises(ValueError):
        cid_rows(random_values(random.Random(1), 5))


def test_dodgson_m3_is_miquel():
    points, centers = make_cid_dodgson(3, seed=5)
    report = check_cid_dodgson(points, centers)
    assert report.passed
    assert report.observed_step == 2


def test_dodgson_m4():
    points, centers = make_cid_dodgson(4, radius=2, seed=6)
    report = check_cid_dodgson(points, centers)
    assert report.passed
    assert report.steps == 3


def test_devron_m3():
    points, centers = make_cid_devron(3, seed=7)
    report = check_cid_devron(points, centers)
    assert report.passed
    assert report.observed_step == 2


def test_devron_m4():
    points, centers = make_cid_devron(4, seed=8)
    report = check_cid_devron(points, centers, with_intermediate=False)
    assert report.passed
    assert report.steps == 4


def test_generators_validate_m():
    with pytest.raises(ValueError):
        make_cid_devron(2)
    with pytest.raises(ValueError):
        make_cid_dodgson(1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
