#!/usr/bin/env python3
"""
Tests for the short diagonal hyperplane map and companion polygons
"""

import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import FLOAT
from projective import points_rank
from pentagram import make_generic_polygon
from hyperplane import (
    HyperplaneOrbit, check_hyp_singularity, closed_companion, companion_extend, companion_violations, hyp_explicit,
    hyp_iterate, hyp_polygon_step, hyp_step, hyp_value_via_dskp, make_osculating_polygon, osculating_violations,
    seed_companion
)


def space_polygon(n=7, seed=21, backend=None):
    if backend is None:
        return make_generic_polygon(n, N=3, seed=seed)
    return make_generic_polygon(n, N=3, seed=seed, backend=backend)


def periodic(points, indices):
    return {i: points[i % len(points)] for i in indices}


def test_step_point_incidences():
    polygon = space_polygon()
    stepped = hyp_polygon_step(polygon)
    n = len(polygon)
    for i in range(n):
        assert points_rank([polygon[(i - 1) % n], polygon[(i + 1) % n], stepped[i]]) == 2
        assert points_rank([polygon[(i - 2) % n], polygon[i], polygon[(i + 2) % n], stepped[i]]) == 3


def test_step_needs_space_polygon():
    with pytest.raises(ValueError):
        hyp_polygon_step(make_generic_polygon(6, N=2))


def test_seeded_companion_incidences():
    polygon = space_polygon()
    companion = seed_companion(polygon, 2, 3)
    indices = range(-5, 12)
    assert companion_violations(periodic(polygon, range(-8, 14)), companion.window(range(-7, 12)), indices) == []


def test_companion_extends_both_ways():
    polygon = space_polygon(seed=28)
    companion = seed_companion(polygon, 4, -1)
    extended = companion_extend(polygon, (companion.at(0), companion.at(1)), range(-4, 6))
    assert extended == companion.window(range(-4, 6))
    assert companion_violations(periodic(polygon, range(-7, 9)), extended, range(-2, 4)) == []


def test_companion_moves_with_polygon():
    polygon = space_polygon(seed=22)
    orbit = HyperplaneOrbit(polygon, seed_companion(polygon, 1, -2))
    indices = range(-3, 9)
    points = {i: orbit.v(1, i) for i in range(-5, 11)}
    companion = {i: orbit.c(1, i) for i in range(-5, 11)}
    assert companion_violations(points, companion, indices) == []


def test_six_point_relations():
    polygon = space_polygon(seed=23)
    orbit = HyperplaneOrbit(polygon, seed_companion(polygon, 3, 5))
    assert orbit.relation_violations([0, 1], range(0, 4)) == []


def test_lattice_propagation_and_explicit_solution():
    polygon = space_polygon(seed=24)
    orbit = HyperplaneOrbit(polygon, seed_companion(polygon, 2, 7))
    for i in (2, 3):
        for coordinate in range(3):
            assert hyp_value_via_dskp(orbit, coordinate, 2, i) == orbit.v(2, i).coordinate(coordinate)
        assert hyp_explicit(orbit, 2, i) == orbit.v(2, i)


def test_lattice_rejects_odd_points():
    orbit = HyperplaneOrbit(space_polygon(), seed_companion(space_polygon()))
    with pytest.raises(ValueError):
        orbit.lattice_value(0, 1, 0, 0)


def test_closed_companion_is_periodic():
    polygon = space_polygon(8, seed=25, backend=FLOAT)
    companion = closed_companion(polygon)
    assert companion_violations(periodic(polygon, range(-3, 11)), periodic(companion, range(-3, 11)),
                                range(8)) == []
    stepped, stepped_companion = hyp_step(polygon, companion)
    assert companion_violations(periodic(stepped, range(-3, 11)), periodic(stepped_companion, range(-3, 11)),
                                range(8)) == []


def test_closed_companion_needs_even_length():
    with pytest.raises(ValueError):
        closed_companion(space_polygon(7))


def test_osculating_polygon_generator():
    polygon, anchors = make_osculating_polygon(4, seed=3)
    assert len(polygon) == 8
    assert osculating_violations(polygon, anchors) == []


@pytest.mark.parametrize("m", [4, 5])
def test_singularity_exact(m):
    polygon, _ = make_osculating_polygon(m, seed=m)
    report = check_hyp_singularity(polygon)
    assert report.passed
    assert report.observed_step == m - 3
    assert report.details['outcome'] in ('planes', 'lines')


def test_singularity_float():
    polygon, _ = make_osculating_polygon(6, seed=6, backend=FLOAT)
    report = check_hyp_singularity(polygon)
    assert report.passed
    assert report.steps == 3


def test_generic_polygon_is_not_singular():
    report = check_hyp_singularity(space_polygon(8, seed=26))
    assert not report.passed
    assert report.violations


def test_orbit_matches_closed_iteration():
    polygon = space_polygon(seed=27)
    orbit = HyperplaneOrbit(polygon, seed_companion(polygon))
    assert [orbit.v(2, i) for i in range(7)] == hyp_iterate(polygon, 2)[2]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
