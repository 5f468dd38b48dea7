#!/usr/bin/env python3
"""
Tests for projective points, joins and meets
"""

import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import FLOAT, ProjValue
from projective import (
    ChartError, ProjPoint, are_collinear, are_coplanar, center_of_mass, chart_safe_map, intersect, inverse_map,
    line_through, meet_join, plane_through, polygon_from_json, polygon_to_json, random_projective_map,
    transform_polygon
)
from pentagram import make_generic_polygon, pentagram_step


def pt(*xs):
    return ProjPoint.affine(*xs)


def test_axes_meet_at_origin():
    x_axis = line_through(pt(0, 0), pt(1, 0))
    y_axis = line_through(pt(0, 0), pt(0, 1))
    origin = intersect(x_axis, y_axis)
    assert origin == ProjPoint([0, 0, 1])
    assert origin.coordinate(0) == ProjValue.of(0)


def test_parallel_lines_meet_at_infinity():
    point = intersect(line_through(pt(0, 0), pt(1, 0)), line_through(pt(0, 1), pt(1, 1)))
    assert point.is_at_infinity
    assert point == ProjPoint([1, 0, 0])
    assert point.coordinate(0).is_infinite


def test_line_meets_plane():
    line = line_through(pt(0, 0, 0), pt(1, 0, 0))
    plane = plane_through(pt(2, 0, 0), pt(2, 1, 0), pt(2, 0, 1))
    assert intersect(line, plane) == pt(2, 0, 0)
    assert meet_join('line_plane', pt(0, 0, 0), pt(1, 0, 0), pt(2, 0, 0), pt(2, 1, 0), pt(2, 0, 1)) == pt(2, 0, 0)


def test_degenerate_join_gives_undefined_meet():
    line = line_through(pt(1, 1), pt(1, 1))
    assert line.degenerate
    assert intersect(line, line_through(pt(0, 0), pt(0, 1))).is_undefined
    # a line meets itself in a line, not a point
    same = line_through(pt(0, 0), pt(1, 1))
    assert intersect(same, same).is_undefined


def test_incidence_helpers():
    assert are_collinear([pt(0, 0), pt(1, 1), pt(3, 3)])
    assert not are_collinear([pt(0, 0), pt(1, 1), pt(3, 2)])
    assert are_coplanar([pt(0, 0, 1), pt(1, 0, 1), pt(0, 1, 1), pt(5, 7, 1)])
    assert not are_coplanar([pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)])


def test_undefined_point_equals_nothing():
    undefined = ProjPoint.undefined(2)
    assert undefined.is_undefined
    assert undefined != undefined
    assert undefined.coordinate(0).is_undefined


def test_pentagram_map_is_projectively_equivariant():
    polygon = make_generic_polygon(7, seed=11)
    matrix = random_projective_map(2, seed=3)
    moved_then_stepped = pentagram_step(transform_polygon(polygon, matrix))
    stepped_then_moved = transform_polygon(pentagram_step(polygon), matrix)
    assert moved_then_stepped == stepped_then_moved


def test_inverse_map_undoes_map():
    polygon = make_generic_polygon(4, N=3, seed=5)
    matrix = random_projective_map(3, seed=8)
    assert transform_polygon(transform_polygon(polygon, matrix), inverse_map(matrix)) == polygon


def test_chart_safe_map_moves_points_off_infinity():
    points = [ProjPoint([1, 2, 0]), pt(1, 1), pt(-2, 3)]
    matrix = chart_safe_map(points)
    assert not any(p.is_at_infinity for p in transform_polygon(points, matrix))


def test_center_of_mass():
    assert center_of_mass([pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]) == pt(1, 1)
    with pytest.raises(ChartError):
        center_of_mass([pt(0, 0), ProjPoint([1, 0, 0])])


def test_exact_points_are_normalised():
    assert ProjPoint([2, 4, 2]).coords == ProjPoint([1, 2, 1]).coords
    assert ProjPoint([2, 4, 2]) == pt(1, 2)


def test_float_points_compare_up_to_scale():
    a = ProjPoint([1.0, 2.0, 1.0], FLOAT)
    b = ProjPoint([3.0, 6.0, 3.0], FLOAT)
    assert a == b


def test_polygon_json():
    polygon = [pt('1/2', 3), ProjPoint([1, 0, 0])]
    doc = polygon_to_json(polygon)
    assert len(doc[0]) == 3
    assert polygon_from_json(doc) == polygon


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
