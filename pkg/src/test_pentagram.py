#!/usr/bin/env python3
"""
Tests for the pentagram and corrugated pentagram maps
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from projective import (
    ChartError, ProjPoint, are_collinear, center_of_mass, random_projective_map, transform_polygon
)
from pentagram import (
    check_corr_dodgson, check_pentagram_devron, check_pentagram_dodgson, corr_explicit, corr_iterate, corr_step,
    corr_value_via_dskp, corrugation_violations, is_generic_polygon, make_axis_polygon, make_generic_polygon,
    make_pentagram_devron, menelaus_violations, pentagram_explicit, pentagram_step
)


def pt(*xs):
    return ProjPoint.affine(*xs)


def test_square_collapses_to_its_center():
    square = [pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]
    assert pentagram_step(square) == [pt(1, 1)] * 4


def test_pentagram_point_is_diagonal_intersection():
    polygon = make_generic_polygon(6, seed=4)
    stepped = pentagram_step(polygon)
    # T(v)_2 lies on v_1v_3 and v_2v_4
    assert are_collinear([polygon[1], polygon[3], stepped[2]])
    assert are_collinear([polygon[2], polygon[4], stepped[2]])


def test_repeated_vertex_gives_undefined_point():
    polygon = [pt(0, 0), pt(3, 1), pt(0, 0), pt(1, 4), pt(-2, 2)]
    assert corr_step(polygon)[1].is_undefined


def test_menelaus_relation_holds_on_orbit():
    orbit = corr_iterate(make_generic_polygon(7, seed=9), 3)
    assert menelaus_violations(orbit) == []


def test_menelaus_relation_for_corrugated_polygon():
    # a projective image keeps corrugation and spreads the coordinates
    polygon = transform_polygon(make_axis_polygon(4, N=3, seed=2), random_projective_map(3, seed=4))
    orbit = corr_iterate(polygon, 2, N=3)
    assert menelaus_violations(orbit, N=3) == []


def test_corrugation_is_preserved():
    orbit = corr_iterate(make_axis_polygon(3, N=3, seed=6), 1, N=3)
    assert corrugation_violations(orbit[0], 3) == []
    assert corrugation_violations(orbit[1], 3) == []
    assert corrugation_violations(make_generic_polygon(9, N=3, seed=1), 3) != []


def test_generic_polygons_avoid_special_positions():
    shared_y = [pt(4, Fraction(9, 2)), pt(1, 2), pt(Fraction(21, 5), Fraction(9, 2)), pt(3, -1)]
    collinear = [pt(0, 0), pt(1, 2), pt(2, 4), pt(5, -1)]
    assert not is_generic_polygon(shared_y)
    assert not is_generic_polygon(collinear)
    for seed in range(20):
        assert is_generic_polygon(make_generic_polygon(6, seed=seed))
    assert is_generic_polygon(make_generic_polygon(7, N=3, seed=3))


def test_dskp_propagation_reproduces_orbit():
    polygon = make_generic_polygon(6, seed=12)
    orbit = corr_iterate(polygon, 3)
    for index in range(6):
        for coordinate in range(2):
            assert corr_value_via_dskp(orbit, 2, coordinate, 3, index) == orbit[3][index].coordinate(coordinate)


def test_explicit_solution_matches_orbit():
    polygon = make_generic_polygon(7, seed=13)
    orbit = corr_iterate(polygon, 3)
    for index in (0, 3):
        assert corr_explicit(polygon, 2, index) == orbit[2][index]
    assert corr_explicit(polygon, 3, 1) == orbit[3][1]
    assert corr_explicit(polygon, 2, 2, method='ratio') == orbit[2][2]


def test_pentagram_lattice_site():
    polygon = make_generic_polygon(6, seed=14)
    orbit = corr_iterate(polygon, 2)
    assert pentagram_explicit(polygon, (1, 1)) == orbit[2][-1]
    assert pentagram_explicit(polygon, (2, 0)) == orbit[2][0]
    with pytest.raises(ValueError):
        pentagram_explicit(polygon, (0, 0))


def test_explicit_solution_changes_chart():
    polygon = [pt(0, 0), pt(3, 1), ProjPoint([1, 2, 0]), pt(1, 4), pt(-2, 2), pt(-1, -3)]
    with pytest.raises(ChartError):
        corr_explicit(polygon, 2, 0)
    assert corr_explicit(polygon, 2, 0, auto_chart=True) == corr_iterate(polygon, 2)[2][0]


def test_dodgson_m2_is_rectangle_center():
    polygon = make_axis_polygon(2, seed=3)
    report = check_pentagram_dodgson(polygon)
    assert report.passed
    assert report.observed_step == 1
    assert report.details['nmat_agrees']


def test_dodgson_m3():
    polygon = make_axis_polygon(3, seed=5)
    report = check_pentagram_dodgson(polygon)
    assert report.passed
    assert report.observed_step == 2
    assert corr_iterate(polygon, 2)[2][0] == center_of_mass(polygon)


def test_corrugated_dodgson_n3():
    report = check_corr_dodgson(make_axis_polygon(2, N=3, seed=7), N=3)
    assert report.passed
    assert report.name == 'corrugated_dodgson_N3'


def test_dodgson_rejects_misaligned_polygon():
    report = check_pentagram_dodgson(make_generic_polygon(6, seed=8))
    assert not report.passed
    assert 'misaligned_edges' in report.violations[0]


def test_devron_m3():
    report = check_pentagram_devron(make_pentagram_devron(3, seed=1))
    assert report.passed
    assert report.steps == 2
    assert report.observed_step == 3


def test_devron_m4():
    report = check_pentagram_devron(make_pentagram_devron(4, seed=2))
    assert report.passed
    assert report.observed_step == 5
    assert 'pattern' in report.details


def test_devron_needs_alignment():
    report = check_pentagram_devron(make_generic_polygon(6, seed=3))
    assert not report.passed
    assert not report.details['aligned']


def test_dimension_must_match_order():
    with pytest.raises(ValueError):
        corr_step(make_generic_polygon(6, N=2), N=3)
    with pytest.raises(ValueError):
        make_pentagram_devron(2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
