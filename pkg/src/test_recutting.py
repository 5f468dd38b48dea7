#!/usr/bin/env python3
"""
Tests for polygon recutting as an integrable cross-ratio map
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from crossratio import pair_window
from field import ProjValue, random_values
from recutting import (
    check_recut_singularity, conjectured_value, experiment_recut_value, lemma_partner, polygon_at,
    polygon_rows, recut_as_icr, recut_iterate, recut_labels, recut_vertex, squared_lengths
)


def pv(x):
    return ProjValue.of(x)


def random_polygon(n=6, seed=4):
    return random_values(random.Random(seed), n)


def test_recut_is_an_involution():
    polygon = random_polygon()
    once = recut_vertex(polygon, 2)
    assert once[2] != polygon[2]
    assert recut_vertex(once, 2) == polygon
    before, after = squared_lengths(polygon), squared_lengths(once)
    assert after[1] == before[2] and after[2] == before[1]


def test_rows_recut_even_then_odd_vertices():
    polygon = random_polygon(seed=5)
    zt = recut_iterate(polygon_rows(polygon), 2)
    assert polygon_at(zt, 0) == polygon
    stepped = polygon_at(zt, 1)
    for k in range(6):
        expected = recut_vertex(polygon, k)[k] if k % 2 == 0 else polygon[k]
        assert stepped[k] == expected


def test_recutting_is_cross_ratio_map():
    zt = recut_iterate(polygon_rows(random_polygon(seed=6)), 3)
    labels, bad = recut_as_icr(zt)
    assert bad == []
    lengths = squared_lengths(polygon_at(zt, 0))
    assert labels.alpha(1) == lengths[2]
    assert labels.beta(0) == lengths[5]


def test_polygon_needs_even_vertex_count():
    with pytest.raises(ValueError):
        polygon_rows(random_polygon(n=5))


def test_partner_satisfies_side_relations():
    values = random_values(random.Random(8), 3)
    vertices = []
    for v in values:
        vertices.extend([pv(0), v])
    zt = polygon_rows(vertices)
    pair = lemma_partner(zt, Fraction(1, 3), recut_labels(zt))
    assert pair.w.value(2, 0) == pv(Fraction(1, 3))
    assert pair_window(pair).side_violations() == []


def test_singularity_m2():
    report = check_recut_singularity([1, 2])
    assert report.passed
    assert report.value == pv(3)


def test_singularity_m3():
    report = check_recut_singularity(random_values(random.Random(9), 3))
    assert report.passed
    assert report.observed_step == 2
    assert report.details['partner_side_violations'] == 0


def test_singularity_m4():
    report = check_recut_singularity(random_values(random.Random(10), 4), x=2)
    assert report.passed
    assert report.steps == 3


def test_closed_expression_is_reported():
    values = random_values(random.Random(11), 3)
    report = experiment_recut_value(values)
    assert report.report_only
    assert report.details['predicted'] == conjectured_value(values)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
