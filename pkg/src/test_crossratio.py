#!/usr/bin/env python3
"""
Tests for integrable cross-ratio maps, Baecklund pairs and the dual map
"""

import random
import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import FLOAT, ProjValue, cross_ratio, harmonic_mean, random_value, random_values
from planar import to_rotated
from crossratio import (
    EdgeLabels, backlund_closed, backlund_extend, check_icr_singularity, dual_map, icr_explicit,
    icr_iterate, icr_step, pair_window, predicted_singular_value, quad_cross_ratios, rotated_rows,
    unrotated
)


def pv(x):
    return ProjValue.of(x)


LABELS = EdgeLabels([2, 3, 5], [7, 11, 13])


def random_map(m, seed, labels, steps, backend=None):
    rng = random.Random(seed)
    kwargs = {} if backend is None else {'backend': backend}
    row0 = random_values(rng, m, **kwargs)
    row1 = random_values(rng, m, **kwargs)
    zt = rotated_rows(row0, row1, **kwargs)
    return icr_iterate(zt, labels, steps)


def test_labels_validation():
    with pytest.raises(ValueError):
        EdgeLabels([0, 1], [1])
    with pytest.raises(ValueError):
        EdgeLabels([1], [1], gamma=0)
    assert EdgeLabels.holomorphic().is_holomorphic()
    assert not LABELS.is_holomorphic()
    assert LABELS.period == 3


def test_holomorphic_step_has_cross_ratio_minus_one():
    zt = random_map(4, seed=2, labels=EdgeLabels.holomorphic(), steps=2)
    assert quad_cross_ratios(zt, EdgeLabels.holomorphic()) == []
    quad = cross_ratio(unrotated(zt, 0, 0), unrotated(zt, 1, 0), unrotated(zt, 1, 1), unrotated(zt, 0, 1))
    assert quad == pv(-1)


def test_step_with_labels():
    zt = random_map(3, seed=5, labels=LABELS, steps=3)
    assert sorted(zt.rows()) == [0, 1, 2, 3, 4]
    assert quad_cross_ratios(zt, LABELS) == []
    # a quad with the wrong ratio is reported
    other = EdgeLabels([2, 3, 5], [7, 11, 17])
    assert quad_cross_ratios(zt, other)


def test_finite_rows_shrink():
    row0 = [pv(v) for v in (1, 2, 3, 4)]
    row1 = [pv(v) for v in (5, 7, 9, 11)]
    zt = rotated_rows(row0, row1, periodic=False)
    values = icr_step(zt, EdgeLabels([2], [3]), 2)
    assert sorted(values) == [2, 4, 6]


def test_backlund_extend_invariants():
    labels = EdgeLabels([2, 3, 5, 7], [11, 13, 17, 19])
    zt = random_map(4, seed=11, labels=labels, steps=3)
    pair = backlund_extend(zt, labels, (0, 0), random_value(random.Random(1)), window=range(-4, 9))
    assert pair.side_violations() == []
    assert pair.face_violations() == []
    assert pair.relation_violations() == []


def test_explicit_matches_partner():
    labels = EdgeLabels([2, 3, 5, 7], [11, 13, 17, 19])
    zt = random_map(4, seed=12, labels=labels, steps=3)
    pair = backlund_extend(zt, labels, (0, 0), pv(3), window=range(-4, 9))
    for site in ((2, 1), (3, 0), (1, 1)):
        values = icr_explicit(pair, site)
        assert values['z'] == pair.z_at(*site)
        assert values['w'] == pair.w_at(*site)
    with pytest.raises(ValueError):
        icr_explicit(pair, (0, 0))


def test_label_equal_to_gamma_is_rejected():
    labels = EdgeLabels([2, 3, 5], [1])
    zt = random_map(3, seed=6, labels=labels, steps=2)
    with pytest.raises(ValueError):
        backlund_extend(zt, labels, (0, 0), pv(4))


def test_different_seeds_give_different_partners():
    zt = random_map(3, seed=7, labels=LABELS, steps=2)
    first = backlund_extend(zt, LABELS, (0, 0), pv(2))
    second = backlund_extend(zt, LABELS, (0, 0), pv(5))
    assert all(w != second.w.value(*cell) for cell, w in first.w.items())
    with pytest.raises(ValueError):
        backlund_extend(zt, LABELS, (0, 0), unrotated(zt, 0, 0))


def test_closed_partner_by_shift():
    labels = EdgeLabels.holomorphic()
    zt = random_map(3, seed=8, labels=labels, steps=2)
    pair = backlund_closed(zt, labels)
    assert pair.metadata['method'] == 'shift'
    assert pair_window(pair).side_violations() == []


def test_closed_partner_by_fixed_point():
    labels = EdgeLabels([2, 3, 5], [7, 11, 13], backend=FLOAT)
    zt = random_map(3, seed=9, labels=labels, steps=1, backend=FLOAT)
    pair = backlund_closed(zt, labels)
    assert pair.metadata['method'] == 'fixed_point'
    assert pair.w.period == 6
    assert pair_window(pair).side_violations() == []


def test_dual_map_is_closed():
    zt = random_map(3, seed=10, labels=LABELS, steps=2)
    dual = dual_map(zt, LABELS)
    assert dual.closedness_violations == []
    assert dual.three_leg_violations == []
    assert dual.monodromy is not None
    assert dual.monodromy_samples > 0
    assert dual.values.value(*to_rotated(0, 0)) == pv(0)


def test_singularity_holomorphic_gives_harmonic_mean():
    values = random_values(random.Random(21), 3)
    report = check_icr_singularity(values, EdgeLabels.holomorphic())
    assert report.passed
    assert report.value == harmonic_mean(values)
    assert report.details['harmonic_mean'] == report.value
    assert report.details['value_via_monodromy'] == report.value
    assert report.details['cylinder']['zero_column_vectors_ok']
    assert report.details['cylinder']['nullity'] == 3
    assert not report.details['premature']


def test_singularity_holomorphic_even_period_collapses_early():
    for m in (2, 4):
        values = random_values(random.Random(30 + m), m)
        report = check_icr_singularity(values, EdgeLabels.holomorphic(), with_cylinder=False)
        assert report.passed
        assert report.details['premature']
        assert report.observed_step < 2 * m - 2
        assert report.value == harmonic_mean(values)
        assert report.details['value_via_monodromy'] == report.value


def test_singularity_random_labels():
    values = random_values(random.Random(22), 3)
    report = check_icr_singularity(values, LABELS, with_cylinder=False)
    assert report.passed
    assert report.observed_step == 4
    assert report.value == predicted_singular_value(values, LABELS)


def test_singularity_degenerate_labels():
    report = check_icr_singularity([pv(1), pv(2)], EdgeLabels([2, 3], [3, 2]))
    assert report.details['degenerate_labels']
    assert report.details['first_undefined_row'] == 3
    assert report.passed


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
