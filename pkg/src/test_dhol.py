#!/usr/bin/env python3
"""
Tests for discrete holomorphic maps and orthogonal circle patterns
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import GaussianRational, ProjValue, harmonic_mean, random_values
from crossratio import EdgeLabels, quad_cross_ratios, rotated_rows, unrotated
from pnet import make_premature_row, pnet_violations
from dhol import (
    check_dhol_singularity, check_ocp_singularity, dhol_explicit, dhol_explicit_via_pair, dhol_iterate,
    dhol_relation_violations, dhol_split_pnets, experiment_pnet_vs_icr, make_singular_ocp, make_square_ocp,
    ocp_check, ocp_explicit
)


def pv(x):
    return ProjValue.of(x)


def random_dhol(m=4, seed=3, steps=3):
    rng = random.Random(seed)
    zt = rotated_rows(random_values(rng, m), random_values(rng, m))
    return dhol_iterate(zt, steps)


def test_step_is_holomorphic_cross_ratio():
    zt = random_dhol()
    assert quad_cross_ratios(zt, EdgeLabels.holomorphic()) == []
    assert dhol_relation_violations(zt) == []


def test_explicit_three_ways():
    zt = random_dhol(seed=5, steps=3)
    for site in ((2, 1), (3, 1), (2, 2)):
        expected = unrotated(zt, *site)
        assert dhol_explicit(zt, site) == expected
        assert dhol_explicit_via_pair(zt, site) == expected
    assert dhol_explicit(zt, (2, 1), method='ratio') == unrotated(zt, 2, 1)
    with pytest.raises(ValueError):
        dhol_explicit(zt, (1, 0))


def test_split_gives_two_pnets():
    zt = random_dhol(seed=7, steps=4)
    p, q = dhol_split_pnets(zt)
    assert p.period == 4 and q.period == 4
    assert p.value(1, 2) == zt.value(2, 4)
    assert q.value(0, 1) == zt.value(1, 3)
    assert pnet_violations(p) == []
    assert pnet_violations(q) == []


def test_pnet_experiment_is_report_only():
    zt = random_dhol(seed=8, steps=3)
    report = experiment_pnet_vs_icr(zt, 1, 2)
    assert report.report_only
    assert report.details['pnet_diamond'] == 1
    assert report.details['dhol_diamond'] == 2
    assert report.passed


def test_singularity_m2():
    report = check_dhol_singularity([1, 3])
    assert report.passed
    assert report.steps == 1
    assert report.value == pv(Fraction(3, 2))


def test_singularity_m3_odd():
    values = random_values(random.Random(31), 3)
    report = check_dhol_singularity(values)
    assert report.passed
    assert report.observed_step == 4
    assert report.value == harmonic_mean(values)


def test_singularity_m4_even():
    values = random_values(random.Random(32), 4)
    report = check_dhol_singularity(values)
    assert report.passed
    assert report.observed_step == 5
    assert report.details['alternating_identity'].is_zero()


def test_singularity_m4_premature():
    values = make_premature_row(4, seed=9)
    report = check_dhol_singularity(values, variant='premature')
    assert report.passed
    assert report.steps == 4
    assert report.value == harmonic_mean(values)


def test_square_pattern():
    zt = make_square_ocp()
    assert ocp_check(zt) == []
    p, t = dhol_split_pnets(zt)
    assert p.value(3, 2) == pv(GaussianRational(0, 2))
    assert t.value(3, 1) == pv(GaussianRational(Fraction(1, 2), Fraction(3, 2)))


def test_square_pattern_detects_moved_point():
    zt = make_square_ocp()
    zt.set(6, 2, zt.value(6, 2) + pv(1))
    assert ocp_check(zt)


def test_ocp_explicit_matches_split():
    zt = random_dhol(seed=10, steps=4)
    p, t = dhol_split_pnets(zt)
    values = ocp_explicit(zt, 1, 2)
    assert values['p'] == p.value(1, 2)
    assert values['t'] == t.value(1, 2)


def test_singular_ocp_m4():
    centers = make_singular_ocp(4, seed=3)
    report = check_ocp_singularity(centers)
    assert report.passed
    assert report.steps == 2
    assert report.details['harmonic_mean_points'] == report.details['harmonic_mean_centers']
    assert report.value == harmonic_mean(centers)


def test_singular_ocp_over_seeds():
    for m, seeds in ((4, range(1, 11)), (6, (6,))):
        for seed in seeds:
            centers = make_singular_ocp(m, seed=seed)
            assert len({c.format() for c in centers}) == m
            report = check_ocp_singularity(centers)
            assert report.passed, (m, seed, report.violations)
            assert report.value == harmonic_mean(centers)


def test_singular_ocp_needs_even_m():
    with pytest.raises(ValueError):
        make_singular_ocp(3)
    report = check_ocp_singularity([1, 2, 3])
    assert not report.passed


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
