#!/usr/bin/env python3
"""
Tests for the octahedral lattice, propagation and the Dodgson/Devron checks
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import ProjValue, SingularMatrixError, random_value
from dskp import (
    InitialData, LatticePoint, PeriodLattice, WindowTooSmallError, check_devron, check_dodgson,
    devron_targets, dodgson_targets, experiment_pairsing, keyed_rng, make_devron, make_dodgson,
    make_dodgson_cyclic, nmat_cells, nmat_value, propagate, random_dodgson, random_initial_data,
    value_at
)


def pv(x):
    return ProjValue.of(x)


def star_data():
    return InitialData(cells={
        (0, 0): pv(0), (0, 1): pv(4), (0, -1): pv(3), (1, 0): pv(2), (-1, 0): pv(1),
    })


def constant_even_layer(d, seed=11):
    def source(i, j):
        if (i + j) % 2 == 0:
            return pv(d)
        return random_value(keyed_rng(seed, i, j))
    return InitialData(source=source)


def test_lattice_point_parity():
    LatticePoint(1, 1, 2)
    with pytest.raises(ValueError):
        LatticePoint(1, 0, 0)


def test_single_octahedron():
    assert value_at(star_data(), 0, 0, 2) == pv(Fraction(11, 5))


def test_window_too_small_lists_missing_cells():
    data = InitialData(cells={c: v for c, v in star_data().cells.items() if c != (0, 1)})
    with pytest.raises(WindowTooSmallError) as excinfo:
        propagate(data, targets=[LatticePoint(0, 0, 2)])
    assert excinfo.value.missing == [(0, 1)]


def test_kmax_region_and_octahedra():
    data = random_initial_data(range(0, 7), range(0, 7), seed=3)
    slab = propagate(data, kmax=4)
    assert LatticePoint(3, 3, 4) in slab
    assert LatticePoint(2, 3, 5) not in slab
    assert slab.kmax == 4
    assert slab.verify_octahedra() == []
    assert not slab.undefined_points()


def test_slab_frame_export(tmp_path):
    slab = propagate(star_data(), targets=[LatticePoint(0, 0, 2)])
    frame = slab.to_frame()
    assert list(frame.columns) == ['i', 'j', 'k', 'value', 'flag']
    assert len(frame) == 6
    assert set(frame['flag']) == {'initial', 'computed'}
    path = tmp_path / 'slab.csv'
    slab.to_csv(path)
    assert path.read_text().startswith('i,j,k,value,flag')


def test_projective_equivariance():
    data = random_initial_data(range(0, 7), range(0, 7), seed=8)
    target = LatticePoint(3, 3, 4)

    def moebius(z):
        return (2 * z + 1) / (z - 3)

    original = value_at(data, *target.as_tuple())
    image = value_at(data.transformed(moebius), *target.as_tuple())
    assert image == moebius(original)


def test_period_lattice_reduce():
    double = PeriodLattice([(3, 3), (3, -3)])
    assert double.index == 18
    assert len(set(double.reduce(i, j) for i in range(-9, 9) for j in range(-9, 9))) == 18
    assert double.reduce(5, 1) == double.reduce(8, 4) == double.reduce(8, -2)
    simple = PeriodLattice([(2, 2)])
    assert simple.reduce(5, 7) == simple.reduce(1, 3)


def test_json_round_trip_with_period(tmp_path):
    data = random_dodgson(2, d=0, seed=4)
    path = tmp_path / 'init.json'
    data.save(path, i_range=range(0, 4), j_range=range(0, 2))
    loaded = InitialData.from_json(path)
    assert json.loads(path.read_text())['period'] == {'double': 2}
    assert loaded.value(9, -3) == data.value(9, -3)
    assert loaded.check_periodicity() == []


def test_dodgson_harmonic_mean_m2():
    init = make_dodgson_cyclic(2, 0, [1, 3], p=1)
    slab = propagate(init, targets=dodgson_targets(2))
    report = check_dodgson(slab, 2, init)
    assert report.passed
    assert report.value == pv(Fraction(3, 2))
    assert report.details['harmonic_mean'] == pv(Fraction(3, 2))


def test_dodgson_constant_m3():
    init = random_dodgson(3, d=1, seed=5)
    slab = propagate(init, targets=dodgson_targets(3))
    report = check_dodgson(slab, 3, init)
    assert report.passed
    assert report.observed_step == 3


def test_dodgson_rejects_wrong_layer_size():
    with pytest.raises(ValueError):
        make_dodgson(2, 0, [1, 2, 3])


def test_devron_constant_diagonals():
    init = make_devron(4, 1, seed=9)
    assert init.value(0, 0) == init.value(5, 5) == init.value(1, 1)
    assert init.value(3, 1) == init.value(7, 5)


def test_devron_m3_p1():
    slab = propagate(make_devron(3, 1, seed=2), targets=devron_targets(3, 1))
    report = check_devron(slab, 3, 1)
    assert report.passed
    assert report.details['pairs_compared'] > 0


def test_nmat_layout():
    cells = nmat_cells(LatticePoint(1, 1, 4))
    assert cells[0] == [(1, 4), (2, 3), (3, 2), (4, 1)]
    assert cells[1] == [(0, 3), (1, 2), (2, 1), (3, 0)]


def test_nmat_matches_propagation():
    init = constant_even_layer(0)
    assert nmat_value(init, (0, 1, 1), d=pv(0)) == init.value(0, 1)
    for target in ((0, 0, 2), (1, 0, 3), (1, 1, 4)):
        assert nmat_value(init, target, d=pv(0)) == value_at(init, *target)


def test_nmat_singular():
    init = InitialData(source=lambda i, j: pv(2) if (i + j) % 2 else pv(0))
    with pytest.raises(SingularMatrixError):
        nmat_value(init, (0, 0, 2), d=pv(0))


def test_pair_experiment_is_report_only():
    report = experiment_pairsing(2, 2, seed=1)
    assert report.report_only
    assert report.details['constraint_scan']
    assert 'family_i_plus_j_eq_m_mod_4' in report.to_dict()['details']


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
