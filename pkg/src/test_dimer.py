#!/usr/bin/env python3
"""
Tests for Aztec diamonds, Kasteleyn signs and the two explicit formulas
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import ProjValue, random_value, solve_apex
from dskp import random_initial_data, value_at
from dimer import (
    OversizeError, build_aztec, count_matchings, default_kasteleyn, diamond_from_json, diamond_to_json,
    cylinder_kernel, explicit_value, kernel_evaluation, kernel_on_cylinder, operator_D, partition_function,
    partition_function_bruteforce, perfect_matchings, random_regauge, ratio_Y, ratio_via_kernel,
    regauge, sample_matching
)


def pv(x):
    return ProjValue.of(x)


def random_weights(diamond, seed):
    rng = random.Random(seed)
    return {face: random_value(rng) for face in diamond.faces}


def octahedron_weights(c, north, south, east, west):
    return {(0, 0): pv(c), (0, 1): pv(north), (0, -1): pv(south), (1, 0): pv(east), (-1, 0): pv(west)}


def test_counts():
    assert build_aztec((0, 0), 0).counts() == {
        'internal_faces': 0, 'open_faces': 1, 'vertices': 0, 'black': 0, 'white': 0, 'edges': 0}
    assert build_aztec((0, 0), 1).counts()['edges'] == 4
    three = build_aztec((2, 5), 3)
    assert len(three.internal_faces) == 13
    assert len(three.open_faces) == 12
    assert len(three.faces) == 2 * len(three.black) + 1


def test_kasteleyn_face_products():
    for k in range(1, 5):
        diamond = build_aztec((0, 0), k)
        orientation = default_kasteleyn(diamond)
        assert orientation.violations() == []
        assert len(orientation.signs) == len(diamond.edges)
        assert regauge(orientation, diamond.vertices[3]).violations() == []


def test_matching_counts():
    assert [count_matchings(build_aztec((0, 0), k)) for k in (1, 2, 3)] == [2, 8, 64]
    assert len(perfect_matchings(build_aztec((0, 0), 2))) == 8


def test_sample_matching_is_perfect():
    diamond = build_aztec((0, 0), 3)
    matching = sample_matching(diamond, seed=4)
    covered = [v for edge in matching for v in edge]
    assert sorted(covered) == diamond.vertices


def test_partition_function_matches_bruteforce():
    for k in (1, 2):
        diamond = build_aztec((1, 0), k)
        weights = random_weights(diamond, seed=k)
        assert partition_function(diamond, weights) == partition_function_bruteforce(diamond, weights)


def test_equal_weights_give_zero():
    diamond = build_aztec((0, 0), 2)
    weights = {face: pv(3) for face in diamond.faces}
    assert partition_function(diamond, weights) == pv(0)


def test_ratio_k0_is_center_weight():
    diamond = build_aztec((4, 4), 0)
    weights = {(4, 4): pv(7)}
    assert ratio_Y(diamond, weights) == pv(7)
    assert ratio_via_kernel(diamond, weights) == pv(7)


def test_ratio_k1_matches_octahedron():
    diamond = build_aztec((0, 0), 1)
    weights = octahedron_weights(5, 4, 3, 2, 1)
    expected = solve_apex(pv(5), pv(4), pv(3), pv(2), pv(1))
    assert ratio_Y(diamond, weights) == expected
    assert ratio_via_kernel(diamond, weights) == expected


def test_kernel_accepts_zero_weight():
    diamond = build_aztec((0, 0), 1)
    weights = octahedron_weights(0, 4, 3, 2, 1)
    assert ratio_via_kernel(diamond, weights) == pv(Fraction(11, 5))
    assert ratio_Y(diamond, weights).is_undefined


def test_gauge_invariance():
    diamond = build_aztec((0, 0), 3)
    weights = random_weights(diamond, seed=12)
    orientation = default_kasteleyn(diamond)
    other = random_regauge(orientation, seed=5)
    z, z_other = partition_function(diamond, weights, orientation), partition_function(diamond, weights, other)
    assert z == z_other or z == -z_other
    assert ratio_Y(diamond, weights, orientation) == ratio_Y(diamond, weights, other)


def test_three_way_agreement():
    init = random_initial_data(range(-4, 6), range(-4, 6), seed=21)
    for target in ((1, 1, 2), (1, 0, 3), (1, 1, 4)):
        expected = value_at(init, *target)
        assert explicit_value(init, target, method='ratio') == expected
        assert explicit_value(init, target, method='kernel') == expected


def test_kernel_matches_propagation_at_both_parities():
    init = random_initial_data(range(-6, 8), range(-6, 8), seed=21)
    for k in range(1, 6):
        targets = ((1, 0, k), (0, 1, k)) if k % 2 else ((0, 0, k), (1, 1, k))
        for target in targets:
            expected = value_at(init, *target)
            assert explicit_value(init, target, method='kernel') == expected
            assert explicit_value(init, target, method='ratio') == expected


def test_black_vertices_fill_interior_columns():
    for k in range(1, 6):
        diamond = build_aztec((0, 0), k)
        columns = sorted({x - y for x, y in diamond.black})
        assert columns == list(range(1 - k, k, 2))
        assert len(diamond.black) == k * (k + 1)


def test_rank_deficient_kernel_is_undefined():
    diamond = build_aztec((0, 0), 1)
    weights = octahedron_weights(2, 1, 1, 1, 1)
    result = kernel_evaluation(diamond, weights)
    assert result.nullity == 2
    assert result.value.is_undefined
    assert solve_apex(pv(2), pv(1), pv(1), pv(1), pv(1)).is_undefined


def test_operator_shape_and_signs():
    diamond = build_aztec((0, 0), 2)
    weights = random_weights(diamond, seed=2)
    operator = operator_D(diamond, weights)
    assert operator.shape == (len(diamond.faces), 2 * len(diamond.black))
    assert (0, 0) not in diamond.black
    column = diamond.black.index((1, 0))
    assert operator.entry((0, 0), column) == pv(1)
    assert operator.entry((0, -1), column) == pv(1)
    assert operator.entry((1, -1), column) == pv(-1)
    assert operator.entry((1, 0), column) == pv(-1)
    assert operator.entry((0, 0), column + len(diamond.black)) == weights[(0, 0)]
    assert operator.entry((1, 0), column + len(diamond.black)) == -weights[(1, 0)]
    assert operator_D(build_aztec((0, 0), 0), {(0, 0): pv(1)}).shape == (1, 0)


def test_oversize_guard():
    with pytest.raises(OversizeError):
        count_matchings(build_aztec((0, 0), 3), max_size=2)


def test_cylinder_zero_columns():
    m = 3

    def weight(u, v):
        if u % 4 == 0:
            return pv(0)
        return random_value(random.Random(f"{u}:{v}"))

    result = kernel_on_cylinder(2 * m, 2 * m - 3, m, weight)
    assert len(result.faces) == 2 * result.black_count + m
    assert len(result.zero_columns) == m - 1
    assert result.zero_column_vectors_ok
    assert result.nullity == m


def test_cylinder_kernel_has_dimension_m():
    for m in range(2, 6):
        rng = random.Random(m)
        cells = {}

        def weight(u, v):
            if (u, v) not in cells:
                cells[(u, v)] = pv(0) if u % 4 == 0 else random_value(rng)
            return cells[(u, v)]

        assert kernel_on_cylinder(2 * m, 2 * m - 3, m, weight).nullity == m


def test_cylinder_kernel_from_diamond():
    for m in (2, 3, 4):
        rng = random.Random(40 + m)
        cells = {}

        def weight(i, j):
            u, v = i - j, (i + j) % (2 * m)
            if (u, v) not in cells:
                cells[(u, v)] = pv(0) if u % 4 == 0 else random_value(rng)
            return cells[(u, v)]

        diamond = build_aztec((m, -m), 2 * m - 3)
        result = cylinder_kernel(diamond, weight, m)
        direct = kernel_on_cylinder(2 * m, 2 * m - 3, m, lambda u, v: weight((u + v) // 2, (v - u) // 2))
        assert result.nullity == direct.nullity == m
        assert result.black_count == direct.black_count

        periodic = {(i, j): weight(i, j) for i in range(-4 * m, 4 * m) for j in range(-4 * m, 4 * m)}
        assert cylinder_kernel(diamond, periodic, m).nullity == m


def test_cylinder_kernel_black_columns_follow_diamond():
    diamond = build_aztec((0, 0), 2)
    result = cylinder_kernel(diamond, lambda i, j: pv(i + 2 * j + 7), 2)
    # black columns are u = -1 and u = 1, two faces each modulo 4
    assert result.black_count == 4


def test_cylinder_kernel_rejects_aperiodic_weights():
    weights = {(0, 0): pv(1), (2, 2): pv(2)}
    with pytest.raises(ValueError):
        cylinder_kernel(build_aztec((0, 0), 1), weights, 2)


def test_diamond_json_round_trip():
    diamond = build_aztec((0, 0), 2)
    weights = random_weights(diamond, seed=6)
    loaded, loaded_weights = diamond_from_json(diamond_to_json(diamond, weights))
    assert loaded.center == diamond.center and loaded.k == 2
    assert all(loaded_weights[f] == weights[f] for f in diamond.faces)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
