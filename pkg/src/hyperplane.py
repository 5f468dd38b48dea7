"""
The short diagonal hyperplane map in RP^3 and its companion polygons

T(v)_i = v_{i-1}v_{i+1} ∩ v_{i-2}v_iv_{i+2}
T(c)_i = c_{i-1}c_{i+1} ∩ T(v)_{i-1}T(v)_{i+1}

A companion c of v has c_i on the line v_{i-1}v_{i+1} and on the plane
v_{i-2}v_ic_{i-2}; it is fixed by the two seeds c_0 and c_1. The coordinates
of (v, c) embed into dSKP with a 4-periodic diagonal pattern of weights
(b, T(u), u, b).
"""

import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from dimer import explicit_value
from dskp import value_at
from field import EXACT, FLOAT, IrrationalFixedPointError, ProjValue, mobius_fixed_points, multi_ratio6, random_values
from linalg import determinant, nullspace
from planar import lazy_initial_data
from projective import Flat, ProjPoint, intersect, line_through, meet, plane_through, points_rank
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Polygon = List[ProjPoint]


def _det(vectors: Sequence[Sequence], backend):
    return determinant([list(v) for v in vectors], backend=backend)


def _combine(s, a: Sequence, t, b: Sequence) -> Tuple:
    return tuple(s * x + t * y for x, y in zip(a, b))


def point_on_line_in_plane(a: Sequence, b: Sequence, plane: Sequence[Sequence], backend) -> Tuple:
    """
    The vector of span(a, b) inside span(plane):
    det(plane, b) a - det(plane, a) b.
    """
    return _combine(_det(list(plane) + [b], backend), a, -_det(list(plane) + [a], backend), b)


def hyp_point(points: Sequence[ProjPoint], i: int) -> ProjPoint:
    """T(v)_i on a closed polygon."""
    n = len(points)
    return intersect(line_through(points[(i - 1) % n], points[(i + 1) % n]),
                     plane_through(points[(i - 2) % n], points[i % n], points[(i + 2) % n]))


def hyp_polygon_step(points: Sequence[ProjPoint]) -> Polygon:
    if points and points[0].dimension != 3:
        raise ValueError("The short diagonal hyperplane map acts on polygons in RP^3")
    return [hyp_point(points, i) for i in range(len(points))]


def hyp_step(points: Sequence[ProjPoint], companion: Sequence[ProjPoint]) -> Tuple[Polygon, Polygon]:
    """(T(v), T(c)) for a closed polygon with a closed companion of the same length."""
    n = len(points)
    if len(companion) != n:
        raise ValueError("The companion must have as many vertices as the polygon")
    new_points = hyp_polygon_step(points)
    new_companion = [intersect(line_through(companion[(i - 1) % n], companion[(i + 1) % n]),
                               line_through(new_points[(i - 1) % n], new_points[(i + 1) % n]))
                     for i in range(n)]
    return new_points, new_companion


def hyp_iterate(points: Sequence[ProjPoint], steps: int) -> List[Polygon]:
    orbit = [list(points)]
    for _ in range(steps):
        orbit.append(hyp_polygon_step(orbit[-1]))
    return orbit


# ---------------------------------------------------------------------------
# Companion polygons
# ---------------------------------------------------------------------------

class Companion:
    """
    A companion polygon of a closed polygon, extended on demand in both
    directions from the seeds c_0 and c_1 by the determinant recursion.
    """

    def __init__(self, points: Sequence[ProjPoint], seeds: Tuple[ProjPoint, ProjPoint]):
        self.points = list(points)
        self.backend = self.points[0].backend
        self._values: Dict[int, Tuple] = {0: seeds[0].coords, 1: seeds[1].coords}

    def _v(self, i: int) -> Tuple:
        return self.points[i % len(self.points)].coords

    def _vector(self, i: int) -> Tuple:
        if i in self._values:
            return self._values[i]
        if i > 1:
            previous = self._vector(i - 2)
            value = point_on_line_in_plane(self._v(i - 1), self._v(i + 1),
                                           [self._v(i - 2), previous, self._v(i)], self.backend)
        else:
            following = self._vector(i + 2)
            value = point_on_line_in_plane(self._v(i + 1), self._v(i - 1),
                                           [self._v(i + 2), following, self._v(i)], self.backend)
        if self.backend is FLOAT:
            size = max(abs(x) for x in value)
            if size:
                value = tuple(x / size for x in value)
        self._values[i] = value
        return value

    def at(self, i: int) -> ProjPoint:
        return ProjPoint(self._vector(i), self.backend)

    def window(self, indices: Sequence[int]) -> Dict[int, ProjPoint]:
        return {i: self.at(i) for i in indices}


def seed_companion(points: Sequence[ProjPoint], s0=1, s1=1) -> Companion:
    """Companion with c_0 = v_{-1} + s0 v_1 and c_1 = v_0 + s1 v_2 (lifted vectors)."""
    n = len(points)
    backend = points[0].backend
    s0, s1 = backend.scalar(s0), backend.scalar(s1)
    one = backend.scalar(1)
    c0 = ProjPoint(_combine(one, points[(-1) % n].coords, s0, points[1 % n].coords), backend)
    c1 = ProjPoint(_combine(one, points[0].coords, s1, points[2 % n].coords), backend)
    return Companion(points, (c0, c1))


def companion_extend(points: Sequence[ProjPoint], seeds: Tuple[ProjPoint, ProjPoint],
                     indices: Sequence[int]) -> Dict[int, ProjPoint]:
    """The companion through c_0, c_1 on ``indices``, negative ones included."""
    return Companion(points, seeds).window(indices)


def _forward_map(points: Sequence[ProjPoint], start: int, vector: Tuple) -> Tuple:
    """Carry a lift of c_start through the recursion to c_{start+n}."""
    n = len(points)
    backend = points[0].backend
    current = vector
    for i in range(start + 2, start + n + 1, 2):
        v = [points[k % n].coords for k in (i - 2, i - 1, i, i + 1)]
        current = point_on_line_in_plane(v[1], v[3], [v[0], current, v[2]], backend)
    return current


def closed_companion(points: Sequence[ProjPoint]) -> Polygon:
    """
    A companion with c_{i+n} = c_i: for each parity the lift of c_r in
    span(v_{r-1}, v_{r+1}) is an eigenvector of the map c_r -> c_{r+n}.

    Raises:
        ValueError: odd number of vertices
        IrrationalFixedPointError: exact backend and the eigenvectors are not
            Gaussian-rational; use the float backend
    """
    n = len(points)
    if n % 2:
        raise ValueError("Closed companions need an even number of vertices")
    backend = points[0].backend
    seeds = []
    for r in (0, 1):
        e_a, e_b = points[(r - 1) % n].coords, points[(r + 1) % n].coords
        columns = []
        for basis_vector in (e_a, e_b):
            image = _forward_map(points, r, basis_vector)
            kernel = nullspace([[e_a[k], e_b[k], -image[k]] for k in range(4)], n_cols=3, backend=backend)
            if len(kernel) != 1 or backend.is_zero(kernel[0][2], 1.0):
                raise ValueError("Degenerate polygon: the companion recursion leaves span(v_{r-1}, v_{r+1})")
            alpha, gamma, scale = kernel[0]
            columns.append((alpha / scale, gamma / scale))
        matrix = ((columns[0][0], columns[1][0]), (columns[0][1], columns[1][1]))
        try:
            fixed = mobius_fixed_points(matrix)
        except IrrationalFixedPointError:
            logger.error("Closed companion has irrational eigenvectors over the exact backend")
            raise
        one = backend.scalar(1)
        if fixed.degenerate:
            s, t = one, one
        else:
            point = fixed.points[0]
            s, t = (point.p, point.q)
        seeds.append(ProjPoint(_combine(s, e_a, t, e_b), backend))
    companion = Companion(points, (seeds[0], seeds[1]))
    return [companion.at(i) for i in range(n)]


def companion_violations(points: Dict[int, ProjPoint], companion: Dict[int, ProjPoint],
                         indices: Sequence[int]) -> List[Dict]:
    """Indices where c_i leaves the line v_{i-1}v_{i+1} or the plane v_{i-2}v_ic_{i-2}."""
    bad = []
    for i in indices:
        if not all(k in points for k in (i - 2, i - 1, i, i + 1)) or not all(k in companion for k in (i - 2, i)):
            continue
        if points_rank([points[i - 1], points[i + 1], companion[i]]) > 2:
            bad.append({'i': i, 'problem': 'off the short diagonal'})
        elif points_rank([points[i - 2], points[i], companion[i - 2], companion[i]]) > 3:
            bad.append({'i': i, 'problem': 'off the plane'})
    return bad


# ---------------------------------------------------------------------------
# Orbits of (v, c) and the dSKP embedding
# ---------------------------------------------------------------------------

class HyperplaneOrbit:
    """
    Lazily computed T^s(v)_i and T^s(c)_i; step -1 of c is
    T^{-1}(c)_i = v_{i-1}c_{i-1} ∩ v_{i+1}c_{i+1}.
    """

    def __init__(self, points: Sequence[ProjPoint], companion):
        self.points = list(points)
        self.n = len(self.points)
        self.companion = companion
        self.backend = self.points[0].backend
        self._cache: Dict[Tuple[str, int, int], ProjPoint] = {}

    def v(self, step: int, i: int) -> ProjPoint:
        if step < 0:
            raise ValueError("Backward steps of the polygon are not computed")
        i = i % self.n
        key = ('v', step, i)
        if key not in self._cache:
            if step == 0:
                value = self.points[i]
            else:
                value = intersect(line_through(self.v(step - 1, i - 1), self.v(step - 1, i + 1)),
                                  plane_through(self.v(step - 1, i - 2), self.v(step - 1, i),
                                                self.v(step - 1, i + 2)))
            self._cache[key] = value
        return self._cache[key]

    def c(self, step: int, i: int) -> ProjPoint:
        if isinstance(self.companion, (list, tuple)):
            i = i % self.n
        key = ('c', step, i)
        if key not in self._cache:
            if step == 0:
                value = self.companion[i] if isinstance(self.companion, (list, tuple)) else self.companion.at(i)
            elif step == -1:
                value = intersect(line_through(self.v(0, i - 1), self.c(0, i - 1)),
                                  line_through(self.v(0, i + 1), self.c(0, i + 1)))
            else:
                value = intersect(line_through(self.c(step - 1, i - 1), self.c(step - 1, i + 1)),
                                  line_through(self.v(step, i - 1), self.v(step, i + 1)))
            self._cache[key] = value
        return self._cache[key]

    def relation_violations(self, steps: Sequence[int], indices: Sequence[int]) -> List[Dict]:
        """Both six-point relations of the (u, b) coordinates, per step, site and coordinate."""
        bad = []
        for s in steps:
            for i in indices:
                first = (self.v(s, i), self.c(s, i + 1), self.v(s + 1, i + 1), self.c(s + 1, i),
                         self.v(s + 1, i - 1), self.c(s, i - 1))
                second = (self.c(s - 1, i), self.c(s, i + 1), self.v(s, i + 1), self.v(s + 1, i),
                          self.v(s, i - 1), self.c(s, i - 1))
                for name, points in (('first', first), ('second', second)):
                    for index in range(3):
                        ratio = multi_ratio6(*(p.coordinate(index) for p in points))
                        if ratio != ProjValue.of(-1, ratio.backend):
                            bad.append({'relation': name, 'step': s, 'i': i, 'coordinate': index})
        return bad

    def lattice_value(self, coordinate: int, p: int, q: int, k: int) -> ProjValue:
        """x(p, q, k): companion points when p-q+k = 0 mod 4, polygon points when 2 mod 4."""
        residue = (p - q + k) % 4
        index = p + q - (p - q - k) // 4
        if residue == 0:
            return self.c(k // 2, index).coordinate(coordinate)
        if residue == 2:
            return self.v((k + 1) // 2, index).coordinate(coordinate)
        raise ValueError(f"({p}, {q}, {k}) is not a lattice point")

    def initial_data(self, coordinate: int):
        return lazy_initial_data(lambda i, j: self.lattice_value(coordinate, i, j, (i + j) % 2),
                                 backend=self.backend, metadata={'kind': 'hyperplane', 'coordinate': coordinate})


def hyp_target(step: int, i: int) -> Tuple[int, int, int]:
    """Lattice point of T^step(v)_i."""
    if i % 2 == 0:
        return (i // 2 + step + 2, i // 2 - step - 1, 2 * step - 1)
    return ((i - 1) // 2 + step, (i - 1) // 2 - step + 1, 2 * step - 1)


def hyp_explicit(orbit: HyperplaneOrbit, step: int, i: int, method: str = 'kernel',
                 max_size: Optional[int] = None) -> ProjPoint:
    """T^step(v)_i through the diamond A_{2 step - 2} on the weights b, u and T(u)."""
    if step < 1:
        raise ValueError("hyp_explicit needs step >= 1")
    coordinates = [explicit_value(orbit.initial_data(c), hyp_target(step, i), method=method, max_size=max_size)
                   for c in range(3)]
    return ProjPoint.from_coordinates(coordinates)


def hyp_value_via_dskp(orbit: HyperplaneOrbit, coordinate: int, step: int, i: int) -> ProjValue:
    return value_at(orbit.initial_data(coordinate), *hyp_target(step, i))


# ---------------------------------------------------------------------------
# Singular polygons: osculating planes through two points
# ---------------------------------------------------------------------------

def _random_point(rng: random.Random, backend) -> ProjPoint:
    return ProjPoint.affine(*(v.value for v in random_values(rng, 3, backend, real=True)), backend=backend)


def make_osculating_polygon(m: int, seed: int = DEFAULT_SEED,
                            backend=EXACT) -> Tuple[Polygon, Tuple[ProjPoint, ProjPoint]]:
    """
    A closed 2m-gon whose plane v_{i-1}v_iv_{i+1} contains P_{[i]_2}.

    Returns:
        (polygon, (P_0, P_1))
    """
    if m < 3:
        raise ValueError("The osculating polygon needs m >= 3")
    rng = random.Random(seed)
    for _ in range(50):
        anchors = (_random_point(rng, backend), _random_point(rng, backend))
        vectors = [_random_point(rng, backend).coords, _random_point(rng, backend).coords]
        for i in range(1, 2 * m - 2):
            a, b, c = (v.value for v in random_values(rng, 3, backend, real=True))
            anchor = anchors[i % 2].coords
            vectors.append(tuple(a * x + b * y + c * z for x, y, z in zip(vectors[i - 1], vectors[i], anchor)))
        points = [ProjPoint(v, backend) for v in vectors]
        last = meet(meet(plane_through(points[2 * m - 3], points[2 * m - 2], anchors[0]),
                         plane_through(points[2 * m - 2], points[0], anchors[1])),
                    plane_through(points[0], points[1], anchors[0])).point()
        points.append(last)
        if not last.is_undefined and points_rank(points) == 4 and not osculating_violations(points, anchors):
            return points, anchors
    raise ValueError("Could not build a non-degenerate osculating polygon")


def osculating_violations(points: Sequence[ProjPoint], anchors: Tuple[ProjPoint, ProjPoint]) -> List[int]:
    n = len(points)
    return [i for i in range(n)
            if points_rank([points[(i - 1) % n], points[i], points[(i + 1) % n], anchors[i % 2]]) > 3]


def common_point(points: Sequence[ProjPoint], parity: int) -> Flat:
    """Intersection of the planes v_{i-1}v_iv_{i+1} over indices of the given parity."""
    n = len(points)
    planes = [plane_through(points[(i - 1) % n], points[i], points[(i + 1) % n]) for i in range(parity, n, 2)]
    result = planes[0]
    for plane in planes[1:]:
        result = meet(result, plane)
    return result


def check_hyp_singularity(points: Sequence[ProjPoint]) -> CheckReport:
    """
    A closed 2m-gon whose osculating planes pass through P_0 (even) and P_1 (odd):
    after m-3 steps the even points lie in a plane E_0 and the odd points in
    a plane E_1. Planes that degenerate to lines are accepted and labelled.
    """
    points = list(points)
    n = len(points)
    if n % 2 or n < 8:
        raise ValueError("The hyperplane singularity needs a closed 2m-gon with m >= 4")
    m = n // 2
    steps = m - 3
    report = CheckReport(name='hyperplane_singularity', passed=False, steps=steps, predicted_step=steps)
    for parity in (0, 1):
        if common_point(points, parity).dimension < 0:
            report.violations.append({'no_common_point_of_osculating_planes': parity})
    if report.violations:
        return report

    orbit = hyp_iterate(points, steps)
    for step, polygon in enumerate(orbit):
        if any(p.is_undefined for p in polygon):
            report.violations.append({'undefined_at_step': step})
            break
        ranks = [points_rank(polygon[parity::2]) for parity in (0, 1)]
        if max(ranks) <= 3 and report.observed_step is None:
            report.observed_step = step
            report.details['ranks'] = ranks
            report.details['outcome'] = 'lines' if max(ranks) <= 2 else 'planes'
    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"Hyperplane singularity m={m}: {'pass' if report.passed else 'FAIL'} "
                f"({report.details.get('outcome')})")
    return report
