"""
Miquel dynamics on square-grid circle patterns

A circle pattern has intersection points p_{i,j} at the vertices and a circle
c_{i,j} through the four corners of every face (i, j). One step replaces the
circles of one parity: every point moves to the second intersection of the
two unchanged circles through it, and the circles of the replaced parity are
the circumcircles of the new points. The centres alone follow the dSKP
recurrence, with the initial values a_{i,j} = t_{i,j}.
"""

import logging
import random
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from dimer import explicit_value
from dskp import PeriodLattice, dodgson_targets, keyed_rng, propagate
from field import EXACT, ProjValue, all_equal, format_value, multi_ratio6, solve_apex
from planar import (
    LatticeMap, circle_points, circumcenter_of, const, equidistant, lazy_initial_data,
    reflect_across_line, rotate_quarter, squared_distance
)
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

NEIGHBOURS = {'E': (1, 0), 'N': (0, 1), 'W': (-1, 0), 'S': (0, -1)}


def _around(i: int, j: int) -> List[Cell]:
    return [(i + di, j + dj) for di, dj in NEIGHBOURS.values()]


def _update_domain(lmap: LatticeMap) -> List[Cell]:
    if lmap.lattice is not None and lmap.lattice.index is not None:
        return lmap.lattice.representatives()
    return [cell for cell, _ in lmap.items()]


# ---------------------------------------------------------------------------
# t-realizations
# ---------------------------------------------------------------------------

class TRealization:
    """Circle centres t_{i,j} on the faces of the square grid."""

    def __init__(self, centers: LatticeMap, time: int = 0):
        self.centers = centers
        self.time = time

    @property
    def backend(self):
        return self.centers.backend

    def value(self, i: int, j: int) -> ProjValue:
        return self.centers.value(i, j)

    def angle_ratio(self, i: int, j: int) -> ProjValue:
        """(t_E - t)(t_W - t) / ((t_N - t)(t_S - t)); real for a t-realization."""
        t = self.value(i, j)
        east, north, west, south = (self.value(*c) for c in _around(i, j))
        return (east - t) * (west - t) / ((north - t) * (south - t))

    def violations(self) -> List[Cell]:
        """Interior faces where the angle ratio is not real."""
        bad = []
        for (i, j) in _update_domain(self.centers):
            if not all(c in self.centers for c in _around(i, j)):
                continue
            ratio = self.angle_ratio(i, j)
            if ratio.is_undefined or not ratio.is_real():
                bad.append((i, j))
        return bad

    def initial_data(self):
        return lazy_initial_data(self.centers.as_source(), backend=self.backend,
                                 metadata={'kind': 'miquel', 'time': self.time})


def miquel_step(t: TRealization, parity: int) -> TRealization:
    """
    Replace the centres of faces with [i+j]_2 = parity.

    Faces of that parity without four known neighbours leave the window.
    """
    before = t.centers
    after = before.copy(name=f"t{t.time + 1}")
    for (i, j) in _update_domain(before):
        if (i + j) % 2 != parity:
            continue
        if not all(c in before for c in _around(i, j)):
            after.discard(i, j)
            continue
        east, north, west, south = (before.value(*c) for c in _around(i, j))
        after.set(i, j, solve_apex(before.value(i, j), north, south, east, west))
    logger.debug(f"Miquel step {t.time + 1}: replaced parity {parity}")
    return TRealization(after, time=t.time + 1)


def miquel_iterate(t: TRealization, steps: int) -> List[TRealization]:
    """States t, T(t), ..., T^steps(t); step k replaces parity [k-1]_2."""
    states = [t]
    for k in range(1, steps + 1):
        states.append(miquel_step(states[-1], (k - 1) % 2))
    return states


def relation_violations(before: TRealization, after: TRealization, parity: int) -> List[Cell]:
    """Faces where the six-point multi-ratio of a step is not -1."""
    bad = []
    for (i, j) in _update_domain(after.centers):
        if (i + j) % 2 != parity or (i, j) not in before.centers:
            continue
        if not all(c in before.centers for c in _around(i, j)):
            continue
        ratio = multi_ratio6(before.value(i, j), before.value(i + 1, j), before.value(i, j + 1),
                             after.value(i, j), before.value(i - 1, j), before.value(i, j - 1))
        if ratio != const(-1, ratio):
            bad.append((i, j))
    return bad


def miquel_explicit(t: TRealization, face: Cell, k: int, method: str = 'kernel',
                    max_size: Optional[int] = None) -> ProjValue:
    """T^k(t)_{i,j} through the Aztec diamond A_k centred at face (i, j)."""
    i, j = face
    if k == 0:
        return t.value(i, j)
    if (i + j + k) % 2 != 1:
        raise ValueError(f"T^{k}(t) replaces ({i}, {j}) only when i + j + k is odd")
    return explicit_value(t.initial_data(), (i, j, k + 1), method=method, max_size=max_size)


# ---------------------------------------------------------------------------
# Circle patterns
# ---------------------------------------------------------------------------

class CirclePattern:
    """Intersection points on vertices and circle centres on faces."""

    def __init__(self, points: LatticeMap, centers: LatticeMap, time: int = 0,
                 metadata: Optional[Mapping] = None):
        self.points = points
        self.centers = centers
        self.time = time
        self.metadata = dict(metadata or {})

    @property
    def realization(self) -> TRealization:
        return TRealization(self.centers, time=self.time)

    @staticmethod
    def corners(i: int, j: int) -> List[Cell]:
        return [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]

    def circle(self, i: int, j: int) -> Tuple[ProjValue, ProjValue]:
        """(centre, squared radius) of face (i, j)."""
        center = self.centers.value(i, j)
        return center, squared_distance(self.points.value(i, j), center)

    def faces(self) -> List[Cell]:
        return _update_domain(self.centers)

    def violations(self) -> List[Cell]:
        """Faces whose four corners are not on one circle around the stored centre."""
        bad = []
        for (i, j) in self.faces():
            corners = [self.points.get(*c) for c in self.corners(i, j)]
            if any(p is None for p in corners):
                continue
            if not equidistant(self.centers.value(i, j), corners):
                bad.append((i, j))
        return bad

    def distinct_circles(self) -> List[Tuple[ProjValue, ProjValue]]:
        found: List[Tuple[ProjValue, ProjValue]] = []
        for (i, j) in self.faces():
            circle = self.circle(i, j)
            if all(not (circle[0] == c and circle[1] == r) for c, r in found):
                found.append(circle)
        return found

    def distinct_points(self) -> List[ProjValue]:
        found: List[ProjValue] = []
        for _, p in self.points.items():
            if all(p != q for q in found):
                found.append(p)
        return found


def miquel_point_step(pattern: CirclePattern, parity: int) -> Tuple[CirclePattern, Dict]:
    """
    One geometric Miquel move on the points and circles.

    Every point is reflected across the line through the centres of the two
    unchanged circles at its vertex. The centres of the replaced circles come
    from the dSKP step; the returned diagnostics list faces where the
    circumcentre of the new corners disagrees with it.
    """
    realization = miquel_step(pattern.realization, parity)
    centers = realization.centers
    points = pattern.points.copy(name=f"p{pattern.time + 1}")
    for (a, b) in _update_domain(pattern.points):
        if (a + b) % 2 == parity:
            fixed = [(a, b - 1), (a - 1, b)]
        else:
            fixed = [(a - 1, b - 1), (a, b)]
        if not all(f in pattern.centers for f in fixed):
            points.discard(a, b)
            continue
        first, second = (pattern.centers.value(*f) for f in fixed)
        points.set(a, b, reflect_across_line(pattern.points.value(a, b), first, second))

    mismatches, underdetermined = [], []
    for (i, j) in _update_domain(centers):
        if (i + j) % 2 != parity:
            continue
        corners = [points.get(*c) for c in CirclePattern.corners(i, j)]
        if any(p is None for p in corners):
            continue
        center = circumcenter_of(corners)
        if center.is_undefined:
            underdetermined.append((i, j))
        elif center != centers.value(i, j):
            mismatches.append((i, j))
    if mismatches:
        logger.warning(f"Miquel point step {pattern.time + 1}: {len(mismatches)} circumcentre mismatches")
    successor = CirclePattern(points, centers, time=pattern.time + 1, metadata=pattern.metadata)
    return successor, {'mismatches': mismatches, 'underdetermined': underdetermined}


# ---------------------------------------------------------------------------
# Dodgson circle patterns
# ---------------------------------------------------------------------------

DODGSON_ATTEMPTS = 100


def _rational(rng: random.Random, low: int = -6, high: int = 6) -> Fraction:
    return Fraction(rng.randint(low, high), rng.randint(1, 5))


def _degenerate_vertices(points: LatticeMap, centers: LatticeMap, lattice: PeriodLattice,
                         d_center: ProjValue) -> List[Cell]:
    """
    Vertices where the two odd circles coincide with each other or with D,
    or touch without a second intersection point.
    """
    bad = []
    for (a, b) in lattice.representatives():
        odd = [(a, b - 1), (a - 1, b)] if (a + b) % 2 == 0 else [(a - 1, b - 1), (a, b)]
        first, second = (centers.value(*f) for f in odd)
        if d_center in (first, second) or first == second:
            bad.append((a, b))
            continue
        p = points.value(a, b)
        if reflect_across_line(p, first, second) == p:
            bad.append((a, b))
    return bad


def make_dodgson_circle_pattern(m: int, center=0, radius=1, parameters: Optional[Sequence] = None,
                                offsets: Optional[Mapping[Cell, object]] = None,
                                seed: int = DEFAULT_SEED, backend=EXACT) -> CirclePattern:
    """
    Doubly m-closed even Dodgson circle pattern with respect to a circle D.

    Args:
        center, radius: the circle D (rational radius keeps points exact)
        parameters: 2m distinct rational parameters of the points p_0..p_{2m-1}
            on D
        offsets: signed offset s of the auxiliary circle through p_r and p_s
            (r odd, s even), keyed by (r // 2, s // 2); its centre is the
            midpoint plus s * i * (p_s - p_r)

    The vertex (i, j) carries p_{i-j} when i + j is odd and p_{i+j} when
    i + j is even; every even face is the circle D.
    Random offsets are redrawn until the odd circles differ from D and from
    each other and no two of them touch at a vertex.

    Raises:
        ValueError: given parameters or offsets are degenerate
    """
    if m < 2:
        raise ValueError("Dodgson circle patterns need m >= 2")
    rng = keyed_rng(seed, 'miquel-dodgson', m)
    if parameters is None:
        parameters = []
        while len(parameters) < 2 * m:
            t = _rational(rng)
            if t not in parameters:
                parameters.append(t)
    if len(parameters) != 2 * m:
        raise ValueError(f"Need {2 * m} point parameters, got {len(parameters)}")
    on_circle = circle_points(center, radius, parameters, backend)
    d_center = ProjValue.of(center, backend)
    lattice = PeriodLattice([(m, m), (m, -m)])
    points = LatticeMap(lattice=lattice, backend=backend, name='p0')
    centers = LatticeMap(lattice=lattice, backend=backend, name='t0')

    for (i, j) in lattice.representatives():
        index = (i - j) if (i + j) % 2 else (i + j)
        points.set(i, j, on_circle[index % (2 * m)])
        if (i + j) % 2 == 0:
            centers.set(i, j, d_center)

    odd_faces = [(i, j) for (i, j) in lattice.representatives() if (i + j) % 2]
    for _ in range(DODGSON_ATTEMPTS):
        used = [d_center]
        for (i, j) in odd_faces:
            r, s = (i - j) % (2 * m), (i + j + 1) % (2 * m)
            key = (r // 2, s // 2)
            fixed = offsets is not None and key in offsets
            a, b = on_circle[r], on_circle[s]
            middle = (a + b) / const(2, a)
            for _ in range(DODGSON_ATTEMPTS):
                offset = offsets[key] if fixed else _rational(rng)
                aux = middle + const(offset, a) * rotate_quarter(b - a)
                if fixed or all(aux != c for c in used):
                    break
            used.append(aux)
            centers.set(i, j, aux)
        degenerate = _degenerate_vertices(points, centers, lattice, d_center)
        if not degenerate:
            break
        if offsets is not None:
            raise ValueError(f"Degenerate Dodgson offsets at vertices {degenerate[:5]}")
    else:
        raise ValueError(f"No generic Dodgson circle pattern for m={m} after {DODGSON_ATTEMPTS} draws")

    metadata = {'kind': 'dodgson-circles', 'm': m, 'center': d_center, 'radius': radius,
                'parameters': list(parameters)}
    pattern = CirclePattern(points, centers, metadata=metadata)
    bad = pattern.violations()
    if bad:
        raise ValueError(f"Degenerate Dodgson parameters: faces {bad[:5]} are not circles")
    logger.info(f"Built even Dodgson circle pattern m={m} on circle centre {format_value(d_center)}")
    return pattern


def check_miquel_dodgson(pattern: CirclePattern, m: int) -> CheckReport:
    """
    Run m-1 Miquel steps; the circles with [i+j+m]_2 = 0 must all coincide.

    The final points on those circles are checked to be concyclic around
    the common centre, and the common centre is compared with the dSKP value
    x(., ., m) of the centre data.
    """
    steps = m - 1
    report = CheckReport(name='miquel_dodgson', passed=False, steps=steps, predicted_step=steps)
    states = [pattern]
    for k in range(1, steps + 1):
        successor, diagnostics = miquel_point_step(states[-1], (k - 1) % 2)
        for face in diagnostics['mismatches']:
            report.violations.append({'step': k, 'circumcentre_mismatch': list(face)})
        if diagnostics['underdetermined']:
            report.details[f'underdetermined_step_{k}'] = len(diagnostics['underdetermined'])
        for face in successor.violations():
            report.violations.append({'step': k, 'not_concyclic': list(face)})
        states.append(successor)

    final = states[-1]
    parity = m % 2
    collapsing = [(i, j) for (i, j) in final.faces() if (i + j) % 2 == parity]
    centers = [final.centers.value(*f) for f in collapsing]
    if not centers or any(c.is_undefined for c in centers) or not all_equal(centers):
        report.violations.append({'centres': [format_value(c) for c in centers]})
    else:
        common = centers[0]
        report.value = common
        report.observed_step = steps
        corners = [final.points.value(*c) for f in collapsing for c in CirclePattern.corners(*f)]
        if not equidistant(common, corners):
            report.violations.append('final points are not concyclic around the common centre')
        distinct = []
        for p in corners:
            if all(p != q for q in distinct):
                distinct.append(p)
        report.details['points_on_final_circle'] = len(distinct)
        slab = propagate(pattern.realization.initial_data(), targets=dodgson_targets(m))
        dskp_values = list(slab.layer(m).values())
        report.details['dskp_value'] = dskp_values[0]
        if not all(v == common for v in dskp_values):
            report.violations.append({'dskp_values': dskp_values[:6]})

    circles: List[Tuple[ProjValue, ProjValue]] = []
    points: List[ProjValue] = []
    for state in states:
        for circle in state.distinct_circles():
            if all(not (circle[0] == c and circle[1] == r) for c, r in circles):
                circles.append(circle)
        for p in state.distinct_points():
            if all(p != q for q in points):
                points.append(p)
    report.details['circles'] = len(circles)
    report.details['points'] = len(points)
    report.passed = not report.violations
    logger.info(f"Miquel Dodgson m={m}: {'pass' if report.passed else 'FAIL'}, "
                f"{len(circles)} circles, {len(points)} points")
    return report
