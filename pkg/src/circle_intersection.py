"""
Circle intersection dynamics

Points v_i with circles c_i through v_{i-1}, v_i, v_{i+1} centred at t_i.
One move replaces v_k by the second intersection of c_{k-1} and c_{k+1}
(the mirror image of v_k in the line t_{k-1} t_{k+1}) and t_k by the
centre of the new circle. Centres are tracked as data of their own.

In rotated coordinates the points sit at z~ on even sites and at w~ on odd
sites, the centres the other way round; (z, w) is a Baecklund pair of
integrable cross-ratio maps with gamma = 1.
"""

import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from crossratio import BacklundPair, EdgeLabels, pair_window, unrotated
from field import EXACT, ProjValue, all_equal, cross_ratio, format_value, random_value
from planar import (
    LatticeMap, circle_point, circumcenter, const, equidistant, from_rotated, reflect_across_line,
    rotate_quarter
)
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Polygon moves
# ---------------------------------------------------------------------------

def polygon_centers(points: Sequence[ProjValue]) -> List[ProjValue]:
    """t_i = centre of the circle through v_{i-1}, v_i, v_{i+1}."""
    n = len(points)
    return [circumcenter(points[(k - 1) % n], points[k], points[(k + 1) % n]) for k in range(n)]


def cid_vertex(points: Sequence[ProjValue], centers: Sequence[ProjValue],
               k: int) -> Tuple[List[ProjValue], List[ProjValue]]:
    """Move vertex k of a closed polygon; an involution."""
    n = len(points)
    new_points, new_centers = list(points), list(centers)
    moved = reflect_across_line(points[k % n], centers[(k - 1) % n], centers[(k + 1) % n])
    new_points[k % n] = moved
    new_centers[k % n] = circumcenter(points[(k - 1) % n], points[(k + 1) % n], moved)
    return new_points, new_centers


def cid_rows(points: Sequence, centers: Optional[Sequence] = None,
             backend=EXACT) -> Tuple[LatticeMap, LatticeMap]:
    """
    Rotated maps of a closed polygon with 2m vertices:
    z~_{i,0} = v_i, w~_{i,0} = t_i (i even); z~_{i,1} = t_i, w~_{i,1} = v_i (i odd).
    """
    points = [ProjValue.of(v, backend) for v in points]
    n = len(points)
    if n % 2 or n < 4:
        raise ValueError("Circle intersection dynamics needs a closed polygon with 2m >= 4 vertices")
    centers = [ProjValue.of(t, backend) for t in centers] if centers is not None else polygon_centers(points)
    zt = LatticeMap.row_periodic(n, rotated=True, backend=backend, name='z')
    wt = LatticeMap.row_periodic(n, rotated=True, backend=backend, name='w')
    for k in range(n):
        row = k % 2
        if row == 0:
            zt.set(k, 0, points[k])
            wt.set(k, 0, centers[k])
        else:
            zt.set(k, 1, centers[k])
            wt.set(k, 1, points[k])
    return zt, wt


def cid_polygon(zt: LatticeMap, wt: LatticeMap, time: int) -> Tuple[List[ProjValue], List[ProjValue]]:
    """Points and centres after ``time`` half-steps."""
    points, centers = [], []
    for k in range(zt.period):
        row = time + (k + time) % 2
        if k % 2 == 0:
            points.append(zt.value(k, row))
            centers.append(wt.value(k, row))
        else:
            points.append(wt.value(k, row))
            centers.append(zt.value(k, row))
    return points, centers


def cid_step(zt: LatticeMap, wt: LatticeMap, row: int) -> None:
    """Compute row ``row`` of both maps."""
    for i in zt.sites(row):
        if i % 2 == 0:
            point = reflect_across_line(zt.value(i, row - 2), zt.value(i - 1, row - 1), zt.value(i + 1, row - 1))
            center = circumcenter(wt.value(i - 1, row - 1), wt.value(i + 1, row - 1), point)
            zt.set(i, row, point)
            wt.set(i, row, center)
        else:
            point = reflect_across_line(wt.value(i, row - 2), wt.value(i - 1, row - 1), wt.value(i + 1, row - 1))
            center = circumcenter(zt.value(i - 1, row - 1), zt.value(i + 1, row - 1), point)
            wt.set(i, row, point)
            zt.set(i, row, center)


def cid_iterate(zt: LatticeMap, wt: LatticeMap, steps: int) -> Tuple[LatticeMap, LatticeMap]:
    top = max(zt.rows())
    for row in range(top + 1, top + 1 + steps):
        cid_step(zt, wt, row)
    return zt, wt


def cid_violations(zt: LatticeMap, wt: LatticeMap) -> List[Dict]:
    """Circles whose centre is not equidistant from its four lattice points and the tracked point."""
    bad = []
    for (i, j), _ in zt.items():
        centers, points = (zt, wt) if i % 2 else (wt, zt)
        around = [(i + 1, j + 1), (i - 1, j + 1), (i - 1, j - 1), (i + 1, j - 1)]
        known = [centers.value(*c) for c in around if c in centers]
        if len(known) < 4 or (i, j) not in points:
            continue
        values = known + [points.value(i, j)]
        center = centers.value(i, j)
        if any(v.is_undefined for v in values + [center]):
            continue
        if not equidistant(center, values):
            bad.append({'site': (i, j), 'center': format_value(center)})
    return bad


def cid_labels(zt: LatticeMap, wt: LatticeMap) -> EdgeLabels:
    """Side cross-ratios on the initial staircase, read as edge labels (gamma = 1)."""
    def alpha(i):
        return cross_ratio(unrotated(zt, i, -i), unrotated(zt, i + 1, -i), unrotated(wt, i + 1, -i),
                           unrotated(wt, i, -i))

    def beta(b):
        return cross_ratio(unrotated(zt, -b, b), unrotated(zt, -b, b + 1), unrotated(wt, -b, b + 1),
                           unrotated(wt, -b, b))

    return EdgeLabels(alpha, beta, gamma=1, backend=zt.backend)


def cid_as_backlund(zt: LatticeMap, wt: LatticeMap) -> Tuple[BacklundPair, List]:
    """The Baecklund pair of the dynamics and every violated relation on one period window."""
    pair = BacklundPair(z=zt, w=wt, labels=cid_labels(zt, wt), metadata={'kind': 'circle_intersection'})
    window = pair_window(pair)
    problems = window.side_violations() + window.face_violations() + window.relation_violations()
    if problems:
        logger.warning(f"Circle intersection pair has {len(problems)} violated relations")
    return pair, problems


# ---------------------------------------------------------------------------
# Singular initial data
# ---------------------------------------------------------------------------

def _distinct_parameters(rng: random.Random, count: int) -> List[Fraction]:
    chosen: List[Fraction] = []
    while len(chosen) < count:
        value = Fraction(rng.randint(-12, 12), rng.randint(1, 5))
        if value not in chosen:
            chosen.append(value)
    return chosen


def _bisector_center(a: ProjValue, b: ProjValue, r: Fraction) -> ProjValue:
    """A point (a + b)/2 + r i (b - a) on the perpendicular bisector of [a, b]."""
    return (a + b) / const(2, a) + const(r, a) * rotate_quarter(b - a)


def make_cid_dodgson(m: int, radius=1, seed: int = DEFAULT_SEED,
                     backend=EXACT) -> Tuple[List[ProjValue], List[ProjValue]]:
    """
    2m points with every even point at s = 0 and every even centre at
    s' = radius; odd points lie on the circle around s' through s.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    rng = random.Random(seed)
    s = ProjValue.of(0, backend)
    s_prime = ProjValue.of(radius, backend)
    # t = 0 is the point 2 * radius, never s
    parameters = _distinct_parameters(rng, m)
    odd = [circle_point(radius, radius, t, backend) for t in parameters]
    points, centers = [], []
    for l in range(m):
        points.extend([s, odd[l]])
        ratio = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        centers.extend([s_prime, _bisector_center(s, odd[l], ratio)])
    return points, centers


def make_cid_devron(m: int, seed: int = DEFAULT_SEED, backend=EXACT) -> Tuple[List[ProjValue], List[ProjValue]]:
    """2m points with every even point at 0; odd centres on the bisectors, even centres circumcentres."""
    if m < 3:
        raise ValueError("m must be at least 3")
    rng = random.Random(seed)
    zero = ProjValue.of(0, backend)
    while True:
        odd = []
        while len(odd) < m:
            candidate = random_value(rng, backend)
            if not candidate.is_zero() and all(candidate != v for v in odd):
                odd.append(candidate)
        points = []
        for v in odd:
            points.extend([zero, v])
        centers = []
        for k in range(2 * m):
            if k % 2:
                centers.append(_bisector_center(zero, points[k], Fraction(rng.randint(-6, 6), rng.randint(1, 4))))
            else:
                centers.append(circumcenter(points[(k - 1) % (2 * m)], zero, points[(k + 1) % (2 * m)]))
        if all(c.is_finite for c in centers):
            return points, centers


def check_cid_dodgson(points: Sequence, centers: Sequence, backend=EXACT) -> CheckReport:
    """After m-1 steps both rows z~_m and w~_m are constant."""
    zt, wt = cid_rows(points, centers, backend)
    m = zt.period // 2
    steps = m - 1
    report = CheckReport(name='cid_dodgson', passed=False, steps=steps, predicted_step=steps)
    for row in range(2, m + 1):
        cid_step(zt, wt, row)
        if report.observed_step is None and zt.constant_row(row) is not None and wt.constant_row(row) is not None:
            report.observed_step = row - 1
    z_value, w_value = zt.constant_row(m), wt.constant_row(m)
    report.value = w_value
    report.details.update({'z_row': z_value, 'w_row': w_value})
    if z_value is None or w_value is None:
        report.violations.append({'row': m, 'z': list(zt.row(m).values()), 'w': list(wt.row(m).values())})
    circles = cid_violations(zt, wt)
    if circles:
        report.violations.append({'circle_violations': circles[:5]})
    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"Circle intersection Dodgson 2m={2 * m}: {'pass' if report.passed else 'FAIL'}")
    return report


def check_cid_devron(points: Sequence, centers: Sequence, backend=EXACT,
                     with_intermediate: bool = True) -> CheckReport:
    """
    Every even point at 0: after 2m-4 steps the points row w~_{2m-3} is
    constant. The centres row w~_{2m-2}, undefined for the dynamics itself,
    is evaluated through the dSKP embedding where it is defined.
    """
    zt, wt = cid_rows(points, centers, backend)
    m = zt.period // 2
    steps = 2 * m - 4
    target = 2 * m - 3
    report = CheckReport(name='cid_devron', passed=False, steps=steps, predicted_step=steps)
    first_undefined = None
    for row in range(2, target + 1):
        cid_step(zt, wt, row)
        if first_undefined is None and any(v.is_undefined for v in wt.row(row).values()):
            first_undefined = row
        if report.observed_step is None and wt.constant_row(row) is not None:
            report.observed_step = row - 1
    collapse = wt.constant_row(target)
    report.value = collapse
    report.details['first_undefined_row'] = first_undefined
    if collapse is None:
        report.violations.append({'row': target, 'w': list(wt.row(target).values())})
    if first_undefined is not None and first_undefined < target:
        report.details['early_breakdown'] = first_undefined

    if with_intermediate and collapse is not None:
        pair = BacklundPair(z=zt, w=wt, labels=cid_labels(zt, wt))
        row = target + 1
        values = {}
        for i in zt.sites(row):
            a, b = from_rotated(i, row)
            values[i] = pair.value_via_dskp('w', a, b)
        defined = [v for v in values.values() if not v.is_undefined]
        report.details['intermediate_defined'] = len(defined)
        report.details['intermediate_values'] = {i: format_value(v) for i, v in values.items()}
        if defined and not all_equal(defined):
            report.violations.append('centres of the row after the collapse do not coincide')

    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"Circle intersection Devron 2m={2 * m}: {'pass' if report.passed else 'FAIL'}")
    return report
