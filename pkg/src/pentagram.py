"""
Pentagram maps on closed polygons

The N-corrugated pentagram map sends a polygon v in RP^N to
T(v)_i = v_{i-1}v_{i+N-1} ∩ v_i v_{i+N}; for N = 2 this is the pentagram map
T(v)_i = v_{i-1}v_{i+1} ∩ v_i v_{i+2} in the plane. Every affine coordinate of
an orbit is a dSKP solution:

    x(p, q, k) = pi_l(T^k(v))_{((N-1)(p-k) + (N+1)q) / 2}

so T^j(v)_i = x(j-i, i, j) is read off the diamond A_{j-1} whose weights are
the coordinates of v and T(v).
"""

import logging
import random
from typing import Dict, List, Optional, Sequence

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from dimer import explicit_value
from dskp import nmat_value, value_at
from field import EXACT, ProjValue, SingularMatrixError, multi_ratio6, random_values
from planar import lazy_initial_data
from projective import (
    ChartError, ProjPoint, are_collinear, center_of_mass, chart_safe_map, intersect, inverse_map,
    line_through, points_rank, transform_polygon
)
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Polygon = List[ProjPoint]
Orbit = List[Polygon]


def _check_corrugation_order(points: Sequence[ProjPoint], N: int) -> None:
    if N < 2:
        raise ValueError("Corrugated pentagram maps need N >= 2")
    if points and points[0].dimension != N:
        raise ValueError(f"Points of dimension {points[0].dimension} for N = {N}")


def corr_step(points: Sequence[ProjPoint], N: int = 2) -> Polygon:
    """T(v)_i = v_{i-1}v_{i+N-1} ∩ v_i v_{i+N} on a closed polygon."""
    _check_corrugation_order(points, N)
    n = len(points)
    result = []
    for i in range(n):
        first = line_through(points[(i - 1) % n], points[(i + N - 1) % n])
        second = line_through(points[i % n], points[(i + N) % n])
        result.append(intersect(first, second))
    undefined = [i for i, p in enumerate(result) if p.is_undefined]
    if undefined:
        logger.debug(f"Pentagram step (N={N}): undefined points at {undefined}")
    return result


def pentagram_step(points: Sequence[ProjPoint]) -> Polygon:
    return corr_step(points, 2)


def corr_iterate(points: Sequence[ProjPoint], steps: int, N: int = 2) -> Orbit:
    """The orbit [v, T(v), ..., T^steps(v)]."""
    orbit = [list(points)]
    for _ in range(steps):
        orbit.append(corr_step(orbit[-1], N))
    return orbit


def first_undefined_step(orbit: Orbit) -> Optional[int]:
    for step, polygon in enumerate(orbit):
        if any(p.is_undefined for p in polygon):
            return step
    return None


def corrugation_violations(points: Sequence[ProjPoint], N: int) -> List[int]:
    """Indices i where v_i, v_{i+1}, v_{i+N}, v_{i+N+1} do not span a plane."""
    n = len(points)
    bad = []
    for i in range(n):
        quad = [points[(i + d) % n] for d in (0, 1, N, N + 1)]
        if any(p.is_undefined for p in quad) or points_rank(quad) > 3:
            bad.append(i)
    return bad


def menelaus_violations(orbit: Orbit, N: int = 2) -> List[Dict]:
    """
    Sites where a coordinate of the six points
    v_{i-1+N}, T(v)_i, T(v)_{i-1}, T^2(v)_i, T(v)_{i-1+N}, T(v)_{i+N}
    does not have multi-ratio -1.
    """
    bad = []
    for step in range(len(orbit) - 2):
        u, tu, ttu = orbit[step], orbit[step + 1], orbit[step + 2]
        n = len(u)
        for i in range(n):
            points = (u[(i - 1 + N) % n], tu[i % n], tu[(i - 1) % n], ttu[i % n],
                      tu[(i - 1 + N) % n], tu[(i + N) % n])
            for index in range(N):
                ratio = multi_ratio6(*(p.coordinate(index) for p in points))
                if ratio != ProjValue.of(-1, ratio.backend):
                    bad.append({'step': step, 'i': i, 'coordinate': index, 'ratio': ratio})
    return bad


# ---------------------------------------------------------------------------
# dSKP embedding and explicit solution
# ---------------------------------------------------------------------------

def orbit_index(N: int, p: int, q: int, k: int) -> int:
    return ((N - 1) * (p - k) + (N + 1) * q) // 2


def corr_lattice_value(orbit: Orbit, N: int, coordinate: int, p: int, q: int, k: int) -> ProjValue:
    """x(p, q, k) for affine coordinate ``coordinate``."""
    polygon = orbit[k]
    return polygon[orbit_index(N, p, q, k) % len(polygon)].coordinate(coordinate)


def corr_initial_data(orbit: Orbit, N: int, coordinate: int):
    """Weights a_{i,j}: coordinates of v on even cells and of T(v) on odd cells."""
    backend = orbit[0][0].backend
    return lazy_initial_data(lambda i, j: corr_lattice_value(orbit, N, coordinate, i, j, (i + j) % 2),
                             backend=backend, metadata={'kind': 'corrugated', 'N': N, 'coordinate': coordinate})


def corr_target(step: int, index: int):
    """Lattice point of T^step(v)_index."""
    return (step - index, index, step)


def corr_value_via_dskp(orbit: Orbit, N: int, coordinate: int, step: int, index: int) -> ProjValue:
    return value_at(corr_initial_data(orbit, N, coordinate), *corr_target(step, index))


def _explicit_in_chart(points: Sequence[ProjPoint], N: int, step: int, index: int,
                       method: str, max_size: Optional[int]) -> ProjPoint:
    orbit = corr_iterate(points, 1, N)
    if any(p.is_at_infinity or p.is_undefined for polygon in orbit for p in polygon):
        raise ChartError("A weight of the explicit solution is at infinity; apply a projective map "
                         "(chart_safe_map) or pass auto_chart=True")
    coordinates = [explicit_value(corr_initial_data(orbit, N, c), corr_target(step, index),
                                  method=method, max_size=max_size)
                   for c in range(N)]
    return ProjPoint.from_coordinates(coordinates)


def corr_explicit(points: Sequence[ProjPoint], step: int, index: int, N: int = 2, method: str = 'kernel',
                  auto_chart: bool = False, max_size: Optional[int] = None) -> ProjPoint:
    """
    T^step(v)_index from v and T(v) alone, one affine coordinate at a time.

    Raises:
        ValueError: step < 1
        ChartError: a weight is at infinity and ``auto_chart`` is off
    """
    _check_corrugation_order(points, N)
    if step < 1:
        raise ValueError("The explicit solution needs step >= 1")
    try:
        return _explicit_in_chart(points, N, step, index, method, max_size)
    except ChartError:
        if not auto_chart:
            raise
    first, second = corr_iterate(points, 1, N)
    matrix = chart_safe_map([p for p in first + second if not p.is_undefined])
    logger.info("Explicit pentagram solution: changing the affine chart")
    moved = _explicit_in_chart(transform_polygon(points, matrix), N, step, index, method, max_size)
    return moved.transformed(inverse_map(matrix, points[0].backend))


def pentagram_explicit(points: Sequence[ProjPoint], site, method: str = 'kernel',
                       auto_chart: bool = False) -> ProjPoint:
    """f_{i,j} = T^{i+j}(v)_{-j} of the pentagram lattice map, for i + j >= 1."""
    i, j = site
    if i + j < 1:
        raise ValueError("pentagram_explicit needs i + j >= 1")
    return corr_explicit(points, i + j, -j, N=2, method=method, auto_chart=auto_chart)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def make_axis_polygon(m: int, N: int = 2, seed: int = DEFAULT_SEED, backend=EXACT) -> Polygon:
    """
    A closed polygon of m*N vertices whose edge v_k v_{k+1} is parallel to
    coordinate axis k mod N.
    """
    if m < 2:
        raise ValueError("Axis-aligned polygons need m >= 2")
    rng = random.Random(seed)
    while True:
        start = random_values(rng, N, backend, real=True)
        moves = {}
        for axis in range(N):
            head = random_values(rng, m - 1, backend, real=True)
            last = -sum((v.value for v in head), backend.scalar(0))
            moves[axis] = [v.value for v in head] + [last]
        if any(backend.is_zero(moves[axis][-1]) for axis in range(N)):
            continue
        current = [v.value for v in start]
        points = []
        for k in range(m * N):
            points.append(ProjPoint.affine(*current, backend=backend))
            axis = k % N
            current = list(current)
            current[axis] = current[axis] + moves[axis][k // N]
        if len(set(tuple(p.format()) for p in points)) == len(points):
            return points


def make_pentagram_devron(m: int, seed: int = DEFAULT_SEED, backend=EXACT) -> Polygon:
    """A closed 2m-gon whose edges v_i v_{i+1}, i even, are parallel to the x-axis."""
    if m < 3:
        raise ValueError("The Devron pentagram instance needs m >= 3")
    rng = random.Random(seed)
    xs = random_values(rng, 2 * m, backend, real=True)
    ys = random_values(rng, m, backend, real=True)
    return [ProjPoint.affine(xs[k].value, ys[k // 2].value, backend=backend) for k in range(2 * m)]


GENERIC_ATTEMPTS = 100


def is_generic_polygon(points: Sequence[ProjPoint]) -> bool:
    """
    Pairwise distinct values in every coordinate, and no N+1 cyclically
    consecutive vertices in a common hyperplane.
    """
    n = len(points)
    dimension = points[0].dimension
    for index in range(dimension):
        values = [p.coordinate(index) for p in points]
        if any(a == b for k, a in enumerate(values) for b in values[k + 1:]):
            return False
    if n <= dimension:
        return True
    return all(points_rank([points[(k + d) % n] for d in range(dimension + 1)]) == dimension + 1
               for k in range(n))


def make_generic_polygon(n: int, N: int = 2, seed: int = DEFAULT_SEED, backend=EXACT) -> Polygon:
    """Random affine polygon, redrawn until is_generic_polygon holds."""
    rng = random.Random(seed)
    for _ in range(GENERIC_ATTEMPTS):
        polygon = [ProjPoint.affine(*(v.value for v in random_values(rng, N, backend, real=True)), backend=backend)
                   for _ in range(n)]
        if is_generic_polygon(polygon):
            return polygon
    raise ValueError(f"No generic {n}-gon in dimension {N} after {GENERIC_ATTEMPTS} draws")


# ---------------------------------------------------------------------------
# Singularities
# ---------------------------------------------------------------------------

def axis_violations(points: Sequence[ProjPoint], axes: Dict[int, int]) -> List[int]:
    """Edges v_k v_{k+1} not parallel to coordinate axis ``axes[k]`` (keys mod len)."""
    n = len(points)
    bad = []
    for k, axis in axes.items():
        a, b = points[k % n], points[(k + 1) % n]
        for index in range(a.dimension):
            if index != axis and a.coordinate(index) != b.coordinate(index):
                bad.append(k)
                break
    return bad


def constant_polygon(polygon: Sequence[ProjPoint]) -> Optional[ProjPoint]:
    first = polygon[0]
    if first.is_undefined or any(p != first for p in polygon[1:]):
        return None
    return first


def centroid_via_nmat(points: Sequence[ProjPoint], N: int = 2) -> Optional[ProjPoint]:
    """
    T^{m-1}(v) of an axis-aligned polygon from the N-matrix formula.

    The backwards image T^{-1}(v) lies at infinity, so in the inverted chart
    1/pi_l it is a constant zero layer; the data of v sit on the odd cells.
    """
    n = len(points)
    m = n // N
    backend = points[0].backend
    zero = ProjValue.of(0, backend)
    coordinates = []
    for index in range(N):
        def source(p: int, q: int, index=index) -> ProjValue:
            if (p + q) % 2 == 0:
                return zero
            return 1 / points[orbit_index(N, p, q, 1) % n].coordinate(index)

        init = lazy_initial_data(source, backend=backend, metadata={'kind': 'axis', 'd': zero})
        value = None
        for i in range(n):
            try:
                value = nmat_value(init, corr_target(m, i), d=zero)
                break
            except SingularMatrixError:
                continue
        if value is None:
            return None
        coordinates.append(1 / value)
    return ProjPoint.from_coordinates(coordinates)


def check_corr_dodgson(points: Sequence[ProjPoint], N: int = 2) -> CheckReport:
    """
    An mN-closed polygon with edge v_{iN+l} v_{iN+l+1} parallel to axis l:
    T^{m-1}(v) is constant, equal to the center of mass of v.
    """
    points = list(points)
    _check_corrugation_order(points, N)
    n = len(points)
    if n % N:
        raise ValueError(f"The polygon must have a multiple of N = {N} vertices")
    m = n // N
    steps = m - 1
    report = CheckReport(name='pentagram_dodgson' if N == 2 else f'corrugated_dodgson_N{N}',
                         passed=False, steps=steps, predicted_step=steps)
    misaligned = axis_violations(points, {k: k % N for k in range(n)})
    if misaligned:
        report.violations.append({'misaligned_edges': misaligned})
        return report
    expected = center_of_mass(points)
    report.details['center_of_mass'] = expected.format()

    orbit = corr_iterate(points, steps, N)
    for step, polygon in enumerate(orbit):
        if N > 2 and step < steps:
            bad = corrugation_violations(polygon, N)
            if bad:
                report.violations.append({'step': step, 'not_corrugated': bad})
        if constant_polygon(polygon) is not None and report.observed_step is None:
            report.observed_step = step
    breakdown = first_undefined_step(orbit)
    if breakdown is not None:
        report.violations.append({'undefined_at_step': breakdown})
    final = constant_polygon(orbit[-1])
    if final is None:
        report.violations.append({'step': steps, 'points': [p.format() for p in orbit[-1]]})
    elif final != expected:
        report.violations.append({'center_of_mass': expected.format(), 'observed': final.format()})
    else:
        report.details['point'] = final.format()
    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"Corrugated Dodgson N={N} m={m}: {'pass' if report.passed else 'FAIL'}")
    return report


def check_pentagram_dodgson(points: Sequence[ProjPoint]) -> CheckReport:
    """Pentagram Dodgson check, with the N-matrix value recorded next to the centroid."""
    report = check_corr_dodgson(points, 2)
    try:
        via_nmat = centroid_via_nmat(points, 2)
    except ChartError:
        via_nmat = None
    if via_nmat is not None:
        report.details['nmat_point'] = via_nmat.format()
        report.details['nmat_agrees'] = via_nmat == center_of_mass(points)
    return report


def devron_pattern(polygon: Sequence[ProjPoint]) -> Dict[str, bool]:
    """Which coincidences the last defined polygon shows: paired neighbours and collinearity."""
    n = len(polygon)
    return {
        'pairs_even': all(polygon[i] == polygon[(i + 1) % n] for i in range(0, n, 2)),
        'pairs_odd': all(polygon[i] == polygon[(i + 1) % n] for i in range(1, n, 2)),
        'collinear': are_collinear(polygon),
    }


def check_pentagram_devron(points: Sequence[ProjPoint]) -> CheckReport:
    """
    A 2m-closed polygon with every even edge parallel to the x-axis:
    T^{2m-4}(v) exists but T^{2m-3}(v) is not defined.

    The coincidence pattern of T^{2m-4}(v) is recorded but not asserted.
    """
    points = list(points)
    n = len(points)
    if n % 2 or n < 6:
        raise ValueError("The Devron check needs a closed polygon with 2m >= 6 vertices")
    m = n // 2
    steps = 2 * m - 4
    report = CheckReport(name='pentagram_devron', passed=False, steps=steps, predicted_step=steps + 1)
    report.details['aligned'] = not axis_violations(points, {k: 0 for k in range(0, n, 2)})
    orbit = corr_iterate(points, steps + 1, 2)
    report.observed_step = first_undefined_step(orbit)
    if report.observed_step is not None and report.observed_step <= steps:
        report.violations.append({'early_breakdown': report.observed_step})
    if report.observed_step is None:
        report.violations.append({'defined_through': steps + 1})
    else:
        report.details['pattern'] = devron_pattern(orbit[steps])
    report.passed = report.details['aligned'] and not report.violations
    logger.info(f"Pentagram Devron m={m}: {'pass' if report.passed else 'FAIL'} "
                f"breakdown at step {report.observed_step}")
    return report
