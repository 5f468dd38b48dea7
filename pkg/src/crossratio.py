"""
Integrable cross-ratio maps, Baecklund pairs and the dual map

A map z: Z^2 -> CP^1 is an integrable cross-ratio map for edge labels
alpha, beta when cr(z_{i,j}, z_{i+1,j}, z_{i+1,j+1}, z_{i,j+1}) = alpha_i / beta_j
on every quad. Maps are stored in rotated coordinates, z~_{i-j,i+j} = z_{i,j},
so one propagation step fills the next row.

A Baecklund partner w is transported along edges by the Moebius maps
M^1 (horizontal) and M^2 (vertical). The pair embeds into dSKP: on the
staircase i + j in {0, 1} the initial value a_{i,j} is z on the diagonals
[i-j]_4 in {0, 3} and w on the diagonals [i-j]_4 in {1, 2}.
"""

import logging
from collections import deque
from dataclasses import dataclass, field as dataclass_field
from math import gcd
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from config import LOG_LEVEL, LOG_FORMAT
from dimer import build_aztec, cylinder_kernel, explicit_value
from dskp import value_at
from field import (
    EXACT, ConsistencyError, IrrationalFixedPointError, Matrix2, ProjValue, all_equal, cross_ratio,
    format_value, harmonic_mean, mobius_apply, mobius_compose, mobius_fixed_points, multi_ratio6,
    solve_cross_ratio
)
from planar import LatticeMap, const, from_rotated, lazy_initial_data, to_rotated
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
LabelSource = Union[Sequence, Mapping[int, object], Callable[[int], object]]


# ---------------------------------------------------------------------------
# Edge labels
# ---------------------------------------------------------------------------

class EdgeLabels:
    """
    Horizontal labels alpha_i, vertical labels beta_j and the Baecklund
    parameter gamma.

    A sequence is read cyclically, so its length is a period; mappings and
    callables give labels on any index set.
    """

    def __init__(self, alpha: LabelSource, beta: LabelSource, gamma=1, backend=EXACT):
        self.backend = backend
        self._alpha = self._reader(alpha, 'alpha')
        self._beta = self._reader(beta, 'beta')
        self.gamma = ProjValue.of(gamma, backend)
        if self.gamma.is_zero() or not self.gamma.is_finite:
            raise ValueError("gamma must be a nonzero finite value")
        lengths = [len(s) for s in (alpha, beta) if isinstance(s, (list, tuple))]
        self.period = None
        if len(lengths) == 2:
            self.period = lengths[0] * lengths[1] // gcd(*lengths)

    def _reader(self, source: LabelSource, name: str) -> Callable[[int], ProjValue]:
        if isinstance(source, (list, tuple)):
            values = [ProjValue.of(v, self.backend) for v in source]
            if not values or any(v.is_zero() or not v.is_finite for v in values):
                raise ValueError(f"{name} labels must be nonzero and finite")
            return lambda n: values[n % len(values)]
        if isinstance(source, Mapping):
            values = {int(k): ProjValue.of(v, self.backend) for k, v in source.items()}
            if any(v.is_zero() for v in values.values()):
                raise ValueError(f"{name} labels must be nonzero")
            return lambda n: values[n]
        return lambda n: ProjValue.of(source(n), self.backend)

    @staticmethod
    def holomorphic(backend=EXACT) -> 'EdgeLabels':
        """alpha = -1, beta = 1, gamma = 1."""
        return EdgeLabels([-1], [1], gamma=1, backend=backend)

    def alpha(self, i: int) -> ProjValue:
        return self._alpha(i)

    def beta(self, j: int) -> ProjValue:
        return self._beta(j)

    def ratio(self, i: int, j: int) -> ProjValue:
        return self.alpha(i) / self.beta(j)

    def is_holomorphic(self, indices: Sequence[int] = range(-4, 5)) -> bool:
        minus_one = ProjValue.of(-1, self.backend)
        one = ProjValue.of(1, self.backend)
        return (self.gamma == one and all(self.alpha(n) == minus_one for n in indices)
                and all(self.beta(n) == one for n in indices))


# ---------------------------------------------------------------------------
# Rotated rows and the propagation
# ---------------------------------------------------------------------------

def unrotated(zt: LatticeMap, i: int, j: int) -> ProjValue:
    """z_{i,j} of a map stored in rotated coordinates."""
    return zt.value(*to_rotated(i, j))


def rotated_rows(row0: Sequence, row1: Sequence, periodic: bool = True, backend=EXACT,
                 name: str = 'z') -> LatticeMap:
    """
    Rotated map from z~_{2l,0} = row0[l] and z~_{2l+1,1} = row1[l].

    Periodic rows of length m make the map m-closed: z~_{i+2m,j} = z~_{i,j}.
    """
    if periodic:
        if len(row0) != len(row1):
            raise ValueError("Periodic rows need the same length")
        zt = LatticeMap.row_periodic(2 * len(row0), rotated=True, backend=backend, name=name)
    else:
        zt = LatticeMap(rotated=True, backend=backend, name=name)
    for n, v in enumerate(row0):
        zt.set(2 * n, 0, v)
    for n, v in enumerate(row1):
        zt.set(2 * n + 1, 1, v)
    return zt


def _next_sites(zt: LatticeMap, row: int) -> List[int]:
    """Sites of row ``row`` whose three dependencies are present."""
    if zt.period is not None:
        return zt.sites(row)
    candidates = sorted({i + d for i in zt.sites(row - 1) for d in (-1, 1)})
    return [i for i in candidates if (i, row - 2) in zt and (i - 1, row - 1) in zt and (i + 1, row - 1) in zt]


def icr_step(zt: LatticeMap, labels: EdgeLabels, row: int) -> Dict[int, ProjValue]:
    """
    Compute and store row ``row`` of z~ from rows row-2 and row-1.

    The site (I, row) closes the quad with bottom z_{a,b}, (a, b) the
    unrotated coordinates of (I, row-2), whose cross-ratio is alpha_a/beta_b.
    """
    values = {}
    for i in _next_sites(zt, row):
        a, b = from_rotated(i, row - 2)
        bottom = zt.value(i, row - 2)
        east = zt.value(i + 1, row - 1)
        north = zt.value(i - 1, row - 1)
        values[i] = solve_cross_ratio(bottom, east, north, labels.ratio(a, b))
    for i, v in values.items():
        zt.set(i, row, v)
    undefined = [i for i, v in values.items() if v.is_undefined]
    if undefined:
        logger.debug(f"{zt.name} row {row}: undefined at {undefined}")
    return values


def icr_iterate(zt: LatticeMap, labels: EdgeLabels, steps: int) -> LatticeMap:
    """Apply ``steps`` propagation steps after the highest stored row."""
    top = max(zt.rows())
    for row in range(top + 1, top + 1 + steps):
        icr_step(zt, labels, row)
    return zt


def _quad_sites(zt: LatticeMap) -> List[Cell]:
    """Unrotated bottom corners (a, b) of complete quads."""
    sites = []
    for (i, j), _ in zt.items():
        if (i, j + 2) in zt and (i + 1, j + 1) in zt and (i - 1, j + 1) in zt:
            sites.append(from_rotated(i, j))
    return sites


def quad_cross_ratios(zt: LatticeMap, labels: EdgeLabels) -> List[Dict]:
    """Quads whose cross-ratio differs from alpha_a/beta_b."""
    bad = []
    for (a, b) in _quad_sites(zt):
        ratio = cross_ratio(unrotated(zt, a, b), unrotated(zt, a + 1, b),
                            unrotated(zt, a + 1, b + 1), unrotated(zt, a, b + 1))
        if ratio != labels.ratio(a, b):
            bad.append({'quad': (a, b), 'cross_ratio': ratio, 'expected': labels.ratio(a, b)})
    return bad


# ---------------------------------------------------------------------------
# Moebius transport
# ---------------------------------------------------------------------------

def _side_matrix(z: ProjValue, z_next: ProjValue, label: ProjValue, gamma: ProjValue) -> Matrix2:
    if not (z.is_finite and z_next.is_finite):
        raise ValueError("Moebius transport needs finite z values")
    if label == gamma:
        raise ValueError("A label equal to gamma makes the transport degenerate")
    x, y, lab, gam = z.value, z_next.value, label.value, gamma.value
    return ((gam * x + (lab - gam) * y, -lab * x * y), (lab, gam * (x - y) - lab * x))


def mobius_m1(z_here: ProjValue, z_east: ProjValue, alpha: ProjValue, gamma: ProjValue) -> Matrix2:
    """w_{i,j} -> w_{i+1,j}, from cr(z_{i,j}, z_{i+1,j}, w_{i+1,j}, w_{i,j}) = alpha_i / gamma."""
    return _side_matrix(z_here, z_east, alpha, gamma)


def mobius_m2(z_here: ProjValue, z_north: ProjValue, beta: ProjValue, gamma: ProjValue) -> Matrix2:
    """w_{i,j} -> w_{i,j+1}, from cr(z_{i,j}, z_{i,j+1}, w_{i,j+1}, w_{i,j}) = beta_j / gamma."""
    return _side_matrix(z_here, z_north, beta, gamma)


def mobius_inverse(matrix: Matrix2) -> Matrix2:
    (a, b), (c, d) = matrix
    return ((d, -b), (-c, a))


def proportional(first: Matrix2, second: Matrix2, backend=EXACT) -> bool:
    """Both matrices define the same Moebius map."""
    u = [x for row in first for x in row]
    v = [x for row in second for x in row]
    scale = max(1.0, *(abs(complex(backend.to_complex(x))) for x in u + v)) ** 2
    for k in range(4):
        for n in range(k + 1, 4):
            if not backend.is_zero(u[k] * v[n] - u[n] * v[k], scale):
                return False
    return True


# ---------------------------------------------------------------------------
# Baecklund pairs
# ---------------------------------------------------------------------------

@dataclass
class BacklundPair:
    """Two integrable cross-ratio maps z, w in rotated coordinates, with shared labels."""

    z: LatticeMap
    w: LatticeMap
    labels: EdgeLabels
    metadata: Dict = dataclass_field(default_factory=dict)

    def z_at(self, i: int, j: int) -> ProjValue:
        return unrotated(self.z, i, j)

    def w_at(self, i: int, j: int) -> ProjValue:
        return unrotated(self.w, i, j)

    def _sites(self) -> List[Cell]:
        return [from_rotated(*cell) for cell, _ in self.w.items() if cell in self.z]

    def _has(self, i: int, j: int) -> bool:
        cell = to_rotated(i, j)
        return cell in self.z and cell in self.w

    def side_violations(self) -> List[Dict]:
        """Edges where cr(z, z', w', w) differs from alpha/gamma or beta/gamma."""
        gamma = self.labels.gamma
        bad = []
        for (i, j) in self._sites():
            for (di, dj), label in (((1, 0), self.labels.alpha(i)), ((0, 1), self.labels.beta(j))):
                if not self._has(i + di, j + dj):
                    continue
                ratio = cross_ratio(self.z_at(i, j), self.z_at(i + di, j + dj),
                                    self.w_at(i + di, j + dj), self.w_at(i, j))
                if ratio != label / gamma:
                    bad.append({'edge': ((i, j), (i + di, j + dj)), 'cross_ratio': ratio})
        return bad

    def face_violations(self) -> List[Dict]:
        return quad_cross_ratios(self.z, self.labels) + quad_cross_ratios(self.w, self.labels)

    def relation_violations(self) -> List[Cell]:
        """
        The two six-point relations of every elementary cube:
        (z, z_E, w_E, w_NE, w_N, z_N) and (w, w_E, z_E, z_NE, z_N, w_N) give -1.
        """
        bad = []
        for (i, j) in self._sites():
            corners = [(i + 1, j), (i, j + 1), (i + 1, j + 1)]
            if not all(self._has(*c) for c in corners):
                continue
            first = multi_ratio6(self.z_at(i, j), self.z_at(i + 1, j), self.w_at(i + 1, j),
                                 self.w_at(i + 1, j + 1), self.w_at(i, j + 1), self.z_at(i, j + 1))
            second = multi_ratio6(self.w_at(i, j), self.w_at(i + 1, j), self.z_at(i + 1, j),
                                  self.z_at(i + 1, j + 1), self.z_at(i, j + 1), self.w_at(i, j + 1))
            if first != const(-1, first) or second != const(-1, second):
                bad.append((i, j))
        return bad

    def initial_value(self, i: int, j: int) -> ProjValue:
        """a_{i,j} of the dSKP embedding."""
        h = (i + j) % 2
        a, b = (i + j + h) // 2, (h - i - j) // 2
        return self.z_at(a, b) if (i - j + h) % 4 == 0 else self.w_at(a, b)

    def initial_data(self):
        return lazy_initial_data(self.initial_value, backend=self.z.backend, metadata={'kind': 'backlund'})

    @staticmethod
    def z_target(i: int, j: int) -> Tuple[int, int, int]:
        return (j, i - 2 * j, i + j)

    @staticmethod
    def w_target(i: int, j: int) -> Tuple[int, int, int]:
        return (j + 1, i - 2 * j - 1, i + j)

    def value_via_dskp(self, which: str, i: int, j: int) -> ProjValue:
        """z_{i,j} or w_{i,j} by propagating the embedded initial data."""
        target = self.z_target(i, j) if which == 'z' else self.w_target(i, j)
        return value_at(self.initial_data(), *target)


def _transport(z_at: Callable[[int, int], ProjValue], labels: EdgeLabels,
               start: Cell, end: Cell) -> Matrix2:
    """Matrix carrying w at ``start`` to w at the neighbouring site ``end``."""
    (i, j), (k, n) = start, end
    gamma = labels.gamma
    if (k, n) == (i + 1, j):
        return mobius_m1(z_at(i, j), z_at(k, n), labels.alpha(i), gamma)
    if (k, n) == (i - 1, j):
        return mobius_inverse(mobius_m1(z_at(k, n), z_at(i, j), labels.alpha(k), gamma))
    if (k, n) == (i, j + 1):
        return mobius_m2(z_at(i, j), z_at(k, n), labels.beta(j), gamma)
    if (k, n) == (i, j - 1):
        return mobius_inverse(mobius_m2(z_at(k, n), z_at(i, j), labels.beta(n), gamma))
    raise ValueError(f"{start} and {end} are not neighbours")


def backlund_extend(zt: LatticeMap, labels: EdgeLabels, seed_site: Cell, seed_value,
                    window: Optional[range] = None) -> BacklundPair:
    """
    Extend a seed value w_{seed_site} to a partner of z on its whole window.

    Periodic z is first cut to the rotated columns ``window``. Compatibility
    of M^1 and M^2 is checked on every elementary square.

    Raises:
        ConsistencyError: the transports around a square disagree
        ValueError: the seed coincides with z at its site
    """
    if zt.period is not None:
        window = window if window is not None else range(-zt.period, 2 * zt.period + 1)
        zt = zt.materialize(window, zt.rows())
    seed_value = ProjValue.of(seed_value, zt.backend)
    if unrotated(zt, *seed_site) == seed_value:
        raise ValueError("The seed must differ from z at its site")
    sites = {from_rotated(*cell) for cell, v in zt.items() if v.is_finite}
    if tuple(seed_site) not in sites:
        raise ValueError(f"Seed site {seed_site} is outside the window of z")
    z_at = lambda i, j: unrotated(zt, i, j)

    for (i, j) in sorted(sites):
        if {(i + 1, j), (i, j + 1), (i + 1, j + 1)} <= sites:
            around_east = mobius_compose(_transport(z_at, labels, (i + 1, j), (i + 1, j + 1)),
                                         _transport(z_at, labels, (i, j), (i + 1, j)))
            around_north = mobius_compose(_transport(z_at, labels, (i, j + 1), (i + 1, j + 1)),
                                          _transport(z_at, labels, (i, j), (i, j + 1)))
            if not proportional(around_east, around_north, zt.backend):
                logger.error(f"Baecklund transports disagree on the square at {(i, j)}")
                raise ConsistencyError(f"M^1 and M^2 do not commute on the square at {(i, j)}")

    w = LatticeMap(rotated=True, backend=zt.backend, name='w')
    w.set(*to_rotated(*seed_site), seed_value)
    queue = deque([tuple(seed_site)])
    seen = {tuple(seed_site)}
    while queue:
        here = queue.popleft()
        current = unrotated(w, *here)
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            there = (here[0] + di, here[1] + dj)
            if there in seen or there not in sites:
                continue
            seen.add(there)
            w.set(*to_rotated(*there), mobius_apply(_transport(z_at, labels, here, there), current))
            queue.append(there)
    logger.debug(f"Extended Baecklund partner to {len(w)} sites")
    return BacklundPair(z=zt, w=w, labels=labels, metadata={'seed': seed_site})


def holomorphic_partner(zt: LatticeMap) -> LatticeMap:
    """w_{i,j} = z_{i,j+1}, i.e. w~_{I,J} = z~_{I-1,J+1}."""
    if zt.period is not None:
        w = LatticeMap.row_periodic(zt.period, rotated=True, backend=zt.backend, name='w')
    else:
        w = LatticeMap(rotated=True, backend=zt.backend, name='w')
    for (i, j), v in zt.items():
        if j >= 1:
            w.set(i + 1, j - 1, v)
    return w


def closing_path(m: int) -> List[Cell]:
    """Unrotated sites (0,0), (1,0), (1,-1), (2,-1), ..., (m,-m)."""
    path = [(0, 0)]
    for n in range(m):
        path.append((n + 1, -n))
        path.append((n + 1, -n - 1))
    return path


def backlund_closed(zt: LatticeMap, labels: EdgeLabels, method: str = 'auto') -> BacklundPair:
    """
    A partner of the m-closed map z that is itself m-closed.

    'auto' uses the shift w_{i,j} = z_{i,j+1} for holomorphic labels and a
    fixed point of the monodromy around one period otherwise.

    Raises:
        IrrationalFixedPointError: exact backend and the monodromy has no
            Gaussian-rational fixed point
        ConsistencyError: the closed partner fails the side relations
    """
    period = zt.period
    if period is None or period % 2:
        raise ValueError("backlund_closed needs a map with rotated period 2m")
    m = period // 2
    if method not in ('auto', 'shift', 'fixed_point'):
        raise ValueError(f"Unknown method: {method}")
    if method == 'shift' or (method == 'auto' and labels.is_holomorphic()):
        pair = BacklundPair(z=zt, w=holomorphic_partner(zt), labels=labels, metadata={'method': 'shift'})
        logger.info(f"Closed Baecklund partner m={m} by the shift")
        return pair

    z_at = lambda i, j: unrotated(zt, i, j)
    path = closing_path(m)
    monodromy: Matrix2 = ((zt.backend.scalar(1), zt.backend.scalar(0)), (zt.backend.scalar(0), zt.backend.scalar(1)))
    for start, end in zip(path, path[1:]):
        monodromy = mobius_compose(_transport(z_at, labels, start, end), monodromy)
    try:
        fixed = mobius_fixed_points(monodromy)
    except IrrationalFixedPointError as e:
        logger.error(f"Closed partner m={m} needs an irrational fixed point: {e}")
        raise
    start_z = z_at(0, 0)
    candidates = [p for p in fixed.points if not p.is_undefined and p != start_z]
    if fixed.degenerate:
        candidates = [start_z + const(1, start_z)]
    if not candidates:
        raise ConsistencyError("The monodromy has no usable fixed point")
    seed = candidates[0]

    w = LatticeMap.row_periodic(period, rotated=True, backend=zt.backend, name='w')
    current = seed
    w.set(0, 0, current)
    for start, end in zip(path[:-1], path[1:-1]):
        current = mobius_apply(_transport(z_at, labels, start, end), current)
        w.set(*to_rotated(*end), current)
    top = max(zt.rows())
    for row in range(2, top + 1):
        icr_step(w, labels, row)
    pair = BacklundPair(z=zt, w=w, labels=labels, metadata={'method': 'fixed_point', 'seed': seed})
    window = pair_window(pair)
    if window.side_violations():
        logger.error(f"Closed partner m={m} fails the side relations")
        raise ConsistencyError("Closed Baecklund partner does not satisfy the side relations")
    logger.info(f"Closed Baecklund partner m={m} from fixed point {format_value(seed)}")
    return pair


def pair_window(pair: BacklundPair, columns: Optional[range] = None) -> BacklundPair:
    """Finite copy of a periodic pair, for scans across the period boundary."""
    period = pair.z.period
    if period is None:
        return pair
    columns = columns if columns is not None else range(-2, period + 3)
    rows = [r for r in pair.z.rows() if r in pair.w.rows()]
    return BacklundPair(z=pair.z.materialize(columns, rows), w=pair.w.materialize(columns, rows),
                        labels=pair.labels, metadata=dict(pair.metadata))


def icr_explicit(pair: BacklundPair, site: Cell, method: str = 'kernel',
                 max_size: Optional[int] = None) -> Dict[str, ProjValue]:
    """z_{i,j} and w_{i,j} through the diamond A_{i+j-1} on the embedded initial data."""
    i, j = site
    if i + j < 1:
        raise ValueError("icr_explicit needs i + j >= 1")
    init = pair.initial_data()
    return {
        'z': explicit_value(init, pair.z_target(i, j), method=method, max_size=max_size),
        'w': explicit_value(init, pair.w_target(i, j), method=method, max_size=max_size),
    }


# ---------------------------------------------------------------------------
# The dual map
# ---------------------------------------------------------------------------

@dataclass
class DualMap:
    values: LatticeMap
    closedness_violations: List[Cell]
    three_leg_violations: List[Cell]
    monodromy: Optional[ProjValue] = None
    monodromy_samples: int = 0


def dual_form(zt: LatticeMap, labels: EdgeLabels, start: Cell, end: Cell) -> ProjValue:
    """dz* on an edge, oriented from ``start`` to ``end``."""
    (i, j), (k, n) = start, end
    if (k, n) == (i + 1, j):
        return labels.alpha(i) / (unrotated(zt, i, j) - unrotated(zt, k, n))
    if (k, n) == (i, j + 1):
        return labels.beta(j) / (unrotated(zt, i, j) - unrotated(zt, k, n))
    if (k, n) in ((i - 1, j), (i, j - 1)):
        return -dual_form(zt, labels, end, start)
    raise ValueError(f"{start} and {end} are not neighbours")


def dual_map(zt: LatticeMap, labels: EdgeLabels, basepoint: Cell = (0, 0),
             window: Optional[range] = None) -> DualMap:
    """
    Integrate the dual form from z*_{basepoint} = 0.

    For an m-closed z the additive monodromy z*_{i+m,j-m} - z*_{i,j} is
    computed at every site where both ends are known.

    Raises:
        ConsistencyError: the form is not closed on some quad, or the
            monodromy depends on the site
    """
    period = zt.period
    source = zt
    if period is not None:
        window = window if window is not None else range(-1, 2 * period + 2)
        source = zt.materialize(window, zt.rows())
    sites = {from_rotated(*cell) for cell, _ in source.items()}
    if tuple(basepoint) not in sites:
        raise ValueError(f"Basepoint {basepoint} is outside the window")
    star = LatticeMap(rotated=True, backend=zt.backend, name='z*')
    star.set(*to_rotated(*basepoint), ProjValue.of(0, zt.backend))
    queue = deque([tuple(basepoint)])
    while queue:
        here = queue.popleft()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            there = (here[0] + di, here[1] + dj)
            if there not in sites or to_rotated(*there) in star:
                continue
            star.set(*to_rotated(*there), unrotated(star, *here) + dual_form(source, labels, here, there))
            queue.append(there)

    closedness, three_leg = [], []
    for (i, j) in sorted(sites):
        if not {(i + 1, j), (i, j + 1), (i + 1, j + 1)} <= sites:
            continue
        legs = [dual_form(source, labels, (i, j), (i + 1, j)), dual_form(source, labels, (i + 1, j), (i + 1, j + 1)),
                dual_form(source, labels, (i + 1, j + 1), (i, j + 1)), dual_form(source, labels, (i, j + 1), (i, j))]
        if all(leg.is_finite for leg in legs):
            total = legs[0] + legs[1] + legs[2] + legs[3]
            if not total.is_zero():
                closedness.append((i, j))
        z, z_east, z_north, z_top = (unrotated(source, *c) for c in ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)))
        left = labels.alpha(i) / (z_east - z) + labels.beta(j) / (z - z_north)
        right = (labels.alpha(i) - labels.beta(j)) / (z_top - z)
        if left.is_finite and right.is_finite and left != right:
            three_leg.append((i, j))
    if closedness:
        logger.error(f"Dual form is not closed on {len(closedness)} quads")
        raise ConsistencyError(f"Dual form is not closed on quads {closedness[:5]}")

    result = DualMap(values=star, closedness_violations=closedness, three_leg_violations=three_leg)
    if period is not None:
        m = period // 2
        samples = []
        for (i, j) in sorted(sites):
            if (i + m, j - m) in sites:
                difference = unrotated(star, i + m, j - m) - unrotated(star, i, j)
                if difference.is_finite:
                    samples.append(difference)
        if samples:
            if not all_equal(samples):
                logger.error("Dual map monodromy depends on the site")
                raise ConsistencyError("Dual map monodromy depends on the site")
            result.monodromy = samples[0]
            result.monodromy_samples = len(samples)
    return result


# ---------------------------------------------------------------------------
# The (m,2)-Devron singularity
# ---------------------------------------------------------------------------

def singular_rows(values: Sequence, backend=EXACT) -> LatticeMap:
    """m-closed rows with z~_{2l,0} = 0 and z~_{2l+1,1} = values[l]."""
    return rotated_rows([0] * len(values), values, backend=backend)


def predicted_singular_value(values: Sequence[ProjValue], labels: EdgeLabels) -> ProjValue:
    """sum(alpha_l - beta_l) / sum((alpha_l - beta_{-l-1}) / z~_{2l+1,1})."""
    m = len(values)
    numerator = const(0, values[0])
    denominator = const(0, values[0])
    for n in range(m):
        numerator = numerator + labels.alpha(n) - labels.beta(n)
        denominator = denominator + (labels.alpha(n) - labels.beta(-n - 1)) / values[n]
    return numerator / denominator


def cylinder_report(pair: BacklundPair, m: int) -> Dict:
    """Kernel of the operator on the cylinder of width 2m-3 around column 2m."""
    result = cylinder_kernel(build_aztec((m, -m), 2 * m - 3), pair.initial_value, m, backend=pair.z.backend)
    return {'nullity': result.nullity, 'zero_columns': result.zero_columns,
            'zero_column_vectors_ok': result.zero_column_vectors_ok, 'faces': len(result.faces)}


def check_icr_singularity(values: Sequence, labels: EdgeLabels, backend=EXACT,
                          with_cylinder: bool = True) -> CheckReport:
    """
    m-closed data with z~_0 = 0: after 2m-2 steps the row z~_{2m-1} is
    constant. Holomorphic labels with m even may collapse earlier; that is
    recorded as a premature singularity in the details. Its value is compared with the closed form and with
    -sum(alpha_l - beta_l) / M, M the monodromy of the dual map.
    """
    values = [ProjValue.of(v, backend) for v in values]
    m = len(values)
    steps = 2 * m - 2
    target = 2 * m - 1
    report = CheckReport(name='icr_singularity', passed=False, steps=steps, predicted_step=steps)
    zt = singular_rows(values, backend)
    expected = predicted_singular_value(values, labels)
    degenerate = all(labels.alpha(n) == labels.beta(-n - 1) for n in range(m))
    report.details['predicted'] = expected
    report.details['degenerate_labels'] = degenerate

    first_undefined = None
    for row in range(2, target + 1):
        icr_step(zt, labels, row)
        if first_undefined is None and any(v.is_undefined for v in zt.row(row).values()):
            first_undefined = row
        if report.observed_step is None and zt.constant_row(row) is not None:
            report.observed_step = row - 1
    report.details['first_undefined_row'] = first_undefined

    if degenerate:
        report.passed = expected.is_undefined and first_undefined is not None
        if not report.passed:
            report.violations.append('degenerate labels should make the propagation undefined')
        logger.info(f"ICR singularity m={m} (degenerate labels): {'pass' if report.passed else 'FAIL'}")
        return report

    final = zt.constant_row(target)
    report.value = final
    if final is None:
        report.violations.append({'row': target, 'values': list(zt.row(target).values())})
    elif final != expected:
        report.violations.append({'predicted': expected, 'observed': final})
    if first_undefined is not None and first_undefined < target:
        report.violations.append({'early_undefined_row': first_undefined})

    total = const(0, values[0])
    for n in range(m):
        total = total + labels.alpha(n) - labels.beta(n)
    dual = dual_map(singular_rows(values, backend), labels)
    report.details['monodromy'] = dual.monodromy
    if dual.monodromy is not None:
        via_monodromy = -total / dual.monodromy
        report.details['value_via_monodromy'] = via_monodromy
        if final is not None and via_monodromy != final:
            report.violations.append({'monodromy_value': via_monodromy, 'observed': final})
    if dual.three_leg_violations:
        report.violations.append({'three_leg_violations': dual.three_leg_violations[:5]})

    if labels.is_holomorphic():
        report.details['harmonic_mean'] = harmonic_mean(values)

    if with_cylinder and m >= 2:
        try:
            base = singular_rows(values, backend)
            icr_step(base, labels, 2)
            pair = backlund_closed(base, labels)
            cylinder = cylinder_report(pair, m)
            report.details['cylinder'] = cylinder
            if cylinder['nullity'] != m:
                report.violations.append({'cylinder_nullity': cylinder['nullity'], 'expected': m})
            if not cylinder['zero_column_vectors_ok']:
                report.violations.append('zero columns of the cylinder operator are not in its kernel')
        except IrrationalFixedPointError:
            report.details['cylinder'] = 'skipped: closed partner needs an irrational fixed point'
        except ConsistencyError as e:
            report.details['cylinder'] = f'skipped: {e}'

    premature = report.observed_step is not None and report.observed_step < steps
    report.details['premature'] = premature
    if premature:
        logger.info(f"ICR row became constant after {report.observed_step} of {steps} steps")
    report.passed = not report.violations and report.observed_step is not None
    logger.info(f"ICR singularity m={m}: {'pass' if report.passed else 'FAIL'} value={report.value}")
    return report
