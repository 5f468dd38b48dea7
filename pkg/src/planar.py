"""
Shared helpers for the planar systems

Lattice maps (finite windows or values modulo a period lattice), the rotated
coordinates z~_{i-j, i+j} = z_{i,j}, and exact constructions with points,
lines and circles. Every construction uses complex conjugation instead of
square roots, so Gaussian-rational input stays Gaussian-rational.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple

import pandas as pd

from config import LOG_LEVEL, LOG_FORMAT
from dskp import InitialData, PeriodLattice, WindowTooSmallError
from field import EXACT, GaussianRational, ProjValue, all_equal, conj, format_value

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


# ---------------------------------------------------------------------------
# Rotated coordinates
# ---------------------------------------------------------------------------

def to_rotated(i: int, j: int) -> Cell:
    """(i, j) -> (i - j, i + j)."""
    return (i - j, i + j)


def from_rotated(u: int, v: int) -> Cell:
    """(u, v) -> ((u + v) / 2, (v - u) / 2); u + v must be even."""
    if (u + v) % 2:
        raise ValueError(f"({u}, {v}) is not a rotated lattice site")
    return ((u + v) // 2, (v - u) // 2)


# ---------------------------------------------------------------------------
# Lattice maps
# ---------------------------------------------------------------------------

class LatticeMap:
    """
    Values of a map Z^2 -> CP^1.

    Values are stored under the canonical representative of their class when
    a period lattice is given. A ``rotated`` map only lives on the sites with
    i + j even.
    """

    def __init__(self, values: Optional[Mapping[Cell, ProjValue]] = None,
                 lattice: Optional[PeriodLattice] = None, rotated: bool = False,
                 backend=EXACT, name: str = 'z'):
        self.lattice = lattice
        self.rotated = rotated
        self.backend = backend
        self.name = name
        self._values: Dict[Cell, ProjValue] = {}
        for (i, j), v in (values or {}).items():
            self.set(i, j, v)

    @staticmethod
    def row_periodic(period: int, rotated: bool = False, backend=EXACT, name: str = 'z') -> 'LatticeMap':
        """Map with f(i + period, j) = f(i, j)."""
        if period < 1:
            raise ValueError("period must be positive")
        return LatticeMap(lattice=PeriodLattice([(period, 0)]), rotated=rotated, backend=backend, name=name)

    @property
    def period(self) -> Optional[int]:
        """Horizontal period of a row-periodic map."""
        if self.lattice is None or len(self.lattice.generators) != 1:
            return None
        a, b = self.lattice.generators[0]
        return abs(a) if b == 0 else None

    def key(self, i: int, j: int) -> Cell:
        if self.rotated and (i + j) % 2:
            raise ValueError(f"({i}, {j}) is not a site of the rotated map {self.name}")
        return self.lattice.reduce(i, j) if self.lattice is not None else (i, j)

    def __contains__(self, cell) -> bool:
        i, j = cell
        if self.rotated and (i + j) % 2:
            return False
        return self.key(i, j) in self._values

    def get(self, i: int, j: int, default: Optional[ProjValue] = None) -> Optional[ProjValue]:
        if (i, j) not in self:
            return default
        return self._values[self.key(i, j)]

    def value(self, i: int, j: int) -> ProjValue:
        if (i, j) not in self:
            raise WindowTooSmallError([(i, j)])
        return self._values[self.key(i, j)]

    def __getitem__(self, cell: Cell) -> ProjValue:
        return self.value(*cell)

    def set(self, i: int, j: int, value) -> None:
        self._values[self.key(i, j)] = ProjValue.of(value, self.backend)

    def discard(self, i: int, j: int) -> None:
        self._values.pop(self.key(i, j), None)

    def items(self) -> List[Tuple[Cell, ProjValue]]:
        return sorted(self._values.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def __len__(self):
        return len(self._values)

    def rows(self) -> List[int]:
        return sorted({j for (_, j) in self._values})

    def row(self, j: int) -> Dict[int, ProjValue]:
        return {i: v for (i, jj), v in sorted(self._values.items()) if jj == j}

    def sites(self, j: int) -> List[int]:
        """Indices i to compute in row j: one period, or the stored window."""
        period = self.period
        if period is not None:
            return [i for i in range(period) if not self.rotated or (i + j) % 2 == 0]
        return sorted(i for (i, jj) in self._values if jj == j)

    def copy(self, name: Optional[str] = None) -> 'LatticeMap':
        other = LatticeMap(lattice=self.lattice, rotated=self.rotated, backend=self.backend,
                           name=name or self.name)
        other._values = dict(self._values)
        return other

    def materialize(self, i_range: Iterable[int], j_range: Iterable[int]) -> 'LatticeMap':
        """Finite copy over a window, skipping missing or off-parity sites."""
        j_range = list(j_range)
        values = {(i, j): self.value(i, j) for i in i_range for j in j_range if (i, j) in self}
        return LatticeMap(values, rotated=self.rotated, backend=self.backend, name=self.name)

    def constant_row(self, j: int) -> Optional[ProjValue]:
        """The common value of row j when every site is defined and equal."""
        values = [self.get(i, j) for i in self.sites(j)]
        if not values or any(v is None or v.is_undefined for v in values):
            return None
        return values[0] if all_equal(values) else None

    def undefined_cells(self) -> List[Cell]:
        return [cell for cell, v in self.items() if v.is_undefined]

    def as_source(self) -> Callable[[int, int], ProjValue]:
        return lambda i, j: self.value(i, j)

    def to_frame(self) -> pd.DataFrame:
        records = [{'i': i, 'j': j, 'value': format_value(v), 'state': v.state} for (i, j), v in self.items()]
        return pd.DataFrame.from_records(records, columns=['i', 'j', 'value', 'state'])

    def __repr__(self):
        return f"LatticeMap({self.name}, {len(self)} values, period={self.period}, rotated={self.rotated})"


def lazy_initial_data(source: Callable[[int, int], ProjValue], backend=EXACT,
                      metadata: Optional[Mapping] = None) -> InitialData:
    """dSKP initial data read lazily from a planar map."""
    return InitialData(source=source, backend=backend, metadata=metadata)


# ---------------------------------------------------------------------------
# Exact geometry
# ---------------------------------------------------------------------------

def const(x, like: ProjValue) -> ProjValue:
    """A constant in the backend of ``like``."""
    return ProjValue.of(x, like.backend)


def squared_distance(a: ProjValue, b: ProjValue) -> ProjValue:
    """|a - b|^2 as a real ProjValue."""
    d = a - b
    return d * conj(d)


def reflect_across_line(v: ProjValue, p: ProjValue, q: ProjValue) -> ProjValue:
    """Mirror image of v in the line through p and q."""
    backend = v.backend
    if not all(x.is_finite for x in (v, p, q)) or p == q:
        return ProjValue.undefined(backend)
    direction = q - p
    return p + direction / conj(direction) * conj(v - p)


def reflect_across_bisector(v: ProjValue, a: ProjValue, b: ProjValue) -> ProjValue:
    """Mirror image of v in the perpendicular bisector of [a, b]; a maps to b."""
    backend = v.backend
    if not all(x.is_finite for x in (v, a, b)) or a == b:
        return ProjValue.undefined(backend)
    middle = (a + b) / const(2, a)
    direction = b - a
    return middle - direction / conj(direction) * conj(v - middle)


def circumcenter(a: ProjValue, b: ProjValue, c: ProjValue) -> ProjValue:
    """
    Centre of the circle through three points.

    Collinear distinct points give infinity (the circle is a line);
    coincident or non-finite points give undefined.
    """
    backend = a.backend
    if not all(x.is_finite for x in (a, b, c)) or a == b or b == c or a == c:
        return ProjValue.undefined(backend)
    num = (squared_distance(a, const(0, a)) * (b - c) + squared_distance(b, const(0, a)) * (c - a)
           + squared_distance(c, const(0, a)) * (a - b))
    den = conj(a) * (b - c) + conj(b) * (c - a) + conj(c) * (a - b)
    return num / den


def circumcenter_of(points: Iterable[ProjValue]) -> ProjValue:
    """Circumcentre of the distinct points among ``points`` (first three used)."""
    distinct: List[ProjValue] = []
    for p in points:
        if p.is_undefined:
            return ProjValue.undefined(p.backend)
        if all(p != q for q in distinct):
            distinct.append(p)
    if len(distinct) < 3:
        backend = distinct[0].backend if distinct else EXACT
        return ProjValue.undefined(backend)
    return circumcenter(*distinct[:3])


def equidistant(center: ProjValue, points: Iterable[ProjValue]) -> bool:
    """All points lie on one circle around ``center`` (exact on squared distances)."""
    points = list(points)
    if not center.is_finite or any(not p.is_finite for p in points):
        return False
    return all_equal(squared_distance(p, center) for p in points)


def orthogonal_circles(center_a: ProjValue, r2_a: ProjValue, center_b: ProjValue, r2_b: ProjValue) -> bool:
    """|t - t'|^2 = r^2 + r'^2."""
    return squared_distance(center_a, center_b) == r2_a + r2_b


def circle_point(center, radius, t, backend=EXACT) -> ProjValue:
    """
    The point center + radius * ((1 - t^2) + 2t i) / (1 + t^2).

    Rational ``t`` and ``radius`` keep the point Gaussian-rational.
    """
    t = Fraction(t)
    unit = GaussianRational((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))
    return ProjValue.of(center, backend) + ProjValue.of(radius, backend) * ProjValue.of(unit, backend)


def circle_points(center, radius, parameters: Iterable, backend=EXACT) -> List[ProjValue]:
    points = [circle_point(center, radius, t, backend) for t in parameters]
    for n, p in enumerate(points):
        if any(p == q for q in points[:n]):
            raise ValueError(f"Circle parameters produce a repeated point: {format_value(p)}")
    return points


def rotate_quarter(v: ProjValue) -> ProjValue:
    """Multiplication by i."""
    return v * ProjValue.of(GaussianRational(0, 1), v.backend)
