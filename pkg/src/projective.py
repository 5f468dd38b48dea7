"""
Points and flats of projective space RP^N in homogeneous coordinates

Joins and meets are computed from kernels of coordinate matrices, exactly
over the Gaussian rationals or with a tolerance over floats. Affine
coordinates pi_l([r]) = r_l / r_N are the boundary to the dSKP embeddings.
"""

import logging
import random
from typing import Iterable, List, Sequence, Tuple, Union

from config import COPLANARITY_TOLERANCE, DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from field import EXACT, FLOAT, DSKPError, ProjValue, Scalar, backend_of, get_backend
from linalg import determinant, nullspace, numeric_rank, rank, solve

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Vector = Tuple[Scalar, ...]
Matrix = List[List[Scalar]]


class ChartError(DSKPError):
    """A point needed in an affine chart lies at infinity."""


class ProjPoint:
    """
    A point [r] of RP^N, or the undefined point when r = 0.

    Exact points are stored with their last nonzero coordinate equal to 1.
    """

    __slots__ = ('coords', 'backend')

    def __init__(self, coords: Iterable, backend=None):
        values = list(coords)
        if backend is None:
            backend = backend_of(values[0]) if values else EXACT
        values = [backend.scalar(x) for x in values]
        if backend is EXACT:
            last = next((x for x in reversed(values) if x != 0), None)
            if last is not None:
                values = [x / last for x in values]
        self.coords: Vector = tuple(values)
        self.backend = backend

    @staticmethod
    def affine(*xs, backend=EXACT) -> 'ProjPoint':
        """The point with affine coordinates ``xs`` (last homogeneous coordinate 1)."""
        return ProjPoint([backend.scalar(x) for x in xs] + [backend.scalar(1)], backend)

    @staticmethod
    def from_coordinates(values: Sequence[ProjValue]) -> 'ProjPoint':
        """Reassemble a point from its N finite affine coordinates."""
        backend = values[0].backend
        if not all(v.is_finite for v in values):
            return ProjPoint.undefined(len(values), backend)
        return ProjPoint([v.value for v in values] + [backend.scalar(1)], backend)

    @staticmethod
    def undefined(dimension: int, backend=EXACT) -> 'ProjPoint':
        return ProjPoint([backend.scalar(0)] * (dimension + 1), backend)

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    @property
    def _scale(self) -> float:
        return max((abs(complex(FLOAT.scalar(x))) for x in self.coords), default=0.0)

    @property
    def is_undefined(self) -> bool:
        if self.backend is EXACT:
            return all(x == 0 for x in self.coords)
        return self._scale == 0.0

    @property
    def is_at_infinity(self) -> bool:
        return not self.is_undefined and self.backend.is_zero(self.coords[-1], self._scale)

    def coordinate(self, index: int) -> ProjValue:
        """pi_index, infinite at infinity."""
        if self.is_undefined:
            return ProjValue.undefined(self.backend)
        scale = self._scale if self.backend is FLOAT else None
        return ProjValue.pair(self.coords[index], self.coords[-1], scale=scale)

    def affine_coordinates(self) -> List[ProjValue]:
        return [self.coordinate(index) for index in range(self.dimension)]

    def transformed(self, matrix: Sequence[Sequence[Scalar]]) -> 'ProjPoint':
        coords = []
        for row in matrix:
            total = self.backend.scalar(0)
            for a, x in zip(row, self.coords):
                total = total + a * x
            coords.append(total)
        return ProjPoint(coords, self.backend)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or other.dimension != self.dimension:
            return NotImplemented
        if self.is_undefined or other.is_undefined:
            return False
        if self.backend is EXACT and other.backend is EXACT:
            return self.coords == other.coords
        a = [complex(FLOAT.scalar(x)) for x in self.coords]
        b = [complex(FLOAT.scalar(x)) for x in other.coords]
        pivot = max(range(len(a)), key=lambda n: abs(a[n]))
        if abs(b[pivot]) == 0:
            return False
        a = [x / a[pivot] for x in a]
        b = [x / b[pivot] for x in b]
        return all(FLOAT.equal(x, y) for x, y in zip(a, b))

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self.coords) if self.backend is EXACT else hash(self.dimension)

    def format(self) -> List[str]:
        return [self.backend.format(x) for x in self.coords]

    @staticmethod
    def parse(texts: Sequence[str], backend=EXACT) -> 'ProjPoint':
        return ProjPoint([backend.parse(t) for t in texts], backend)

    def __repr__(self):
        if self.is_undefined:
            return 'ProjPoint(undefined)'
        return f"[{' : '.join(self.format())}]"


# ---------------------------------------------------------------------------
# Flats: joins and meets
# ---------------------------------------------------------------------------

class Flat:
    """
    Projectivization of a linear subspace, stored as independent spanning vectors.

    ``degenerate`` marks a join whose points did not span the requested
    dimension (e.g. the line through two equal points).
    """

    def __init__(self, basis: Sequence[Vector], ambient: int, backend=EXACT, degenerate: bool = False):
        self.basis: List[Vector] = [tuple(v) for v in basis]
        self.ambient = ambient
        self.backend = backend
        self.degenerate = degenerate

    @property
    def dimension(self) -> int:
        """Projective dimension; -1 for the empty flat."""
        return len(self.basis) - 1

    def contains(self, point: ProjPoint) -> bool:
        if point.is_undefined:
            return False
        return vectors_rank(self.basis + [point.coords], self.backend) == len(self.basis)

    def point(self) -> ProjPoint:
        """The flat as a point, undefined unless it has dimension 0."""
        if self.dimension != 0:
            return ProjPoint.undefined(self.ambient, self.backend)
        return ProjPoint(self.basis[0], self.backend)

    def __repr__(self):
        return f"Flat(dim={self.dimension}, ambient={self.ambient}{', degenerate' if self.degenerate else ''})"


def vectors_rank(vectors: Sequence[Sequence[Scalar]], backend=EXACT,
                 tolerance: float = COPLANARITY_TOLERANCE) -> int:
    """Rank of the coordinate matrix; the float backend uses singular values."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    if backend is FLOAT:
        return numeric_rank(rows, tolerance)
    return rank(rows, backend=backend)


def points_rank(points: Sequence[ProjPoint], tolerance: float = COPLANARITY_TOLERANCE) -> int:
    points = list(points)
    if not points:
        return 0
    return vectors_rank([p.coords for p in points], points[0].backend, tolerance)


def are_collinear(points: Sequence[ProjPoint]) -> bool:
    return points_rank(points) <= 2


def are_coplanar(points: Sequence[ProjPoint]) -> bool:
    return points_rank(points) <= 3


def _independent(vectors: Sequence[Vector], backend) -> List[Vector]:
    chosen: List[Vector] = []
    for v in vectors:
        if vectors_rank(chosen + [v], backend) > len(chosen):
            chosen.append(tuple(v))
    return chosen


def join(*points: ProjPoint) -> Flat:
    """The smallest flat through ``points``."""
    ambient = points[0].dimension
    backend = points[0].backend
    if any(p.is_undefined for p in points):
        return Flat([], ambient, backend, degenerate=True)
    basis = _independent([p.coords for p in points], backend)
    return Flat(basis, ambient, backend, degenerate=len(basis) < len(points))


def line_through(p: ProjPoint, q: ProjPoint) -> Flat:
    return join(p, q)


def plane_through(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> Flat:
    return join(p, q, r)


def meet(first: Flat, second: Flat) -> Flat:
    """Intersection of two flats: kernel of [U | -W] read back through U."""
    backend = first.backend
    if first.degenerate or second.degenerate or not first.basis or not second.basis:
        return Flat([], first.ambient, backend, degenerate=True)
    size = first.ambient + 1
    columns = list(first.basis) + [tuple(-x for x in w) for w in second.basis]
    matrix = [[columns[c][r] for c in range(len(columns))] for r in range(size)]
    kernel = nullspace(matrix, n_cols=len(columns), backend=backend)
    vectors = []
    for solution in kernel:
        vector = [backend.scalar(0)] * size
        for coefficient, u in zip(solution[:len(first.basis)], first.basis):
            vector = [acc + coefficient * x for acc, x in zip(vector, u)]
        vectors.append(tuple(vector))
    return Flat(_independent(vectors, backend), first.ambient, backend)


def intersect(first: Flat, second: Flat) -> ProjPoint:
    """The common point of two flats, undefined unless they meet in exactly one point."""
    return meet(first, second).point()


def meet_join(kind: str, *args: ProjPoint) -> Union[ProjPoint, Flat]:
    """
    Named incidence constructions.

    Kinds: ``line_through_2``, ``plane_through_3``, ``line_line``
    (lines ab and cd), ``line_plane`` (line ab and plane cde).
    """
    if kind == 'line_through_2':
        return line_through(*args)
    if kind == 'plane_through_3':
        return plane_through(*args)
    if kind == 'line_line':
        a, b, c, d = args
        return intersect(line_through(a, b), line_through(c, d))
    if kind == 'line_plane':
        a, b, c, d, e = args
        return intersect(line_through(a, b), plane_through(c, d, e))
    raise ValueError(f"Unknown incidence construction: {kind}")


# ---------------------------------------------------------------------------
# Projective maps and affine charts
# ---------------------------------------------------------------------------

def random_projective_map(dimension: int, seed: int = DEFAULT_SEED, backend=EXACT) -> Matrix:
    """An invertible (N+1)x(N+1) matrix with small random real entries."""
    rng = random.Random(seed)
    size = dimension + 1
    while True:
        matrix = [[backend.scalar(rng.randint(-5, 5)) for _ in range(size)] for _ in range(size)]
        if not backend.is_zero(determinant(matrix, backend=backend), 1.0):
            return matrix


def inverse_map(matrix: Sequence[Sequence[Scalar]], backend=EXACT) -> Matrix:
    """Inverse matrix, column by column."""
    size = len(matrix)
    columns = []
    for c in range(size):
        unit = [backend.scalar(1 if r == c else 0) for r in range(size)]
        columns.append(solve(matrix, unit, backend=backend))
    return [[columns[c][r] for c in range(size)] for r in range(size)]


def transform_polygon(points: Sequence[ProjPoint], matrix: Sequence[Sequence[Scalar]]) -> List[ProjPoint]:
    return [p.transformed(matrix) for p in points]


def chart_safe_map(points: Sequence[ProjPoint], seed: int = DEFAULT_SEED, attempts: int = 20) -> Matrix:
    """
    A projective map moving every point in ``points`` off the hyperplane at infinity.

    Raises:
        ChartError: no such map found in ``attempts`` tries
    """
    points = list(points)
    backend = points[0].backend
    for attempt in range(attempts):
        matrix = random_projective_map(points[0].dimension, seed + attempt, backend)
        if all(not q.is_at_infinity for q in transform_polygon(points, matrix)):
            return matrix
    raise ChartError(f"No affine chart found for {len(points)} points in {attempts} attempts")


def center_of_mass(points: Sequence[ProjPoint]) -> ProjPoint:
    """Mean of the affine representatives.

    Raises:
        ChartError: a point lies at infinity
    """
    points = list(points)
    if any(p.is_at_infinity or p.is_undefined for p in points):
        raise ChartError("Center of mass needs finite points")
    backend = points[0].backend
    n = backend.scalar(len(points))
    coords = []
    for index in range(points[0].dimension):
        total = backend.scalar(0)
        for p in points:
            total = total + p.coordinate(index).value
        coords.append(total / n)
    return ProjPoint(coords + [backend.scalar(1)], backend)


def polygon_to_json(points: Sequence[ProjPoint]) -> List[List[str]]:
    return [p.format() for p in points]


def polygon_from_json(doc: Sequence[Sequence[str]], backend: Union[str, object] = EXACT) -> List[ProjPoint]:
    if isinstance(backend, str):
        backend = get_backend(backend)
    return [ProjPoint.parse(texts, backend) for texts in doc]
