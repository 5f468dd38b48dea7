"""
Aztec diamonds, Kasteleyn orientations and oriented-dimer partition functions

Faces of the square lattice are named by their lower-left corner, so face
(i, j) is the unit square [i, i+1] x [j, j+1] and carries the initial value
a_{i,j}. Vertices are lattice points; a vertex is black when its offset from
the centre face has coordinate sum of the parity of k + 1. In the frame
rotated by 45 degrees black vertices then fill the interior columns, and the
leftmost open faces lie west of them.
"""

import json
import logging
import random
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

import networkx as nx
import pandas as pd

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT, MAX_AZTEC_SIZE
from field import EXACT, ConsistencyError, DSKPError, ProjValue, format_value, get_backend, parse_value
from linalg import nullspace

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
Edge = Tuple[Cell, Cell]
FaceWeights = Dict[Cell, ProjValue]


class OversizeError(DSKPError):
    """Matching enumeration was asked for a diamond above the configured size."""


class AztecDiamond:
    """
    The Aztec diamond of size k around a face.

    Internal faces are at L1 distance < k from the centre, open faces at
    distance exactly k. Vertices are the corners of internal faces.
    """

    def __init__(self, center: Cell, k: int):
        if k < 0:
            raise ValueError("Aztec diamond size must be non-negative")
        self.center = tuple(center)
        self.k = k
        ci, cj = self.center
        self.internal_faces: List[Cell] = []
        self.open_faces: List[Cell] = []
        for i in range(ci - k, ci + k + 1):
            for j in range(cj - k, cj + k + 1):
                distance = abs(i - ci) + abs(j - cj)
                if distance < k:
                    self.internal_faces.append((i, j))
                elif distance == k:
                    self.open_faces.append((i, j))
        self.faces: List[Cell] = sorted(self.internal_faces + self.open_faces)
        self._face_set = set(self.faces)

        vertices = set()
        for (i, j) in self.internal_faces:
            vertices.update(((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)))
        self.vertices: List[Cell] = sorted(vertices)
        self.black: List[Cell] = [v for v in self.vertices if self.is_black(v)]
        self.white: List[Cell] = [v for v in self.vertices if not self.is_black(v)]

        edges = set()
        for face in self.internal_faces:
            edges.update(self.face_edges(face))
        self.edges: List[Edge] = sorted(edges)
        self.graph = nx.Graph()
        self.graph.add_nodes_from(self.vertices)
        self.graph.add_edges_from(self.edges)

    def is_black(self, vertex: Cell) -> bool:
        return (vertex[0] - self.center[0] + vertex[1] - self.center[1] + self.k + 1) % 2 == 0

    def has_face(self, face: Cell) -> bool:
        return face in self._face_set

    def oriented(self, u: Cell, v: Cell) -> Edge:
        """The edge {u, v} as (white, black)."""
        return (v, u) if self.is_black(u) else (u, v)

    def face_edges(self, face: Cell) -> List[Edge]:
        i, j = face
        corners = [((i, j), (i + 1, j)), ((i, j + 1), (i + 1, j + 1)),
                   ((i, j), (i, j + 1)), ((i + 1, j), (i + 1, j + 1))]
        return [self.oriented(u, v) for u, v in corners]

    @staticmethod
    def right_face(tail: Cell, head: Cell) -> Cell:
        """Face on the right of the directed edge tail -> head."""
        (tx, ty), (hx, hy) = tail, head
        step = (hx - tx, hy - ty)
        if step == (1, 0):
            return (tx, ty - 1)
        if step == (-1, 0):
            return (tx - 1, ty)
        if step == (0, 1):
            return (tx, ty)
        if step == (0, -1):
            return (tx - 1, ty - 1)
        raise ValueError(f"{tail} -> {head} is not a lattice edge")

    def left_face(self, tail: Cell, head: Cell) -> Cell:
        return self.right_face(head, tail)

    def leftmost_faces(self) -> List[Cell]:
        """The k+1 open faces on the upper-left side, bottom to top."""
        ci, cj = self.center
        return [(ci - self.k + ell, cj + ell) for ell in range(self.k + 1)]

    def counts(self) -> Dict[str, int]:
        return {
            'internal_faces': len(self.internal_faces),
            'open_faces': len(self.open_faces),
            'vertices': len(self.vertices),
            'black': len(self.black),
            'white': len(self.white),
            'edges': len(self.edges),
        }

    def check_counts(self) -> None:
        """
        Raises:
            ConsistencyError: the combinatorial identities fail
        """
        k = self.k
        counts = self.counts()
        expected = {
            'internal_faces': 2 * k * k - 2 * k + 1 if k else 0,
            'open_faces': 4 * k if k else 1,
            'vertices': 2 * k * (k + 1),
            'black': k * (k + 1),
            'white': k * (k + 1),
            'edges': 4 * k * k,
        }
        if counts != expected or len(self.faces) != 2 * len(self.black) + 1:
            raise ConsistencyError(f"Aztec diamond of size {k} has counts {counts}, expected {expected}")

    def __repr__(self):
        return f"AztecDiamond(center={self.center}, k={self.k})"


def build_aztec(center: Cell, k: int) -> AztecDiamond:
    diamond = AztecDiamond(center, k)
    diamond.check_counts()
    logger.debug(f"Built {diamond}: {diamond.counts()}")
    return diamond


# ---------------------------------------------------------------------------
# Kasteleyn orientations
# ---------------------------------------------------------------------------

@dataclass
class KasteleynOrientation:
    """Signs phi(w, b) on edges stored white-to-black; phi(b, w) = -phi(w, b)."""

    diamond: AztecDiamond
    signs: Dict[Edge, int] = dataclass_field(default_factory=dict)

    def phi(self, tail: Cell, head: Cell) -> int:
        if self.diamond.is_black(tail):
            return -self.signs[(head, tail)]
        return self.signs[(tail, head)]

    def face_product(self, face: Cell) -> int:
        result = 1
        for edge in self.diamond.face_edges(face):
            result *= self.signs[edge]
        return result

    def violations(self) -> List[Cell]:
        return [f for f in self.diamond.internal_faces if self.face_product(f) != -1]


def default_kasteleyn(diamond: AztecDiamond) -> KasteleynOrientation:
    """
    +1 on a breadth-first spanning tree, then each internal face with a
    single unassigned edge fixes that edge so the face product is -1.

    Raises:
        ConsistencyError: the peeling stalls or a face product is wrong
    """
    orientation = KasteleynOrientation(diamond)
    if not diamond.vertices:
        return orientation
    root = diamond.vertices[0]
    for u, v in nx.bfs_edges(diamond.graph, root):
        orientation.signs[diamond.oriented(u, v)] = 1

    pending = list(diamond.internal_faces)
    while pending:
        progress = False
        remaining = []
        for face in pending:
            edges = diamond.face_edges(face)
            unknown = [e for e in edges if e not in orientation.signs]
            if len(unknown) == 1:
                known = 1
                for e in edges:
                    if e in orientation.signs:
                        known *= orientation.signs[e]
                orientation.signs[unknown[0]] = -known
                progress = True
            elif unknown:
                remaining.append(face)
        if not progress and remaining:
            raise ConsistencyError(f"Kasteleyn peeling stalled on {len(remaining)} faces of {diamond}")
        pending = remaining

    missing = [e for e in diamond.edges if e not in orientation.signs]
    bad = orientation.violations()
    if missing or bad:
        raise ConsistencyError(f"Invalid Kasteleyn orientation on {diamond}: missing={missing} bad={bad}")
    return orientation


def regauge(orientation: KasteleynOrientation, vertex: Cell) -> KasteleynOrientation:
    """Flip the sign of every edge at ``vertex``; face products are unchanged."""
    diamond = orientation.diamond
    signs = dict(orientation.signs)
    for neighbour in diamond.graph.neighbors(vertex):
        edge = diamond.oriented(vertex, neighbour)
        signs[edge] = -signs[edge]
    return KasteleynOrientation(diamond, signs)


def random_regauge(orientation: KasteleynOrientation, seed: int = DEFAULT_SEED) -> KasteleynOrientation:
    rng = random.Random(seed)
    for vertex in orientation.diamond.vertices:
        if rng.random() < 0.5:
            orientation = regauge(orientation, vertex)
    return orientation


# ---------------------------------------------------------------------------
# Partition functions
# ---------------------------------------------------------------------------

def weights_from_initial(init, center: Cell, k: int) -> FaceWeights:
    """Face weights of the diamond A_k around ``center`` read from initial data."""
    return {face: init.value(*face) for face in AztecDiamond(center, k).faces}


def _guard(diamond: AztecDiamond, max_size: Optional[int]) -> None:
    limit = MAX_AZTEC_SIZE if max_size is None else max_size
    if diamond.k > limit:
        raise OversizeError(f"Aztec diamond of size {diamond.k} exceeds the enumeration limit {limit}")


def _scalars(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue]):
    """Affine face weights, or None when some weight is not finite."""
    values = {}
    for face in diamond.faces:
        w = weights[face]
        if not w.is_finite:
            return None
        values[face] = w.value
    return values


def _edge_factor(diamond: AztecDiamond, orientation: KasteleynOrientation,
                 values: Mapping[Cell, object], white: Cell, black: Cell):
    """Sum over both orientations of one matched edge."""
    right = diamond.right_face(white, black)
    left = diamond.left_face(white, black)
    return orientation.phi(white, black) * (values[right] - values[left])


def _matching_sum(diamond: AztecDiamond, edge_weight: Callable[[Cell, Cell], object], one):
    """Sum over perfect matchings of the product of ``edge_weight``, by least-vertex branching."""
    order = diamond.vertices
    index = {v: n for n, v in enumerate(order)}
    neighbours = [[index[u] for u in diamond.graph.neighbors(v)] for v in order]

    @lru_cache(maxsize=None)
    def total(mask: int):
        if mask == 0:
            return one
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        result = None
        for u in neighbours[v]:
            if rest >> u & 1:
                term = edge_weight(order[v], order[u])
                if term == 0:
                    continue
                sub = total(rest & ~(1 << u))
                if sub == 0:
                    continue
                term = term * sub
                result = term if result is None else result + term
        return one * 0 if result is None else result

    return total((1 << len(order)) - 1)


def count_matchings(diamond: AztecDiamond, max_size: Optional[int] = None) -> int:
    _guard(diamond, max_size)
    return _matching_sum(diamond, lambda u, v: 1, 1)


def _partition_scalar(diamond: AztecDiamond, values, orientation: KasteleynOrientation, backend):
    def edge_weight(u: Cell, v: Cell):
        white, black = diamond.oriented(u, v)
        return _edge_factor(diamond, orientation, values, white, black)

    return _matching_sum(diamond, edge_weight, backend.scalar(1))


def partition_function(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue],
                       orientation: Optional[KasteleynOrientation] = None,
                       max_size: Optional[int] = None) -> ProjValue:
    """
    Oriented-dimer partition function.

    Args:
        diamond: the graph
        weights: a_f on every internal and open face
        orientation: Kasteleyn signs, the default construction when omitted
        max_size: override of the enumeration guard

    Returns:
        Z as a finite value, undefined when a weight is not finite

    Raises:
        OversizeError: the diamond is larger than the guard allows
    """
    _guard(diamond, max_size)
    backend = next(iter(weights.values())).backend
    values = _scalars(diamond, weights)
    if values is None:
        return ProjValue.undefined(backend)
    orientation = orientation or default_kasteleyn(diamond)
    return ProjValue.of(_partition_scalar(diamond, values, orientation, backend), backend)


def partition_function_bruteforce(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue],
                                  orientation: Optional[KasteleynOrientation] = None) -> ProjValue:
    """Sum over every oriented dimer configuration, one term each (k <= 2)."""
    _guard(diamond, min(2, MAX_AZTEC_SIZE))
    backend = next(iter(weights.values())).backend
    values = _scalars(diamond, weights)
    if values is None:
        return ProjValue.undefined(backend)
    orientation = orientation or default_kasteleyn(diamond)
    total = backend.scalar(0)
    for matching in perfect_matchings(diamond):
        for directions in product((False, True), repeat=len(matching)):
            term = backend.scalar(1)
            for (white, black), flipped in zip(matching, directions):
                tail, head = (black, white) if flipped else (white, black)
                term = term * orientation.phi(tail, head) * values[diamond.right_face(tail, head)]
            total = total + term
    return ProjValue.of(total, backend)


def perfect_matchings(diamond: AztecDiamond) -> List[List[Edge]]:
    """All perfect matchings as lists of (white, black) edges."""
    results: List[List[Edge]] = []

    def extend(remaining: List[Cell], chosen: List[Edge]):
        if not remaining:
            results.append(list(chosen))
            return
        v = remaining[0]
        rest = set(remaining[1:])
        for u in diamond.graph.neighbors(v):
            if u in rest:
                chosen.append(diamond.oriented(u, v))
                extend([w for w in remaining[1:] if w != u], chosen)
                chosen.pop()

    extend(list(diamond.vertices), [])
    return results


def sample_matching(diamond: AztecDiamond, seed: int = DEFAULT_SEED) -> List[Edge]:
    """A perfect matching picked through randomly weighted maximum matching."""
    graph = diamond.graph.copy()
    rng = random.Random(seed)
    for u, v in graph.edges:
        graph[u][v]['weight'] = rng.random()
    matching = nx.max_weight_matching(graph, maxcardinality=True)
    edges = sorted(diamond.oriented(u, v) for u, v in matching)
    if 2 * len(edges) != len(diamond.vertices):
        raise ConsistencyError(f"{diamond} has no perfect matching")
    return edges


def ratio_Y(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue],
            orientation: Optional[KasteleynOrientation] = None,
            max_size: Optional[int] = None) -> ProjValue:
    """
    Y = (product of all face weights) * Z(1/a) / Z(a).

    A zero, infinite or undefined weight gives undefined, since Z(1/a) is
    not defined then.
    """
    _guard(diamond, max_size)
    backend = next(iter(weights.values())).backend
    values = _scalars(diamond, weights)
    if values is None or any(backend.is_zero(x) for x in values.values()):
        return ProjValue.undefined(backend)
    orientation = orientation or default_kasteleyn(diamond)
    inverse = {face: 1 / x for face, x in values.items()}
    z = _partition_scalar(diamond, values, orientation, backend)
    z_inverse = _partition_scalar(diamond, inverse, orientation, backend)
    weight_product = backend.scalar(1)
    for x in values.values():
        weight_product = weight_product * x
    return ProjValue.pair(weight_product * z_inverse, z)


# ---------------------------------------------------------------------------
# Operator D and the kernel evaluation
# ---------------------------------------------------------------------------

def _vertex_faces(vertex: Cell) -> Dict[str, Cell]:
    x, y = vertex
    return {'N': (x, y), 'W': (x - 1, y), 'S': (x - 1, y - 1), 'E': (x, y - 1)}


FACE_SIGNS = {'W': 1, 'S': 1, 'E': -1, 'N': -1}


@dataclass
class OperatorD:
    """
    Sparse map from two copies of C^B to C^F.

    ``entries[(face, column)]`` with columns 0..|B|-1 for the +-1 copy and
    |B|..2|B|-1 for the +-a_f copy.
    """

    faces: List[Cell]
    black: List[Cell]
    entries: Dict[Tuple[Cell, int], ProjValue]

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.faces), 2 * len(self.black))

    def entry(self, face: Cell, column: int) -> Optional[ProjValue]:
        return self.entries.get((face, column))

    def transpose_rows(self, backend) -> List[List[object]]:
        """Dense D^T over the scalar backend (requires finite entries)."""
        index = {f: n for n, f in enumerate(self.faces)}
        rows = [[backend.scalar(0)] * len(self.faces) for _ in range(2 * len(self.black))]
        for (face, column), value in self.entries.items():
            rows[column][index[face]] = rows[column][index[face]] + value.value
        return rows


def operator_D(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue]) -> OperatorD:
    """
    D_{f,b} = +1 (resp. +a_f) when f is left of or below b, -1 (resp. -a_f) when
    f is right of or above b, in the frame rotated by 45 degrees.
    """
    n_black = len(diamond.black)
    entries: Dict[Tuple[Cell, int], ProjValue] = {}
    backend = next(iter(weights.values())).backend if weights else EXACT
    signs = {label: ProjValue.of(sign, backend) for label, sign in FACE_SIGNS.items()}
    for column, b in enumerate(diamond.black):
        for label, face in _vertex_faces(b).items():
            if not diamond.has_face(face):
                continue
            entries[(face, column)] = signs[label]
            entries[(face, column + n_black)] = weights[face] * signs[label]
    return OperatorD(faces=list(diamond.faces), black=list(diamond.black), entries=entries)


@dataclass
class KernelResult:
    value: ProjValue
    nullity: int
    vector: Optional[List[object]] = None
    faces: List[Cell] = dataclass_field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        if self.vector is not None:
            backend = get_backend('float') if isinstance(self.vector[0], complex) else EXACT
            for face, x in zip(self.faces, self.vector):
                rows.append({'face_i': face[0], 'face_j': face[1], 'value': backend.format(x)})
        return pd.DataFrame(rows, columns=['face_i', 'face_j', 'value'])


def kernel_evaluation(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue]) -> KernelResult:
    """Kernel of D^T and the weighted read-out on the leftmost faces."""
    backend = next(iter(weights.values())).backend
    if any(not weights[f].is_finite for f in diamond.faces):
        return KernelResult(ProjValue.undefined(backend), nullity=-1)
    operator = operator_D(diamond, weights)
    rows = operator.transpose_rows(backend)
    basis = nullspace(rows, n_cols=len(operator.faces), backend=backend)
    if len(basis) != 1:
        logger.debug(f"ker D^T has dimension {len(basis)} on {diamond}")
        return KernelResult(ProjValue.undefined(backend), nullity=len(basis))
    vector = basis[0]
    index = {f: n for n, f in enumerate(operator.faces)}
    numerator = backend.scalar(0)
    denominator = backend.scalar(0)
    for face in diamond.leftmost_faces():
        v = vector[index[face]]
        numerator = numerator + weights[face].value * v
        denominator = denominator + v
    return KernelResult(ProjValue.pair(numerator, denominator), nullity=1, vector=vector,
                        faces=operator.faces)


def ratio_via_kernel(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue]) -> ProjValue:
    return kernel_evaluation(diamond, weights).value


def explicit_value(init, target, method: str = 'kernel', max_size: Optional[int] = None) -> ProjValue:
    """
    x(i, j, k) from the initial data through the diamond A_{k-1} around (i, j).

    Args:
        method: 'kernel' (operator D) or 'ratio' (partition functions)
    """
    i, j, k = target if isinstance(target, tuple) else target.as_tuple()
    if k < 1:
        raise ValueError("explicit_value needs k >= 1")
    diamond = AztecDiamond((i, j), k - 1)
    weights = weights_from_initial(init, (i, j), k - 1)
    if method == 'kernel':
        return ratio_via_kernel(diamond, weights)
    if method == 'ratio':
        return ratio_Y(diamond, weights, max_size=max_size)
    raise ValueError(f"Unknown method: {method}")


# ---------------------------------------------------------------------------
# Quotient by a period: the operator on a cylinder
# ---------------------------------------------------------------------------

@dataclass
class CylinderKernel:
    m: int
    faces: List[Cell]
    black_count: int
    basis: List[List[object]]
    zero_columns: List[int]
    zero_column_vectors_ok: bool

    @property
    def nullity(self) -> int:
        return len(self.basis)


def kernel_on_cylinder(u_center: int, k: int, m: int, weight: Callable[[int, int], ProjValue],
                       backend=EXACT, black_offset: int = 0) -> CylinderKernel:
    """
    Kernel of D^T for the strip of face columns |u - u_center| <= k, with
    rows identified modulo v -> v + 2m.

    Faces are given in rotated coordinates (u, v) = (i - j, i + j) with
    u = v mod 2. Black vertices sit on the columns u = u_center + black_offset
    mod 2; the
    vertex (U, V) touches the faces N (U, V), S (U, V-2), W (U-1, V-1) and
    E (U+1, V-1).

    Args:
        weight: face weight as a function of (u, v mod 2m)
    """
    if m < 1:
        raise ValueError("m must be positive")
    columns = list(range(u_center - k, u_center + k + 1))
    faces = [(u, v) for u in columns for v in range(2 * m) if (u - v) % 2 == 0]
    index = {f: n for n, f in enumerate(faces)}
    values = {f: weight(*f) for f in faces}
    if any(not x.is_finite for x in values.values()):
        raise ValueError("Cylinder weights must be finite")
    black = [(u, v) for u in columns if (u - u_center - black_offset) % 2 == 0
             for v in range(2 * m) if (u - v) % 2 == 0]

    rows = []
    for (u, v) in black:
        plain = [backend.scalar(0)] * len(faces)
        weighted = [backend.scalar(0)] * len(faces)
        neighbours = {'N': (u, v), 'S': (u, (v - 2) % (2 * m)),
                      'W': (u - 1, (v - 1) % (2 * m)), 'E': (u + 1, (v - 1) % (2 * m))}
        for label, face in neighbours.items():
            if face not in index:
                continue
            sign = FACE_SIGNS[label]
            plain[index[face]] = plain[index[face]] + sign
            weighted[index[face]] = weighted[index[face]] + values[face].value * sign
        rows.append(plain)
        rows.append(weighted)
    basis = nullspace(rows, n_cols=len(faces), backend=backend)

    zero_columns = [u for u in columns if all(values[f].is_zero() for f in faces if f[0] == u)]
    zero_ok = True
    for u in zero_columns:
        vector = [backend.scalar(1 if f[0] == u else 0) for f in faces]
        for row in rows:
            total = backend.scalar(0)
            for a, x in zip(row, vector):
                total = total + a * x
            if not backend.is_zero(total):
                zero_ok = False
    logger.debug(f"Cylinder kernel m={m} k={k}: {len(faces)} faces, {len(black)} black, nullity {len(basis)}")
    return CylinderKernel(m=m, faces=faces, black_count=len(black), basis=basis,
                          zero_columns=zero_columns, zero_column_vectors_ok=zero_ok)


def cylinder_kernel(diamond: AztecDiamond,
                    weights: Union[Mapping[Cell, ProjValue], Callable[[int, int], ProjValue]],
                    m: int, backend=EXACT) -> CylinderKernel:
    """
    Kernel of D^T on the cylinder obtained from ``diamond`` by identifying
    faces (i, j) and (i + m, j + m).

    The strip keeps every face column the diamond touches and the diamond's
    black columns. ``weights`` is either a function of (i, j) or a mapping of
    faces that must agree on identified faces and cover every column.

    Raises:
        ValueError: the mapping is not m-periodic or misses a face class
    """
    ci, cj = diamond.center
    if callable(weights):
        def weight(u, v):
            return weights((u + v) // 2, (v - u) // 2)
    else:
        table: Dict[Cell, ProjValue] = {}
        for (i, j), value in weights.items():
            key = (i - j, (i + j) % (2 * m))
            if key in table and table[key] != value:
                raise ValueError(f"Weights are not {m}-periodic at face {(i, j)}")
            table[key] = value

        def weight(u, v):
            if (u, v) not in table:
                raise ValueError(f"No weight for the face class (u, v mod {2 * m}) = {(u, v)}")
            return table[(u, v)]
    return kernel_on_cylinder(ci - cj, diamond.k, m, weight, backend=backend, black_offset=(diamond.k + 1) % 2)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def diamond_to_json(diamond: AztecDiamond, weights: Mapping[Cell, ProjValue]) -> Dict:
    backend = next(iter(weights.values())).backend
    return {
        'diamond': {'center': list(diamond.center), 'k': diamond.k},
        'backend': backend.name,
        'cells': [[i, j, format_value(weights[(i, j)])] for (i, j) in diamond.faces],
    }


def diamond_from_json(doc: Union[Mapping, str, Path]) -> Tuple[AztecDiamond, FaceWeights]:
    if isinstance(doc, (str, Path)):
        doc = json.loads(Path(doc).read_text())
    header = doc['diamond']
    diamond = build_aztec(tuple(header['center']), int(header['k']))
    backend = get_backend(doc.get('backend', 'exact'))
    weights = {(int(i), int(j)): parse_value(str(text), backend) for i, j, text in doc['cells']}
    missing = [f for f in diamond.faces if f not in weights]
    if missing:
        raise ValueError(f"Diamond weights are missing faces {missing}")
    return diamond, weights
