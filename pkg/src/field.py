"""
Scalar fields and projective-line arithmetic

Two scalar backends are supported:

- ``exact``: Gaussian rationals (pairs of reduced ``Fraction`` values)
- ``float``: Python complex numbers compared with a relative tolerance

Points of the projective line are ``ProjValue`` pairs ``[p : q]`` that can be
finite, infinite or undefined (``[0 : 0]``). Undefined is an ordinary value:
singular configurations are observed, never raised.
"""

import cmath
import logging
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from config import (
    FLOAT_TOLERANCE, LOG_LEVEL, LOG_FORMAT, RANDOM_NUMERATOR_RANGE, RANDOM_DENOMINATOR_RANGE
)

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)


class DSKPError(Exception):
    """Base class for all dskp-lab failures that are not mathematical singularities."""


class IrrationalFixedPointError(DSKPError):
    """A Moebius fixed point is not a Gaussian rational."""


class SingularMatrixError(DSKPError):
    """An exact elimination hit a rank deficiency where an inverse was required."""


class ConsistencyError(DSKPError):
    """An identity that holds for valid input failed, so the input is corrupted."""


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

_GAUSSIAN_PATTERN = re.compile(
    r'^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?\s*$'
)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"Cannot convert {value!r} to an exact rational")


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number re + im*i with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 're', _to_fraction(self.re))
        object.__setattr__(self, 'im', _to_fraction(self.im))

    @staticmethod
    def coerce(value) -> 'GaussianRational':
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, str):
            return GaussianRational.parse(value)
        if isinstance(value, complex):
            raise TypeError("Float complex values are not exact; use the float backend")
        return GaussianRational(_to_fraction(value))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.norm2()
        if norm == 0:
            raise ZeroDivisionError("Gaussian rational division by zero")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self) -> 'GaussianRational':
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def sqrt(self) -> Optional['GaussianRational']:
        """Exact square root when it exists in Q(i), else None."""
        modulus = _fraction_sqrt(self.norm2())
        if modulus is None:
            return None
        u2 = (modulus + self.re) / 2
        v2 = (modulus - self.re) / 2
        u = _fraction_sqrt(u2)
        v = _fraction_sqrt(v2)
        if u is None or v is None:
            return None
        if self.im < 0:
            v = -v
        root = GaussianRational(u, v)
        return root if root * root == self else None

    # serialization --------------------------------------------------------
    def format(self) -> str:
        sign = '+' if self.im >= 0 else '-'
        im = abs(self.im)
        return f"{self.re.numerator}/{self.re.denominator}{sign}{im.numerator}/{im.denominator}*i"

    @staticmethod
    def parse(text: str) -> 'GaussianRational':
        match = _GAUSSIAN_PATTERN.match(text)
        if not match or text.strip() == '':
            raise ValueError(f"Not a Gaussian rational: {text!r}")
        re_part = Fraction(match.group('re')) if match.group('re') else Fraction(0)
        im_part = Fraction(0)
        if match.group('sign'):
            im_part = Fraction(match.group('im')) if match.group('im') else Fraction(1)
            if match.group('sign') == '-':
                im_part = -im_part
        return GaussianRational(re_part, im_part)

    def __repr__(self):
        if self.im == 0:
            return f"GR({self.re})"
        return f"GR({self.re}, {self.im})"


def _fraction_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        return None
    return Fraction(num, den)


Scalar = Union[GaussianRational, complex]


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------

class ExactBackend:
    """Gaussian-rational scalars with exact equality."""

    name = 'exact'

    def scalar(self, value) -> GaussianRational:
        return GaussianRational.coerce(value)

    def is_zero(self, x: Scalar, scale: float = 0.0) -> bool:
        return x == 0

    def equal(self, x: Scalar, y: Scalar) -> bool:
        return x == y

    def abs2(self, x: Scalar) -> Fraction:
        return x.norm2()

    def magnitude(self, x: Scalar) -> float:
        return 0.0

    def conj(self, x: Scalar) -> Scalar:
        return x.conjugate()

    def sqrt(self, x: Scalar) -> Scalar:
        root = x.sqrt()
        if root is None:
            raise IrrationalFixedPointError(f"{x.format()} has no Gaussian-rational square root")
        return root

    def random_scalar(self, rng: random.Random, real: bool = False, nonzero: bool = True) -> GaussianRational:
        while True:
            re_part = Fraction(rng.randint(-RANDOM_NUMERATOR_RANGE, RANDOM_NUMERATOR_RANGE),
                               rng.randint(1, RANDOM_DENOMINATOR_RANGE))
            im_part = Fraction(0) if real else Fraction(
                rng.randint(-RANDOM_NUMERATOR_RANGE, RANDOM_NUMERATOR_RANGE),
                rng.randint(1, RANDOM_DENOMINATOR_RANGE))
            value = GaussianRational(re_part, im_part)
            if not nonzero or value != 0:
                return value

    def format(self, x: Scalar) -> str:
        return x.format()

    def parse(self, text: str) -> Scalar:
        return GaussianRational.parse(text)

    def to_complex(self, x: Scalar) -> complex:
        return x.to_complex()


class FloatBackend:
    """Double-precision complex scalars with a relative tolerance."""

    name = 'float'

    def __init__(self, tolerance: float = FLOAT_TOLERANCE):
        self.tolerance = tolerance

    def scalar(self, value) -> complex:
        if isinstance(value, GaussianRational):
            return value.to_complex()
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return complex(float(value))
        return complex(value)

    def is_zero(self, x: Scalar, scale: float = 1.0) -> bool:
        return abs(x) <= self.tolerance * max(scale, 1e-300)

    def equal(self, x: Scalar, y: Scalar) -> bool:
        return abs(x - y) <= self.tolerance * max(1.0, abs(x), abs(y))

    def abs2(self, x: Scalar) -> float:
        return (x * x.conjugate()).real

    def magnitude(self, x: Scalar) -> float:
        return abs(x)

    def conj(self, x: Scalar) -> Scalar:
        return x.conjugate()

    def sqrt(self, x: Scalar) -> Scalar:
        return cmath.sqrt(x)

    def random_scalar(self, rng: random.Random, real: bool = False, nonzero: bool = True) -> complex:
        while True:
            value = complex(rng.uniform(-4.0, 4.0), 0.0 if real else rng.uniform(-4.0, 4.0))
            if not nonzero or abs(value) > 1e-3:
                return value

    def format(self, x: Scalar) -> str:
        sign = '+' if x.imag >= 0 else '-'
        return f"{x.real!r}{sign}{abs(x.imag)!r}i"

    def parse(self, text: str) -> Scalar:
        return complex(text.strip().replace('*i', 'j').replace('i', 'j'))

    def to_complex(self, x: Scalar) -> complex:
        return complex(x)


EXACT = ExactBackend()
FLOAT = FloatBackend()


def get_backend(name: str):
    """Return the backend instance registered under ``name``."""
    if name == 'exact':
        return EXACT
    if name == 'float':
        return FLOAT
    raise ValueError(f"Unknown backend: {name}")


def backend_of(x) -> Union[ExactBackend, FloatBackend]:
    if isinstance(x, (complex, float)):
        return FLOAT
    return EXACT


# ---------------------------------------------------------------------------
# Projective values
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjValue:
    """
    A point [p : q] of the complex projective line.

    Finite when q != 0, infinite when q == 0 != p, undefined when p == q == 0.
    Instances are always stored in canonical form: (value, 1), (1, 0) or (0, 0).
    """

    p: Scalar
    q: Scalar

    @staticmethod
    def pair(p, q, scale: Optional[float] = None) -> 'ProjValue':
        """
        Build a canonical value from a homogeneous pair.

        Args:
            p, q: homogeneous coordinates
            scale: magnitude of the terms p and q were computed from; the float
                backend treats coordinates below ``tolerance * scale`` as zero

        Returns:
            Canonical ProjValue
        """
        backend = FLOAT if isinstance(p, (complex, float)) or isinstance(q, (complex, float)) else EXACT
        p = backend.scalar(p)
        q = backend.scalar(q)
        if backend is FLOAT:
            size = max(abs(p), abs(q))
            if size == 0 or (scale is not None and size <= backend.tolerance * scale):
                return ProjValue(0j, 0j)
            if backend.is_zero(q, size):
                return ProjValue(1 + 0j, 0j)
            return ProjValue(p / q, 1 + 0j)
        if q == 0:
            if p == 0:
                return ProjValue(GaussianRational(0), GaussianRational(0))
            return ProjValue(GaussianRational(1), GaussianRational(0))
        return ProjValue(p / q, GaussianRational(1))

    @staticmethod
    def of(value, backend=None) -> 'ProjValue':
        """Finite value from a scalar, int, Fraction or string."""
        if isinstance(value, ProjValue):
            return value
        if isinstance(value, str):
            return parse_value(value, backend or EXACT)
        if backend is None:
            backend = backend_of(value)
        return ProjValue.pair(backend.scalar(value), backend.scalar(1))

    @staticmethod
    def infinity(backend=EXACT) -> 'ProjValue':
        return ProjValue.pair(backend.scalar(1), backend.scalar(0))

    @staticmethod
    def undefined(backend=EXACT) -> 'ProjValue':
        return ProjValue(backend.scalar(0), backend.scalar(0))

    @property
    def backend(self):
        return backend_of(self.p)

    @property
    def is_undefined(self) -> bool:
        return self.p == 0 and self.q == 0

    @property
    def is_infinite(self) -> bool:
        return self.q == 0 and self.p != 0

    @property
    def is_finite(self) -> bool:
        return self.q != 0

    @property
    def value(self) -> Scalar:
        """The affine coordinate of a finite value."""
        if not self.is_finite:
            raise ValueError(f"{self} has no finite affine coordinate")
        return self.p

    @property
    def state(self) -> str:
        if self.is_undefined:
            return 'undefined'
        return 'infinite' if self.is_infinite else 'finite'

    def is_zero(self) -> bool:
        return self.is_finite and self.backend.is_zero(self.p)

    def is_real(self) -> bool:
        if self.is_infinite:
            return True
        if self.is_undefined:
            return False
        if isinstance(self.p, GaussianRational):
            return self.p.is_real()
        return abs(self.p.imag) <= FLOAT.tolerance * max(1.0, abs(self.p))

    def __eq__(self, other):
        if not isinstance(other, ProjValue):
            try:
                other = ProjValue.of(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.is_undefined or other.is_undefined:
            return False
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        if isinstance(self.p, GaussianRational) and isinstance(other.p, GaussianRational):
            return self.p == other.p
        return FLOAT.equal(complex(FLOAT.scalar(self.p)), complex(FLOAT.scalar(other.p)))

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self.p, self.q))

    # operator sugar -------------------------------------------------------
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __rtruediv__(self, other):
        return div(_lift(other), self)

    def __neg__(self):
        return neg(self)

    def conjugate(self) -> 'ProjValue':
        return conj(self)

    def format(self) -> str:
        return format_value(self)

    def __repr__(self):
        return f"ProjValue({format_value(self)})"


def _lift(value) -> ProjValue:
    return value if isinstance(value, ProjValue) else ProjValue.of(value)


def _one(backend):
    return backend.scalar(1)


# ---------------------------------------------------------------------------
# Arithmetic with the infinity rules
# ---------------------------------------------------------------------------

def add(a: ProjValue, b: ProjValue) -> ProjValue:
    if a.is_undefined or b.is_undefined:
        return ProjValue.undefined(a.backend)
    if a.is_infinite and b.is_infinite:
        return ProjValue.undefined(a.backend)
    if a.is_infinite or b.is_infinite:
        return ProjValue.infinity(a.backend)
    return ProjValue.pair(a.p + b.p, _one(a.backend))


def neg(a: ProjValue) -> ProjValue:
    if not a.is_finite:
        return a
    return ProjValue.pair(-a.p, _one(a.backend))


def sub(a: ProjValue, b: ProjValue) -> ProjValue:
    return add(a, neg(b))


def mul(a: ProjValue, b: ProjValue) -> ProjValue:
    if a.is_undefined or b.is_undefined:
        return ProjValue.undefined(a.backend)
    if a.is_infinite or b.is_infinite:
        if a.is_zero() or b.is_zero():
            return ProjValue.undefined(a.backend)
        return ProjValue.infinity(a.backend)
    return ProjValue.pair(a.p * b.p, _one(a.backend))


def inv(a: ProjValue) -> ProjValue:
    if a.is_undefined:
        return a
    if a.is_infinite:
        return ProjValue.pair(a.backend.scalar(0), _one(a.backend))
    if a.is_zero():
        return ProjValue.infinity(a.backend)
    return ProjValue.pair(_one(a.backend), a.p)


def div(a: ProjValue, b: ProjValue) -> ProjValue:
    if a.is_undefined or b.is_undefined:
        return ProjValue.undefined(a.backend)
    if b.is_infinite:
        return ProjValue.undefined(a.backend) if a.is_infinite else ProjValue.pair(a.backend.scalar(0), _one(a.backend))
    if b.is_zero():
        return ProjValue.undefined(a.backend) if a.is_zero() else ProjValue.infinity(a.backend)
    return mul(a, inv(b))


def conj(a: ProjValue) -> ProjValue:
    if not a.is_finite:
        return a
    return ProjValue.pair(a.backend.conj(a.p), _one(a.backend))


_ARITH = {
    'add': add,
    'sub': sub,
    'mul': mul,
    'div': div,
}

_UNARY = {
    'inv': inv,
    'neg': neg,
    'conj': conj,
}


def arith(op: str, a: ProjValue, b: Optional[ProjValue] = None) -> ProjValue:
    """Dispatch one of add/sub/mul/div/inv/neg/conj on projective values."""
    if op in _UNARY:
        return _UNARY[op](a)
    if op in _ARITH:
        if b is None:
            raise ValueError(f"Operation {op} needs two operands")
        return _ARITH[op](a, b)
    raise ValueError(f"Unknown operation: {op}")


# ---------------------------------------------------------------------------
# Homogeneous ratios and solvers
# ---------------------------------------------------------------------------

def det2(x: ProjValue, y: ProjValue) -> Scalar:
    """x.p*y.q - y.p*x.q, the homogeneous form of x - y."""
    return x.p * y.q - y.p * x.q


def _magnitude_of(*values: ProjValue) -> float:
    size = 1.0
    for value in values:
        size *= max(abs(complex(FLOAT.scalar(value.p))), abs(complex(FLOAT.scalar(value.q))), 1e-300)
    return size


def _ratio(num: Scalar, den: Scalar, inputs: Sequence[ProjValue]) -> ProjValue:
    if any(v.is_undefined for v in inputs):
        return ProjValue.undefined(inputs[0].backend)
    scale = _magnitude_of(*inputs) if inputs[0].backend is FLOAT else None
    return ProjValue.pair(num, den, scale=scale)


def cross_ratio(a: ProjValue, b: ProjValue, c: ProjValue, d: ProjValue) -> ProjValue:
    """(a-b)(c-d) / ((b-c)(d-a)), evaluated homogeneously."""
    a, b, c, d = (_lift(v) for v in (a, b, c, d))
    return _ratio(det2(a, b) * det2(c, d), det2(b, c) * det2(d, a), (a, b, c, d))


def multi_ratio6(y1, y2, y3, y4, y5, y6) -> ProjValue:
    """
    Six-point multi-ratio (y1-y2)(y3-y4)(y5-y6) / ((y2-y3)(y4-y5)(y6-y1)).

    The octahedron relation orders its arguments as
    (x_-e3, x_+e2, x_-e1, x_+e3, x_-e2, x_+e1).
    """
    ys = [_lift(v) for v in (y1, y2, y3, y4, y5, y6)]
    num = det2(ys[0], ys[1]) * det2(ys[2], ys[3]) * det2(ys[4], ys[5])
    den = det2(ys[1], ys[2]) * det2(ys[3], ys[4]) * det2(ys[5], ys[0])
    return _ratio(num, den, ys)


OCTAHEDRON_SLOTS = ('-e3', '+e2', '-e1', '+e3', '-e2', '+e1')


def _linear_root(form: Callable[[ProjValue], Scalar], backend, inputs: Sequence[ProjValue]) -> Optional[ProjValue]:
    """
    Root of a form that is linear in the homogeneous coordinates of its argument.

    Returns None when the form vanishes identically.
    """
    coeff_s = form(ProjValue.pair(_one(backend), backend.scalar(0)))
    coeff_t = form(ProjValue.pair(backend.scalar(0), _one(backend)))
    if backend is FLOAT:
        scale = _magnitude_of(*inputs)
        if backend.is_zero(coeff_s, scale) and backend.is_zero(coeff_t, scale):
            return None
        return ProjValue.pair(-coeff_t, coeff_s)
    if coeff_s == 0 and coeff_t == 0:
        return None
    return ProjValue.pair(-coeff_t, coeff_s)


def solve_dskp(known: Mapping[str, ProjValue], unknown: str = '+e3') -> ProjValue:
    """
    Solve the octahedron relation for one vertex.

    Args:
        known: the five known values keyed by direction labels from
            OCTAHEDRON_SLOTS
        unknown: label of the vertex to solve for

    Returns:
        The unique value making the multi-ratio equal to -1, the common value
        when all five known values coincide, undefined otherwise.
    """
    if unknown not in OCTAHEDRON_SLOTS:
        raise ValueError(f"Unknown octahedron direction: {unknown}")
    values = {label: _lift(v) for label, v in known.items() if label != unknown}
    missing = [label for label in OCTAHEDRON_SLOTS if label != unknown and label not in values]
    if missing:
        raise ValueError(f"Missing octahedron values: {missing}")
    given = list(values.values())
    backend = given[0].backend
    if any(v.is_undefined for v in given):
        return ProjValue.undefined(backend)

    def relation(x: ProjValue) -> Scalar:
        ys = [x if label == unknown else values[label] for label in OCTAHEDRON_SLOTS]
        num = det2(ys[0], ys[1]) * det2(ys[2], ys[3]) * det2(ys[4], ys[5])
        den = det2(ys[1], ys[2]) * det2(ys[3], ys[4]) * det2(ys[5], ys[0])
        return num + den

    root = _linear_root(relation, backend, given)
    if root is not None:
        return root
    first = given[0]
    if all(v == first for v in given[1:]):
        return first
    return ProjValue.undefined(backend)


def solve_apex(bottom: ProjValue, north: ProjValue, south: ProjValue,
               east: ProjValue, west: ProjValue) -> ProjValue:
    """x(i,j,k+1) from x(i,j,k-1) and the four neighbours at height k."""
    return solve_dskp({'-e3': bottom, '+e2': north, '-e2': south, '+e1': east, '-e1': west}, '+e3')


def solve_cross_ratio(a: ProjValue, b: ProjValue, d: ProjValue, ratio: ProjValue) -> ProjValue:
    """The value c with cross_ratio(a, b, c, d) = ratio."""
    a, b, d, ratio = (_lift(v) for v in (a, b, d, ratio))
    backend = a.backend
    if any(v.is_undefined for v in (a, b, d, ratio)):
        return ProjValue.undefined(backend)

    def relation(x: ProjValue) -> Scalar:
        return ratio.q * det2(a, b) * det2(x, d) - ratio.p * det2(b, x) * det2(d, a)

    root = _linear_root(relation, backend, (a, b, d, ratio))
    return root if root is not None else ProjValue.undefined(backend)


def harmonic_mean(values: Sequence[ProjValue]) -> ProjValue:
    """Inverse of the mean of inverses, with projective arithmetic."""
    values = [_lift(v) for v in values]
    if not values:
        raise ValueError("harmonic_mean needs at least one value")
    backend = values[0].backend
    total = ProjValue.pair(backend.scalar(0), _one(backend))
    for v in values:
        total = add(total, inv(v))
    return div(ProjValue.of(len(values), backend), total)


# ---------------------------------------------------------------------------
# Moebius transformations
# ---------------------------------------------------------------------------

Matrix2 = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]


@dataclass(frozen=True)
class FixedPoints:
    points: Tuple[ProjValue, ...]
    degenerate: bool = False


def mobius_apply(matrix: Matrix2, z: ProjValue) -> ProjValue:
    (a, b), (c, d) = matrix
    z = _lift(z)
    if z.is_undefined:
        return z
    return ProjValue.pair(a * z.p + b * z.q, c * z.p + d * z.q)


def mobius_compose(outer: Matrix2, inner: Matrix2) -> Matrix2:
    """Matrix of outer after inner."""
    (a, b), (c, d) = outer
    (e, f), (g, h) = inner
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mobius_fixed_points(matrix: Matrix2) -> FixedPoints:
    """
    Fixed points of z -> (az+b)/(cz+d).

    Raises:
        IrrationalFixedPointError: exact backend and the discriminant has no
            Gaussian-rational square root
    """
    (a, b), (c, d) = matrix
    backend = backend_of(a)
    a, b, c, d = (backend.scalar(v) for v in (a, b, c, d))
    if all(backend.is_zero(v) for v in (a, b, c, d)):
        raise ValueError("Zero matrix is not a Moebius transformation")
    zero = backend.scalar(0)
    one = backend.scalar(1)
    if backend.is_zero(b) and backend.is_zero(c) and backend.equal(a, d):
        return FixedPoints(points=(), degenerate=True)
    if backend.is_zero(c):
        # t * ((d - a) s - b t) = 0
        return FixedPoints(points=(ProjValue.pair(one, zero), ProjValue.pair(b, d - a)))
    discriminant = (a - d) * (a - d) + 4 * b * c
    try:
        root = backend.sqrt(discriminant)
    except IrrationalFixedPointError:
        logger.error(f"Irrational fixed points for matrix {matrix}")
        raise
    two_c = 2 * c
    return FixedPoints(points=(ProjValue.pair(a - d + root, two_c), ProjValue.pair(a - d - root, two_c)))


# ---------------------------------------------------------------------------
# Serialization and random values
# ---------------------------------------------------------------------------

def format_value(value: ProjValue) -> str:
    if value.is_undefined:
        return 'nan'
    if value.is_infinite:
        return 'inf'
    return value.backend.format(value.p)


def parse_value(text: str, backend=EXACT) -> ProjValue:
    stripped = text.strip().lower()
    if stripped == 'nan':
        return ProjValue.undefined(backend)
    if stripped == 'inf':
        return ProjValue.infinity(backend)
    return ProjValue.pair(backend.parse(text), backend.scalar(1))


def random_value(rng: random.Random, backend=EXACT, real: bool = False) -> ProjValue:
    return ProjValue.pair(backend.random_scalar(rng, real=real), backend.scalar(1))


def random_values(rng: random.Random, count: int, backend=EXACT, real: bool = False) -> List[ProjValue]:
    """Pairwise distinct random finite values."""
    values: List[ProjValue] = []
    while len(values) < count:
        candidate = random_value(rng, backend, real=real)
        if all(candidate != v for v in values):
            values.append(candidate)
    return values


def all_equal(values: Iterable[ProjValue]) -> bool:
    values = list(values)
    if not values:
        return True
    return all(v == values[0] for v in values[1:])
