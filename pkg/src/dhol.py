"""
Discrete holomorphic maps and orthogonal circle patterns

A discrete holomorphic map is an integrable cross-ratio map with all
labels alpha = -1, beta = 1. Its even and odd rotated sublattices are two
P-nets; an orthogonal circle pattern is the special case where one of them
holds the intersection points and the other the circle centres.
"""

import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from crossratio import (
    BacklundPair, EdgeLabels, holomorphic_partner, icr_explicit, icr_step, rotated_rows, unrotated
)
from dimer import explicit_value
from field import EXACT, GaussianRational, ProjValue, harmonic_mean, multi_ratio6, random_value
from planar import LatticeMap, const, equidistant, from_rotated, orthogonal_circles, squared_distance
from pnet import alternating_inverse_sum, pnet_explicit, pnet_violations
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

OCP_ATTEMPTS = 50


# ---------------------------------------------------------------------------
# Propagation
# ---------------------------------------------------------------------------

def dhol_step(zt: LatticeMap, row: int) -> Dict[int, ProjValue]:
    """Row ``row`` of z~ from the two rows below (quad cross-ratio -1)."""
    return icr_step(zt, EdgeLabels.holomorphic(zt.backend), row)


def dhol_iterate(zt: LatticeMap, steps: int) -> LatticeMap:
    top = max(zt.rows())
    for row in range(top + 1, top + 1 + steps):
        dhol_step(zt, row)
    return zt


def dhol_relation_violations(zt: LatticeMap) -> List[Cell]:
    """
    Sites (i, j) where the six-point relation
    (z_{i,j}, z_{i+1,j}, z_{i+1,j+1}, z_{i+1,j+2}, z_{i,j+2}, z_{i,j+1}) = -1 fails.
    """
    bad = []
    for cell, _ in zt.items():
        i, j = from_rotated(*cell)
        needed = [(i + 1, j), (i + 1, j + 1), (i + 1, j + 2), (i, j + 2), (i, j + 1)]
        if not all(_known(zt, *c) for c in needed):
            continue
        ratio = multi_ratio6(unrotated(zt, i, j), *(unrotated(zt, *c) for c in needed))
        if ratio != const(-1, ratio):
            bad.append((i, j))
    return bad


def _known(zt: LatticeMap, i: int, j: int) -> bool:
    return (i - j, i + j) in zt


def shift_pair(zt: LatticeMap) -> BacklundPair:
    """The Baecklund pair (z, w) with w_{i,j} = z_{i,j+1}."""
    return BacklundPair(z=zt, w=holomorphic_partner(zt), labels=EdgeLabels.holomorphic(zt.backend),
                        metadata={'method': 'shift'})


def dhol_explicit(zt: LatticeMap, site: Cell, method: str = 'kernel',
                  max_size: Optional[int] = None) -> ProjValue:
    """
    z_{i,j} through the diamond A_{i+j-2}.

    Uses z_{i,j} = w_{i,j-1} for the shifted partner, so the initial data
    reads the rotated rows 0, 1 and 2.
    """
    i, j = site
    if i + j < 2:
        raise ValueError("dhol_explicit needs i + j >= 2")
    pair = shift_pair(zt)
    return explicit_value(pair.initial_data(), pair.w_target(i, j - 1), method=method, max_size=max_size)


def dhol_explicit_via_pair(zt: LatticeMap, site: Cell, method: str = 'kernel') -> ProjValue:
    """The same value through the larger diamond A_{i+j-1} of the pair embedding."""
    return icr_explicit(shift_pair(zt), site, method=method)['z']


def dhol_split_pnets(zt: LatticeMap) -> Tuple[LatticeMap, LatticeMap]:
    """p_{i,j} = z~_{2i,2j} and q_{i,j} = z~_{2i+1,2j+1}."""
    if zt.period is not None:
        p = LatticeMap.row_periodic(zt.period // 2, backend=zt.backend, name='p')
        q = LatticeMap.row_periodic(zt.period // 2, backend=zt.backend, name='q')
    else:
        p = LatticeMap(backend=zt.backend, name='p')
        q = LatticeMap(backend=zt.backend, name='q')
    for (u, v), value in zt.items():
        if u % 2 == 0 and v % 2 == 0:
            p.set(u // 2, v // 2, value)
        elif u % 2 and v % 2:
            q.set((u - 1) // 2, (v - 1) // 2, value)
    return p, q


# ---------------------------------------------------------------------------
# Singularities
# ---------------------------------------------------------------------------

def _singular_run(values: Sequence[ProjValue], target: int, backend) -> Tuple[LatticeMap, Optional[int], Optional[int]]:
    """Propagate z~_0 = 0, z~_1 = values up to row ``target``."""
    zt = rotated_rows([0] * len(values), values, backend=backend)
    first_constant, first_undefined = None, None
    for row in range(2, target + 1):
        dhol_step(zt, row)
        if first_undefined is None and any(v.is_undefined for v in zt.row(row).values()):
            first_undefined = row
        if first_constant is None and zt.constant_row(row) is not None:
            first_constant = row
    return zt, first_constant, first_undefined


def singular_target_row(m: int, variant: str = 'standard') -> int:
    """Row of z~ that becomes constant: 2m-1 (m odd), 2m-2 (m even), 2m-3 (premature)."""
    if variant == 'premature':
        return 2 * m - 3
    return 2 * m - 1 if m % 2 else 2 * m - 2


def check_dhol_singularity(values: Sequence, variant: str = 'standard', backend=EXACT) -> CheckReport:
    """
    m-closed data with z~_0 = 0: the row singular_target_row(m) is constant
    and equal to the harmonic mean of z~_1.
    """
    values = [ProjValue.of(v, backend) for v in values]
    m = len(values)
    if variant not in ('standard', 'premature'):
        raise ValueError(f"Unknown variant: {variant}")
    target = singular_target_row(m, variant)
    steps = target - 1
    report = CheckReport(name=f'dhol_{variant}', passed=False, steps=steps, predicted_step=steps)
    expected = harmonic_mean(values)
    report.details['harmonic_mean'] = expected
    if variant == 'premature':
        constraint = alternating_inverse_sum(values)
        report.details['alternating_inverse_sum'] = constraint
        if m % 2 or not constraint.is_zero():
            report.violations.append('premature variant needs m even and a vanishing alternating sum')
            return report

    zt, first_constant, first_undefined = _singular_run(values, target, backend)
    if first_constant is not None:
        report.observed_step = first_constant - 1
    report.details['first_undefined_row'] = first_undefined
    if m % 2 == 0 and 2 in zt.rows():
        # the P-net p_1 = z~_2 has vanishing alternating inverse sum for even m
        p1 = [zt.value(2 * n, 2) for n in range(m)]
        identity = alternating_inverse_sum(p1)
        report.details['alternating_identity'] = identity
        if not identity.is_zero():
            report.violations.append({'alternating_identity': identity})

    final = zt.constant_row(target)
    report.value = final
    if final is None:
        report.violations.append({'row': target, 'values': list(zt.row(target).values())})
    elif final != expected:
        report.violations.append({'harmonic_mean': expected, 'observed': final})
    if first_undefined is not None and first_undefined < target:
        report.violations.append({'early_undefined_row': first_undefined})
    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"Discrete holomorphic {variant} singularity m={m}: "
                f"{'pass' if report.passed else 'FAIL'} value={report.value}")
    return report


def experiment_pnet_vs_icr(zt: LatticeMap, i: int, j: int) -> CheckReport:
    """
    Compare p_{i,j} computed from the P-net rows through A_{j-1} with the
    discrete holomorphic evaluation of the same value through A_{2j-2}.
    Report only.
    """
    p, _ = dhol_split_pnets(zt)
    report = CheckReport(name='pnet_vs_icr', passed=False, report_only=True)
    small = pnet_explicit(p, i, j)
    large = dhol_explicit(zt, from_rotated(2 * i, 2 * j))
    report.details.update({'site': (i, j), 'pnet_value': small, 'dhol_value': large,
                           'pnet_diamond': j - 1, 'dhol_diamond': 2 * j - 2})
    report.value = small
    report.passed = small == large
    if not report.passed:
        logger.warning(f"P-net and discrete holomorphic evaluations differ at {(i, j)}")
    return report


# ---------------------------------------------------------------------------
# Orthogonal circle patterns
# ---------------------------------------------------------------------------

def ocp_from_rows(points: Sequence, centers: Sequence, periodic: bool = True, backend=EXACT,
                  rows: int = 0) -> LatticeMap:
    """
    z~ with the points p_{l,0} on the even sites of row 0 and the centres
    t_{l,0} on the odd sites of row 1, propagated ``rows`` further rows.
    """
    zt = rotated_rows(points, centers, periodic=periodic, backend=backend, name='ocp')
    return dhol_iterate(zt, rows) if rows else zt


def ocp_check(zt: LatticeMap) -> List[Dict]:
    """
    Violations of the orthogonal circle pattern conditions: every circle
    t_{i,j} passes through p_{i,j}, p_{i+1,j}, p_{i,j+1}, p_{i+1,j+1},
    neighbouring circles are orthogonal, and p and t are P-nets.
    """
    p, t = dhol_split_pnets(zt)
    bad: List[Dict] = []
    for (i, j), center in t.items():
        corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
        if not all(c in p for c in corners):
            continue
        if not equidistant(center, [p.value(*c) for c in corners]):
            bad.append({'circle': (i, j), 'problem': 'points not concyclic'})
            continue
        r2 = squared_distance(center, p.value(i, j))
        for neighbour in ((i + 1, j), (i, j + 1)):
            if neighbour not in t or neighbour not in p:
                continue
            other = t.value(*neighbour)
            other_r2 = squared_distance(other, p.value(*neighbour))
            if not orthogonal_circles(center, r2, other, other_r2):
                bad.append({'circles': ((i, j), neighbour), 'problem': 'not orthogonal'})
    for name, net in (('points', p), ('centers', t)):
        for cell in pnet_violations(net):
            bad.append({'vertex': cell, 'problem': f'{name} are not a P-net'})
    return bad


def ocp_explicit(zt: LatticeMap, i: int, k: int, method: str = 'kernel') -> Dict[str, ProjValue]:
    """p_{i,k} and t_{i,k} from the first two rows of each P-net."""
    p, t = dhol_split_pnets(zt)
    return {'p': pnet_explicit(p, i, k, method=method), 't': pnet_explicit(t, i, k, method=method)}


def make_square_ocp(size: int = 3, backend=EXACT, rows: int = 4) -> LatticeMap:
    """
    The square grid pattern p_{i,j} = i + j*1j, t_{i,j} = p_{i,j} + (1 + 1j)/2,
    on the finite window i in [-size, size] of row 0.
    """
    half = Fraction(1, 2)
    points = [GaussianRational(n) for n in range(-size, size + 1)]
    centers = [GaussianRational(n + half, half) for n in range(-size, size + 1)]
    return ocp_from_rows(points, centers, periodic=False, backend=backend, rows=rows)


def _draw_ocp_chain(m: int, rng: random.Random, backend) -> List[ProjValue]:
    factors = []
    for _ in range(m - 1):
        value = Fraction(0)
        while value == 0:
            value = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        factors.append(value)
    product = Fraction(1)
    for f in factors:
        product *= f
    factors.append(Fraction((-1) ** (m // 2)) / product)

    start = random_value(rng, backend)
    while start.is_zero():
        start = random_value(rng, backend)
    quarter = ProjValue.of(GaussianRational(0, 1), backend)
    centers = [start]
    for f in factors[:-1]:
        centers.append(centers[-1] * quarter * ProjValue.of(f, backend))
    closing = centers[-1] * quarter * ProjValue.of(factors[-1], backend)
    if closing != start:
        raise ValueError("Orthogonal circle chain does not close")
    return centers


def _ocp_chain_is_generic(centers: Sequence[ProjValue], backend) -> bool:
    """Pairwise distinct centres and defined point rows up to the collapse."""
    if any(a == b for n, a in enumerate(centers) for b in centers[n + 1:]):
        return False
    m = len(centers)
    zt, _, _ = _singular_run(centers, 2 * m - 2, backend)
    return all(not v.is_undefined for row in range(2, 2 * m - 1, 2) for v in zt.row(row).values())


def make_singular_ocp(m: int, seed: int = DEFAULT_SEED, backend=EXACT) -> List[ProjValue]:
    """
    Centres t_{l,0} of m orthogonal circles through the point 0.

    Consecutive centres satisfy t_{l+1} = i * lambda_l * t_l with rational
    lambda_l; closing up after m circles needs m even and
    prod(lambda) = (-1)^(m/2). Chains with repeated centres, or whose point
    rows go undefined before the collapse, are redrawn.
    """
    if m < 2 or m % 2:
        raise ValueError("A closed chain of orthogonal circles through one point needs an even m >= 2")
    rng = random.Random(seed)
    for attempt in range(OCP_ATTEMPTS):
        centers = _draw_ocp_chain(m, rng, backend)
        if _ocp_chain_is_generic(centers, backend):
            if attempt:
                logger.debug(f"Orthogonal circle chain m={m} accepted after {attempt + 1} draws")
            return centers
    raise ValueError(f"No generic orthogonal circle chain for m={m} after {OCP_ATTEMPTS} draws")


def check_ocp_singularity(centers: Sequence, backend=EXACT) -> CheckReport:
    """
    Orthogonal circles through the point 0 (p_0 = 0): after m-2 P-net steps
    the row p_{m-1} is constant, equal to the harmonic mean of p_1 and of t_0.
    """
    values = [ProjValue.of(v, backend) for v in centers]
    m = len(values)
    steps = m - 2
    report = CheckReport(name='ocp_singularity', passed=False, steps=steps, predicted_step=steps)
    if m % 2:
        report.violations.append('the points-row collapse needs an even m')
        return report
    quarter_turns = [values[(n + 1) % m] / (values[n] * ProjValue.of(GaussianRational(0, 1), backend))
                     for n in range(m)]
    if not all(f.is_real() for f in quarter_turns):
        report.violations.append('consecutive circles are not orthogonal')
        return report

    target = 2 * m - 2
    zt, _, first_undefined = _singular_run(values, target, backend)
    p, t = dhol_split_pnets(zt)
    first_constant = None
    for row in range(1, m):
        if p.constant_row(row) is not None:
            first_constant = row
            break
    if first_constant is not None:
        report.observed_step = first_constant - 1
    mean_points = harmonic_mean([p.value(n, 1) for n in range(m)])
    mean_centers = harmonic_mean(values)
    report.details.update({'harmonic_mean_points': mean_points, 'harmonic_mean_centers': mean_centers,
                           'dhol_steps': target - 1, 'first_undefined_row': first_undefined})
    if mean_points != mean_centers:
        report.violations.append({'harmonic_mean_points': mean_points, 'harmonic_mean_centers': mean_centers})
    final = p.constant_row(m - 1)
    report.value = final
    if final is None:
        report.violations.append({'row': m - 1, 'values': list(p.row(m - 1).values())})
    elif final != mean_centers:
        report.violations.append({'harmonic_mean': mean_centers, 'observed': final})
    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"Orthogonal circle pattern singularity m={m}: {'pass' if report.passed else 'FAIL'}")
    return report
