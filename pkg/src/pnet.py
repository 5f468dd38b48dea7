"""
P-nets: maps p: Z^2 -> C whose four inverse differences at every vertex sum to zero

Rows are propagated upwards: p_{i,j+1} is determined by p_{i,j-1} and the
three values p_{i-1,j}, p_{i,j}, p_{i+1,j} of the row below. Embedded into
dSKP via a_{i,j} = p_{i,[i+j]_2}, so that x(i, j, k) = p_{i,k}.
"""

import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from config import DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT
from dimer import explicit_value
from field import EXACT, ProjValue, harmonic_mean, inv, multi_ratio6, random_value
from planar import LatticeMap, const, lazy_initial_data
from reports import CheckReport

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


def pnet_defect(p: LatticeMap, i: int, j: int) -> ProjValue:
    """1/(p_E - p) - 1/(p_N - p) + 1/(p_W - p) - 1/(p_S - p) at vertex (i, j)."""
    center = p.value(i, j)
    east, north, west, south = (p.value(*c) for c in ((i + 1, j), (i, j + 1), (i - 1, j), (i, j - 1)))
    return inv(east - center) - inv(north - center) + inv(west - center) - inv(south - center)


def pnet_violations(p: LatticeMap) -> List[Cell]:
    """Interior vertices with a nonzero (or undefined) defect."""
    bad = []
    for (i, j), _ in p.items():
        if not all(c in p for c in ((i + 1, j), (i, j + 1), (i - 1, j), (i, j - 1))):
            continue
        if not pnet_defect(p, i, j).is_zero():
            bad.append((i, j))
    return bad


def pnet_relation(p: LatticeMap, i: int, j: int) -> ProjValue:
    """The six-point multi-ratio of the vertex star; -1 on a P-net."""
    center = p.value(i, j)
    return multi_ratio6(center, p.value(i + 1, j), p.value(i, j + 1), center,
                        p.value(i - 1, j), p.value(i, j - 1))


def _solve_up(center: ProjValue, east: ProjValue, west: ProjValue, south: ProjValue) -> ProjValue:
    total = inv(east - center) + inv(west - center) - inv(south - center)
    return center + inv(total)


def pnet_step(p: LatticeMap, j: int) -> Dict[int, ProjValue]:
    """Compute and store row j+1 from rows j-1 and j."""
    sites = p.sites(j) if p.period is not None else [
        i for i in p.sites(j) if (i - 1, j) in p and (i + 1, j) in p and (i, j - 1) in p]
    row = {}
    for i in sites:
        row[i] = _solve_up(p.value(i, j), p.value(i + 1, j), p.value(i - 1, j), p.value(i, j - 1))
    for i, v in row.items():
        p.set(i, j + 1, v)
    undefined = [i for i, v in row.items() if v.is_undefined]
    if undefined:
        logger.debug(f"P-net row {j + 1}: undefined at {undefined}")
    return row


def pnet_iterate(p: LatticeMap, steps: int, start: int = 1) -> LatticeMap:
    """Apply ``steps`` row steps, the first one computing row start+1."""
    for j in range(start, start + steps):
        pnet_step(p, j)
    return p


def pnet_from_rows(row0: Sequence, row1: Sequence, periodic: bool = True, backend=EXACT,
                   offset: int = 0) -> LatticeMap:
    """Two initial rows; periodic rows need equal lengths (the period m)."""
    if periodic:
        if len(row0) != len(row1):
            raise ValueError("Periodic rows need the same length")
        p = LatticeMap.row_periodic(len(row1), backend=backend, name='p')
    else:
        p = LatticeMap(backend=backend, name='p')
    for n, v in enumerate(row0):
        p.set(n + offset, 0, v)
    for n, v in enumerate(row1):
        p.set(n + offset, 1, v)
    return p


def pnet_initial_data(p: LatticeMap):
    """a_{i,j} = p_{i,[i+j]_2}."""
    return lazy_initial_data(lambda i, j: p.value(i, (i + j) % 2), backend=p.backend,
                             metadata={'kind': 'pnet'})


def pnet_explicit(p: LatticeMap, i: int, k: int, method: str = 'kernel',
                  max_size: Optional[int] = None) -> ProjValue:
    """p_{i,k} from rows 0 and 1 through the diamond A_{k-1} centred at a_{i,i+k} = p_{i,[k]_2}."""
    if k < 1:
        raise ValueError("pnet_explicit needs k >= 1")
    return explicit_value(pnet_initial_data(p), (i, i + k, k), method=method, max_size=max_size)


# ---------------------------------------------------------------------------
# Singular data
# ---------------------------------------------------------------------------

def alternating_inverse_sum(values: Sequence[ProjValue]) -> ProjValue:
    total = const(0, values[0])
    for n, v in enumerate(values):
        total = total + inv(v) if n % 2 == 0 else total - inv(v)
    return total


def make_premature_row(m: int, seed: int = DEFAULT_SEED, backend=EXACT) -> List[ProjValue]:
    """
    m values with vanishing alternating inverse sum (m even).

    The first m-1 values are random; the last one solves the constraint.
    """
    if m < 2 or m % 2:
        raise ValueError("The premature constraint needs an even period m >= 2")
    rng = random.Random(seed)
    while True:
        head = [random_value(rng, backend) for _ in range(m - 1)]
        partial = alternating_inverse_sum(head)
        if partial.is_zero() or not partial.is_finite:
            continue
        last = inv(partial)
        values = head + [last]
        if all(v.is_finite and not v.is_zero() for v in values):
            return values


def check_pnet_singularity(p1: Sequence, variant: str = 'standard', backend=EXACT) -> CheckReport:
    """
    Singularity of an m-closed P-net with p_0 = 0.

    standard: p_m is constant, equal to the harmonic mean of p_1, after m-1
    steps. premature: for m even with vanishing alternating inverse sum,
    p_{m-1} is already constant after m-2 steps.
    """
    values = [ProjValue.of(v, backend) for v in p1]
    m = len(values)
    if variant not in ('standard', 'premature'):
        raise ValueError(f"Unknown variant: {variant}")
    target_row = m if variant == 'standard' else m - 1
    steps = target_row - 1
    report = CheckReport(name=f'pnet_{variant}', passed=False, steps=steps, predicted_step=steps)
    expected = harmonic_mean(values)
    report.details['harmonic_mean'] = expected
    if variant == 'premature':
        constraint = alternating_inverse_sum(values)
        report.details['alternating_inverse_sum'] = constraint
        if m % 2 or not constraint.is_zero():
            report.violations.append('premature variant needs m even and a vanishing alternating sum')
            return report

    p = pnet_from_rows([0] * m, values, backend=backend)
    for j in range(1, target_row):
        pnet_step(p, j)
        row = j + 1
        common = p.constant_row(row)
        if common is not None and report.observed_step is None:
            report.observed_step = row - 1
            if row < target_row:
                report.details['early_row'] = row
        undefined = [i for i, v in p.row(row).items() if v.is_undefined]
        if undefined and row < target_row:
            report.violations.append({'row': row, 'undefined_sites': undefined})
            break

    final = p.constant_row(target_row)
    report.value = final
    if final is None:
        report.violations.append({'row': target_row, 'values': list(p.row(target_row).values())})
    elif final != expected:
        report.violations.append({'harmonic_mean': expected, 'observed': final})
    report.passed = not report.violations and report.observed_step == steps
    logger.info(f"P-net {variant} singularity m={m}: {'pass' if report.passed else 'FAIL'} "
                f"value={report.value}")
    return report
