"""
Acceptance suite over the scenario systems

Every case is an ordinary scenario document plus the verdict it must
produce: ``pass``, ``fail`` (negative controls) or ``report`` for
experiments, which are printed but never gate the suite.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from config import LOG_LEVEL, LOG_FORMAT, MAX_AZTEC_SIZE
from scenarios import Scenario, run_scenario

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

EXPECTATIONS = ('pass', 'fail', 'report')


@dataclass
class SelfTestCase:
    theorem: str
    doc: Dict[str, Any]
    expect: str = 'pass'

    @property
    def name(self) -> str:
        return self.doc['name']


def case(theorem: str, system: str, name: str, expect: str = 'pass', backend: str = 'exact',
         data: Optional[Dict[str, Any]] = None, **params) -> SelfTestCase:
    doc = {'name': name, 'system': system, 'backend': backend, 'params': params}
    if data:
        doc['data'] = data
    return SelfTestCase(theorem, doc, expect)


def build_cases() -> List[SelfTestCase]:
    cases = [
        case('dimer oracles', 'dskp_oracles', 'oracles_k5', instances=20, kmax=5, gauges=10),
        case('N-matrix', 'dskp_nmat', 'nmat_m3_k5', instances=20, m=3, kmax=5),
        case('Dodgson harmonic mean', 'dskp_dodgson', 'dodgson_cyclic_m3', m=3, p=1,
             data={'values': ['2', '3', '-1+1*i']}),
    ]
    cases += [case('Dodgson constancy', 'dskp_dodgson', f'dodgson_m{m}', m=m, seed=m) for m in range(2, 7)]
    cases += [case('Devron coincidence', 'dskp_devron', f'devron_m{m}_p{p}', m=m, p=p, seed=10 * m + p)
              for m in range(2, 6) for p in (1, 2, 3)]

    cases += [case('Miquel explicit', 'explicit', 'miquel_explicit', family='miquel', kmax=4)]
    cases += [case('Miquel Dodgson', 'miquel_dodgson', f'miquel_m{m}', m=m, seed=m) for m in (2, 3, 4)]

    cases += [case('P-net explicit', 'explicit', 'pnet_explicit', family='pnet', kmax=3)]
    cases += [case('P-net singularity', 'pnet_singularity', f'pnet_m{m}_sing', m=m, seed=m) for m in range(2, 8)]
    cases += [case('P-net premature', 'pnet_singularity', f'pnet_m{m}_premature', m=m, seed=m,
                   variant='premature') for m in (4, 6)]

    cases += [case('cross-ratio explicit', 'explicit', 'icr_explicit', family='icr')]
    cases += [case('cross-ratio singularity', 'icr_singularity', f'icr_m{m}_sing', m=m, seed=m) for m in (2, 3, 4)]
    cases.append(case('cross-ratio singularity', 'icr_singularity', 'icr_m3_labels', m=3, seed=5, cylinder=False,
                      labels={'alpha': [2, 3, 5], 'beta': [7, 11, 13]}))

    cases += [case('holomorphic explicit', 'explicit', 'dhol_explicit', family='dhol', kmax=3)]
    cases += [case('holomorphic singularity', 'dhol_singularity', f'dhol_m{m}_sing', m=m, seed=m)
              for m in range(2, 7)]
    cases += [case('holomorphic premature', 'dhol_singularity', f'dhol_m{m}_premature', m=m, seed=m,
                   variant='premature') for m in (4, 6)]
    cases += [case('orthogonal circles', 'ocp_singularity', f'ocp_m{m}', m=m, seed=m) for m in (4, 6)]

    cases += [case('recutting', 'recut_singularity', f'recut_m{m}', m=m, seed=m) for m in range(2, 6)]
    cases += [case('CID Dodgson', 'cid_dodgson', f'cid_dodgson_m{m}', m=m, seed=m) for m in (3, 4, 5)]
    cases += [case('CID Devron', 'cid_devron', f'cid_devron_m{m}', m=m, seed=m) for m in (3, 4, 5)]

    cases += [case('pentagram explicit', 'explicit', 'pentagram_explicit', family='pentagram', kmax=3)]
    cases += [case('pentagram Dodgson', 'pentagram_dodgson', f'pentagram_dodgson_m{m}', m=m, seed=m)
              for m in range(2, 6)]
    cases += [case('corrugated Dodgson', 'pentagram_dodgson', f'corrugated_dodgson_m{m}', m=m, N=3, seed=m)
              for m in (2, 3)]
    cases += [case('pentagram Devron', 'pentagram_devron', f'pentagram_devron_m{m}', m=m, seed=m) for m in (3, 4)]
    cases.append(case('pentagram Devron', 'pentagram_devron', 'pentagram_devron_generic', expect='fail',
                      m=4, seed=4, generic=True))

    cases += [case('hyperplane explicit', 'explicit', 'hyperplane_explicit', family='hyperplane', kmax=3)]
    cases += [case('hyperplane singularity', 'hyperplane_singularity', f'hyperplane_m{m}', backend='float',
                   m=m, seed=m) for m in (5, 6)]
    cases.append(case('hyperplane singularity', 'hyperplane_singularity', 'hyperplane_generic', expect='fail',
                      m=4, seed=4, generic=True))

    cases += [
        case('recutting value', 'recut_experiment', 'recut_value_m3', expect='report', m=3, seed=3),
        case('pentagram coincidences', 'pentagram_devron', 'pentagram_pattern_m4', expect='report', m=4, seed=4),
        case('paired diagonals', 'pair_experiment', 'pairsing_m4_p2', expect='report', m=4, p=2, seed=3),
        case('P-net or cross-ratio', 'dhol_experiment', 'pnet_vs_icr', expect='report', m=4, i=1, j=2, seed=8),
    ]
    return cases


@dataclass
class SelfTestResult:
    rows: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [row for row in self.rows if row['status'] in ('FAILED', 'ERROR')]

    def to_frame(self) -> pd.DataFrame:
        columns = ['theorem', 'scenario', 'expect', 'pass', 'observed_step', 'seconds', 'status']
        return pd.DataFrame(self.rows, columns=columns)


def run_case(test: SelfTestCase, max_aztec: int = MAX_AZTEC_SIZE) -> Dict[str, Any]:
    row = {'theorem': test.theorem, 'scenario': test.name, 'expect': test.expect, 'pass': None,
           'observed_step': None}
    start = time.perf_counter()
    try:
        report = run_scenario(Scenario.from_dict(test.doc), max_aztec=max_aztec).report
    except Exception as e:
        row['seconds'] = round(time.perf_counter() - start, 2)
        if test.expect == 'report':
            logger.warning(f"Experiment '{test.name}' raised: {e}")
            row['status'] = 'report-only'
        else:
            logger.error(f"Self-test case '{test.name}' raised: {e}")
            row['status'] = 'ERROR'
        return row
    row.update({'pass': report.passed, 'observed_step': report.observed_step,
                'seconds': round(time.perf_counter() - start, 2)})
    if test.expect == 'report' or report.report_only:
        row['status'] = 'report-only'
    elif report.passed == (test.expect == 'pass'):
        row['status'] = 'ok'
    else:
        row['status'] = 'FAILED'
        logger.warning(f"{test.theorem}: '{test.name}' expected {test.expect}, violations {report.violations[:3]}")
    return row


def run_selftest(name_filter: Optional[str] = None, max_aztec: int = MAX_AZTEC_SIZE) -> SelfTestResult:
    """Run every case whose scenario or theorem name contains ``name_filter``."""
    result = SelfTestResult()
    for test in build_cases():
        if name_filter and name_filter not in test.name and name_filter not in test.theorem:
            continue
        logger.info(f"Self-test: {test.theorem} / {test.name}")
        result.rows.append(run_case(test, max_aztec))
    return result


def print_matrix(result: SelfTestResult) -> None:
    frame = result.to_frame()
    print("\n" + "=" * 50)
    print("SELF-TEST MATRIX")
    print("=" * 50)
    if frame.empty:
        print("No cases selected")
        return
    print(frame.to_string(index=False))
    summary = frame.groupby('theorem', sort=False)['status'].agg(lambda s: 'FAILED' if any(
        v in ('FAILED', 'ERROR') for v in s) else ('report-only' if all(v == 'report-only' for v in s) else 'ok'))
    print("\nPer theorem:")
    for theorem, status in summary.items():
        print(f"  {theorem:<28} {status}")
    print(f"\n{len(frame)} case(s), {len(result.failures)} failure(s)")
