"""
Scenario files: one flat JSON schema for every system

{
    "name": "pnet_m3_sing",
    "system": "pnet_singularity",
    "backend": "exact",
    "params": {"m": 3, "seed": 7},
    "data": {"values": ["1", "3", "-2+1/2*i"]},
    "outputs": ["report", "csv", "svg"]
}

``data`` is optional: generators fill in whatever it leaves out.
"""

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd

from config import DEFAULT_BACKEND, DEFAULT_SEED, LOG_LEVEL, LOG_FORMAT, MAX_AZTEC_SIZE, SUPPORTED_BACKENDS
from field import (
    DSKPError, SingularMatrixError, format_value, get_backend, parse_value, random_value, random_values
)
from reports import CheckReport
from render import Scene, circle_scene, diamond_scene, polygon_scene

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

OUTPUTS = ('report', 'csv', 'svg')


class ScenarioError(DSKPError):
    """A scenario file does not match the schema; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Scenario:
    name: str
    system: str
    backend: str = DEFAULT_BACKEND
    params: Dict[str, Any] = field(default_factory=dict)
    data: Dict[str, Any] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=lambda: ['report'])
    source: Optional[Path] = None

    @staticmethod
    def from_dict(doc: Any, source: Optional[Path] = None) -> 'Scenario':
        """
        Raises:
            ScenarioError: schema violation, with the JSON path of the offending entry
        """
        if not isinstance(doc, Mapping):
            raise ScenarioError('$', 'expected an object')
        unknown = sorted(set(doc) - {'name', 'system', 'backend', 'params', 'data', 'outputs', 'description'})
        if unknown:
            raise ScenarioError(f'$.{unknown[0]}', 'unknown key')
        system = doc.get('system')
        if system not in SYSTEMS:
            raise ScenarioError('$.system', f"expected one of {sorted(SYSTEMS)}, got {system!r}")
        backend = doc.get('backend', DEFAULT_BACKEND)
        if backend not in SUPPORTED_BACKENDS:
            raise ScenarioError('$.backend', f"expected one of {list(SUPPORTED_BACKENDS)}, got {backend!r}")
        for key in ('params', 'data'):
            if not isinstance(doc.get(key, {}), Mapping):
                raise ScenarioError(f'$.{key}', 'expected an object')
        outputs = doc.get('outputs', ['report'])
        if not isinstance(outputs, list):
            raise ScenarioError('$.outputs', 'expected a list')
        for index, output in enumerate(outputs):
            if output not in OUTPUTS:
                raise ScenarioError(f'$.outputs[{index}]', f"expected one of {list(OUTPUTS)}, got {output!r}")
        default_name = source.stem if source is not None else system
        scenario = Scenario(name=str(doc.get('name', default_name)), system=system, backend=backend,
                            params=dict(doc.get('params', {})), data=dict(doc.get('data', {})),
                            outputs=list(outputs), source=source)
        SYSTEMS[system].validate(scenario)
        return scenario

    @staticmethod
    def load(path: Union[str, Path]) -> 'Scenario':
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError:
            raise ScenarioError('$', f"no such file: {path}")
        except json.JSONDecodeError as e:
            raise ScenarioError(f'$ (line {e.lineno}, column {e.colno})', f"invalid JSON: {e.msg}")
        return Scenario.from_dict(doc, source=path)

    # parameter access ------------------------------------------------------
    def int_param(self, key: str, default: Optional[int] = None, minimum: Optional[int] = None) -> int:
        value = self.params.get(key, default)
        if value is None:
            raise ScenarioError(f'$.params.{key}', 'required')
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f'$.params.{key}', f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            raise ScenarioError(f'$.params.{key}', f"expected an integer >= {minimum}, got {value}")
        return value

    def choice_param(self, key: str, choices: Sequence[str], default: str) -> str:
        value = self.params.get(key, default)
        if value not in choices:
            raise ScenarioError(f'$.params.{key}', f"expected one of {list(choices)}, got {value!r}")
        return value

    def bool_param(self, key: str, default: bool) -> bool:
        value = self.params.get(key, default)
        if not isinstance(value, bool):
            raise ScenarioError(f'$.params.{key}', f"expected true or false, got {value!r}")
        return value

    @property
    def seed(self) -> int:
        return self.int_param('seed', DEFAULT_SEED)

    @property
    def scalar_backend(self):
        return get_backend(self.backend)

    def values(self, key: str = 'values', count: Optional[int] = None) -> List:
        """Inline values from ``data`` or ``count`` random ones."""
        backend = self.scalar_backend
        if key in self.data:
            raw = self.data[key]
            if not isinstance(raw, list) or not raw:
                raise ScenarioError(f'$.data.{key}', 'expected a non-empty list')
            result = []
            for index, text in enumerate(raw):
                try:
                    result.append(parse_value(str(text), backend))
                except (ValueError, TypeError) as e:
                    raise ScenarioError(f'$.data.{key}[{index}]', f"not a value: {e}")
            return result
        if count is None:
            raise ScenarioError(f'$.data.{key}', 'required')
        return random_values(random.Random(self.seed), count, backend)


@dataclass
class RunResult:
    report: CheckReport
    table: Optional[pd.DataFrame] = None
    scene: Optional[Scene] = None


@dataclass
class System:
    name: str
    runner: Callable[[Scenario, int], RunResult]
    checker: Callable[[Scenario], None]
    description: str = ''

    def validate(self, scenario: Scenario) -> None:
        self.checker(scenario)

    def run(self, scenario: Scenario, max_aztec: int = MAX_AZTEC_SIZE) -> RunResult:
        return self.runner(scenario, max_aztec)


SYSTEMS: Dict[str, System] = {}


def system(name: str, checker: Callable[[Scenario], None], description: str = ''):
    """Register a runner under ``name``."""
    def decorator(runner: Callable[[Scenario, int], RunResult]):
        SYSTEMS[name] = System(name, runner, checker, description)
        return runner
    return decorator


def needs(*keys: str, minimum: int = 1) -> Callable[[Scenario], None]:
    """Checker requiring integer parameters ``keys`` (each >= minimum)."""
    def check(scenario: Scenario) -> None:
        for key in keys:
            scenario.int_param(key, minimum=minimum)
        scenario.seed
    return check


def _m_or_values(minimum: int) -> Callable[[Scenario], None]:
    def check(scenario: Scenario) -> None:
        if 'values' not in scenario.data:
            scenario.int_param('m', minimum=minimum)
        else:
            scenario.values()
        scenario.seed
    return check


def _row_values(scenario: Scenario) -> List:
    return scenario.values(count=scenario.params.get('m'))


# ---------------------------------------------------------------------------
# dSKP and dimers
# ---------------------------------------------------------------------------

def _check_oracles(scenario: Scenario) -> None:
    needs('instances')(scenario)
    scenario.int_param('kmax', minimum=2)
    scenario.int_param('gauges', 2, minimum=0)


@system('dskp_oracles', _check_oracles,
        'propagation, matching enumeration and the kernel agree; Y is gauge invariant')
def run_oracles(scenario: Scenario, max_aztec: int) -> RunResult:
    from dskp import random_initial_data, value_at
    from dimer import AztecDiamond, default_kasteleyn, explicit_value, random_regauge, ratio_Y, weights_from_initial

    instances = scenario.int_param('instances', minimum=1)
    kmax = scenario.int_param('kmax', minimum=2)
    gauges = scenario.int_param('gauges', 2, minimum=0)
    report = CheckReport(name='dskp_oracles', passed=False, steps=kmax)
    rows = []
    for n in range(instances):
        window = range(-kmax - 1, kmax + 3)
        init = random_initial_data(window, window, seed=scenario.seed + n, backend=scenario.scalar_backend)
        for k in range(2, kmax + 1):
            target = (k % 2, 0, k)
            values = {'dskp': value_at(init, *target), 'kernel': explicit_value(init, target, 'kernel')}
            if k - 1 <= max_aztec:
                values['matchings'] = explicit_value(init, target, 'ratio', max_size=max_aztec)
                diamond = AztecDiamond(target[:2], k - 1)
                weights = weights_from_initial(init, target[:2], k - 1)
                for g in range(gauges):
                    orientation = random_regauge(default_kasteleyn(diamond), seed=scenario.seed + 31 * n + g)
                    values[f'gauge_{g}'] = ratio_Y(diamond, weights, orientation=orientation, max_size=max_aztec)
            agree = all(v == values['dskp'] for v in values.values())
            if not agree:
                report.violations.append({'instance': n, 'k': k, 'values': values})
            rows.append({'instance': n, 'k': k, 'agree': agree,
                         **{key: format_value(v) for key, v in values.items()}})
    report.passed = not report.violations
    report.details['comparisons'] = len(rows)
    return RunResult(report, table=pd.DataFrame(rows))


@system('dskp_nmat', needs('instances', 'm', 'kmax'),
        'the N-matrix formula agrees with propagation on constant-even-layer data')
def run_nmat(scenario: Scenario, max_aztec: int) -> RunResult:
    from dskp import nmat_value, random_dodgson, value_at
    from field import ProjValue

    m = scenario.int_param('m', minimum=1)
    kmax = scenario.int_param('kmax', minimum=1)
    backend = scenario.scalar_backend
    d = ProjValue.of(scenario.params.get('d', 0), backend)
    report = CheckReport(name='nmat', passed=False, steps=kmax)
    singular = 0
    for n in range(scenario.int_param('instances', minimum=1)):
        init = random_dodgson(m, d=d, seed=scenario.seed + n, backend=backend)
        for k in range(1, kmax + 1):
            target = (k % 2, 0, k)
            try:
                value = nmat_value(init, target, d=d)
            except SingularMatrixError:
                singular += 1
                continue
            if value != value_at(init, *target):
                report.violations.append({'instance': n, 'k': k})
    report.details['singular_matrices'] = singular
    report.passed = not report.violations
    return RunResult(report)


@system('dskp_dodgson', needs('m'), 'constancy at height m for m-Dodgson data')
def run_dodgson(scenario: Scenario, max_aztec: int) -> RunResult:
    from dskp import check_dodgson, dodgson_targets, make_dodgson_cyclic, propagate, random_dodgson
    from field import ProjValue

    m = scenario.int_param('m')
    backend = scenario.scalar_backend
    if 'values' in scenario.data:
        init = make_dodgson_cyclic(m, 0, scenario.values(), p=scenario.int_param('p', 1), backend=backend)
    else:
        init = random_dodgson(m, d=ProjValue.of(scenario.params.get('d', 1), backend), seed=scenario.seed,
                              backend=backend)
    slab = propagate(init, targets=dodgson_targets(m))
    return RunResult(check_dodgson(slab, m, init), table=slab.to_frame())


@system('dskp_devron', needs('m', 'p'), 'diagonal coincidence for (m,p)-Devron data')
def run_devron(scenario: Scenario, max_aztec: int) -> RunResult:
    from dskp import check_devron, devron_targets, make_devron, propagate

    m, p = scenario.int_param('m', minimum=2), scenario.int_param('p')
    slab = propagate(make_devron(m, p, seed=scenario.seed, backend=scenario.scalar_backend),
                     targets=devron_targets(m, p))
    return RunResult(check_devron(slab, m, p), table=slab.to_frame())


def _check_even_pair(scenario: Scenario) -> None:
    for key in ('m', 'p'):
        if scenario.int_param(key, minimum=2) % 2:
            raise ScenarioError(f'$.params.{key}', 'expected an even integer')
    scenario.seed


@system('pair_experiment', _check_even_pair, 'paired-diagonal singularity experiment (report only)')
def run_pair_experiment(scenario: Scenario, max_aztec: int) -> RunResult:
    from dskp import experiment_pairsing

    return RunResult(experiment_pairsing(scenario.int_param('m'), scenario.int_param('p'), seed=scenario.seed,
                                         backend=scenario.scalar_backend))


@system('aztec', needs('k', minimum=0), 'an Aztec diamond with a sample dimer configuration')
def run_aztec(scenario: Scenario, max_aztec: int) -> RunResult:
    from dimer import build_aztec, count_matchings, sample_matching

    k = scenario.int_param('k', minimum=0)
    diamond = build_aztec((0, 0), k)
    report = CheckReport(name='aztec', passed=True, steps=k)
    report.details.update(diamond.counts())
    if k <= max_aztec:
        report.details['perfect_matchings'] = count_matchings(diamond, max_size=max_aztec)
    matching = sample_matching(diamond, seed=scenario.seed)
    return RunResult(report, scene=diamond_scene(diamond, matching, title=f'Aztec diamond A_{k}'))


# ---------------------------------------------------------------------------
# Planar systems
# ---------------------------------------------------------------------------

@system('miquel_dodgson', needs('m', minimum=2), 'Dodgson circle patterns collapse after m-1 Miquel steps')
def run_miquel(scenario: Scenario, max_aztec: int) -> RunResult:
    from miquel import check_miquel_dodgson, make_dodgson_circle_pattern, miquel_point_step

    m = scenario.int_param('m', minimum=2)
    pattern = make_dodgson_circle_pattern(m, seed=scenario.seed, backend=scenario.scalar_backend)
    report = check_miquel_dodgson(pattern, m)
    states = [pattern]
    for k in range(1, m):
        states.append(miquel_point_step(states[-1], (k - 1) % 2)[0])
    return RunResult(report, scene=circle_scene(states, title=f'Miquel Dodgson m={m}'))


@system('pnet_singularity', _m_or_values(2), 'closed P-nets through 0 reach the harmonic mean')
def run_pnet(scenario: Scenario, max_aztec: int) -> RunResult:
    from pnet import check_pnet_singularity, make_premature_row

    variant = scenario.choice_param('variant', ('standard', 'premature'), 'standard')
    if variant == 'premature' and 'values' not in scenario.data:
        values = make_premature_row(scenario.int_param('m', minimum=2), seed=scenario.seed,
                                    backend=scenario.scalar_backend)
    else:
        values = _row_values(scenario)
    return RunResult(check_pnet_singularity(values, variant=variant, backend=scenario.scalar_backend))


def _labels(scenario: Scenario):
    from crossratio import EdgeLabels

    backend = scenario.scalar_backend
    doc = scenario.params.get('labels', 'holomorphic')
    if doc == 'holomorphic':
        return EdgeLabels.holomorphic(backend)
    if not isinstance(doc, Mapping) or 'alpha' not in doc or 'beta' not in doc:
        raise ScenarioError('$.params.labels', "expected 'holomorphic' or an object with alpha and beta")
    try:
        return EdgeLabels([parse_value(str(a), backend) for a in doc['alpha']],
                          [parse_value(str(b), backend) for b in doc['beta']],
                          gamma=parse_value(str(doc.get('gamma', 1)), backend), backend=backend)
    except ValueError as e:
        raise ScenarioError('$.params.labels', str(e))


def _check_icr(scenario: Scenario) -> None:
    _m_or_values(2)(scenario)
    _labels(scenario)


@system('icr_singularity', _check_icr, 'closed integrable cross-ratio maps through 0')
def run_icr(scenario: Scenario, max_aztec: int) -> RunResult:
    from crossratio import check_icr_singularity

    return RunResult(check_icr_singularity(_row_values(scenario), _labels(scenario), backend=scenario.scalar_backend,
                                           with_cylinder=scenario.bool_param('cylinder', True)))


@system('dhol_singularity', _m_or_values(2), 'closed discrete holomorphic maps through 0')
def run_dhol(scenario: Scenario, max_aztec: int) -> RunResult:
    from dhol import check_dhol_singularity
    from pnet import make_premature_row

    variant = scenario.choice_param('variant', ('standard', 'premature'), 'standard')
    if variant == 'premature' and 'values' not in scenario.data:
        values = make_premature_row(scenario.int_param('m', minimum=2), seed=scenario.seed,
                                    backend=scenario.scalar_backend)
    else:
        values = _row_values(scenario)
    return RunResult(check_dhol_singularity(values, variant=variant, backend=scenario.scalar_backend))


@system('dhol_experiment', needs('m', 'i', 'j'), 'P-net rows against the holomorphic evaluation (report only)')
def run_dhol_experiment(scenario: Scenario, max_aztec: int) -> RunResult:
    from crossratio import rotated_rows
    from dhol import dhol_iterate, experiment_pnet_vs_icr

    m = scenario.int_param('m')
    rng = random.Random(scenario.seed)
    backend = scenario.scalar_backend
    zt = rotated_rows(random_values(rng, m, backend), random_values(rng, m, backend), backend=backend)
    j = scenario.int_param('j')
    zt = dhol_iterate(zt, 2 * j)
    return RunResult(experiment_pnet_vs_icr(zt, scenario.int_param('i', minimum=0), j))


@system('ocp_singularity', needs('m', minimum=2), 'orthogonal circles through 0 collapse after m-2 steps')
def run_ocp(scenario: Scenario, max_aztec: int) -> RunResult:
    from dhol import check_ocp_singularity, make_singular_ocp

    centers = make_singular_ocp(scenario.int_param('m', minimum=2), seed=scenario.seed,
                                backend=scenario.scalar_backend)
    return RunResult(check_ocp_singularity(centers, backend=scenario.scalar_backend))


@system('recut_singularity', _m_or_values(2), 'recutting a polygon with every even vertex at 0')
def run_recut(scenario: Scenario, max_aztec: int) -> RunResult:
    from recutting import check_recut_singularity, polygon_at, polygon_rows, recut_iterate

    backend = scenario.scalar_backend
    values = _row_values(scenario)
    x = parse_value(str(scenario.params.get('x', '1+1*i')), backend)
    report = check_recut_singularity(values, x=x, backend=backend)
    vertices = []
    for value in values:
        vertices += [parse_value('0', backend), value]
    zt = recut_iterate(polygon_rows(vertices, backend), len(values) - 1)
    orbit = [polygon_at(zt, t) for t in range(len(values))]
    return RunResult(report, scene=polygon_scene(orbit, title='recutting'))


@system('recut_experiment', _m_or_values(2), 'closed expression for the recutting singularity (report only)')
def run_recut_experiment(scenario: Scenario, max_aztec: int) -> RunResult:
    from recutting import experiment_recut_value

    return RunResult(experiment_recut_value(_row_values(scenario), backend=scenario.scalar_backend))


def _cid_scene(points, centers, steps: int, backend, title: str) -> Scene:
    from circle_intersection import cid_iterate, cid_polygon, cid_rows
    from planar import squared_distance

    zt, wt = cid_iterate(*cid_rows(points, centers, backend), steps)
    scene = Scene(title)
    for t in range(steps + 1):
        polygon, circle_centers = cid_polygon(zt, wt, t)
        scene.add_polygon(polygon, layer=t)
        for p, c in zip(polygon, circle_centers):
            if p.is_finite and c.is_finite:
                scene.add_circle(c, squared_distance(p, c), layer=t)
    return scene


@system('cid_dodgson', needs('m', minimum=2), 'circle intersection dynamics: Dodgson collapse')
def run_cid_dodgson(scenario: Scenario, max_aztec: int) -> RunResult:
    from circle_intersection import check_cid_dodgson, make_cid_dodgson

    m = scenario.int_param('m', minimum=2)
    backend = scenario.scalar_backend
    points, centers = make_cid_dodgson(m, radius=scenario.params.get('radius', 1), seed=scenario.seed,
                                       backend=backend)
    report = check_cid_dodgson(points, centers, backend=backend)
    return RunResult(report, scene=_cid_scene(points, centers, m - 1, backend, f'CID Dodgson m={m}'))


@system('cid_devron', needs('m', minimum=3), 'circle intersection dynamics: Devron collapse')
def run_cid_devron(scenario: Scenario, max_aztec: int) -> RunResult:
    from circle_intersection import check_cid_devron, make_cid_devron

    m = scenario.int_param('m', minimum=3)
    backend = scenario.scalar_backend
    points, centers = make_cid_devron(m, seed=scenario.seed, backend=backend)
    report = check_cid_devron(points, centers, backend=backend,
                              with_intermediate=scenario.bool_param('intermediate', m <= 3))
    return RunResult(report, scene=_cid_scene(points, centers, 2 * m - 4, backend, f'CID Devron m={m}'))


# ---------------------------------------------------------------------------
# Projective systems
# ---------------------------------------------------------------------------

@system('pentagram_dodgson', needs('m', minimum=2), 'axis-aligned polygons collapse to their centroid')
def run_pentagram_dodgson(scenario: Scenario, max_aztec: int) -> RunResult:
    from pentagram import check_corr_dodgson, check_pentagram_dodgson, corr_iterate, make_axis_polygon

    m = scenario.int_param('m', minimum=2)
    N = scenario.int_param('N', 2, minimum=2)
    polygon = make_axis_polygon(m, N=N, seed=scenario.seed, backend=scenario.scalar_backend)
    report = check_pentagram_dodgson(polygon) if N == 2 else check_corr_dodgson(polygon, N)
    scene = polygon_scene(corr_iterate(polygon, m - 1, N), title=f'corrugated Dodgson N={N} m={m}')
    return RunResult(report, scene=scene)


@system('pentagram_devron', needs('m', minimum=3), 'single-axis alignment breaks down at step 2m-3')
def run_pentagram_devron(scenario: Scenario, max_aztec: int) -> RunResult:
    from pentagram import check_pentagram_devron, corr_iterate, make_generic_polygon, make_pentagram_devron

    m = scenario.int_param('m', minimum=3)
    backend = scenario.scalar_backend
    if scenario.bool_param('generic', False):
        polygon = make_generic_polygon(2 * m, seed=scenario.seed, backend=backend)
    else:
        polygon = make_pentagram_devron(m, seed=scenario.seed, backend=backend)
    report = check_pentagram_devron(polygon)
    return RunResult(report, scene=polygon_scene(corr_iterate(polygon, 2 * m - 4), title=f'pentagram Devron m={m}'))


@system('hyperplane_singularity', needs('m', minimum=4), 'osculating planes through two points')
def run_hyperplane(scenario: Scenario, max_aztec: int) -> RunResult:
    from hyperplane import check_hyp_singularity, hyp_iterate, make_osculating_polygon
    from pentagram import make_generic_polygon

    m = scenario.int_param('m', minimum=4)
    backend = scenario.scalar_backend
    if scenario.bool_param('generic', False):
        polygon = make_generic_polygon(2 * m, N=3, seed=scenario.seed, backend=backend)
    else:
        polygon, _ = make_osculating_polygon(m, seed=scenario.seed, backend=backend)
    report = check_hyp_singularity(polygon)
    return RunResult(report, scene=polygon_scene(hyp_iterate(polygon, m - 3), title=f'hyperplane map m={m}'))


# ---------------------------------------------------------------------------
# Explicit solutions against iteration
# ---------------------------------------------------------------------------

EXPLICIT_FAMILIES = ('miquel', 'pnet', 'icr', 'dhol', 'pentagram', 'hyperplane')


def _check_explicit(scenario: Scenario) -> None:
    scenario.choice_param('family', EXPLICIT_FAMILIES, 'pnet')
    scenario.choice_param('method', ('kernel', 'ratio'), 'kernel')
    scenario.int_param('kmax', 3, minimum=2)
    scenario.seed


def _explicit_sites(scenario: Scenario, max_aztec: int):
    """(site, explicit value, iterated value) triples for the chosen family."""
    family = scenario.choice_param('family', EXPLICIT_FAMILIES, 'pnet')
    method = scenario.choice_param('method', ('kernel', 'ratio'), 'kernel')
    kmax = scenario.int_param('kmax', 3, minimum=2)
    backend = scenario.scalar_backend
    rng = random.Random(scenario.seed)
    limit = max_aztec if method == 'ratio' else None

    if family == 'miquel':
        from miquel import TRealization, miquel_explicit, miquel_iterate
        from planar import LatticeMap

        size = kmax + 4
        t = TRealization(LatticeMap({(i, j): random_value(rng, backend) for i in range(-size, size + 1)
                                     for j in range(-size, size + 1)}, backend=backend, name='t'))
        states = miquel_iterate(t, kmax)
        for k in range(1, kmax + 1):
            for face in (((0, 0), (1, 1)) if k % 2 else ((1, 0), (0, 1))):
                yield face + (k,), miquel_explicit(t, face, k, method=method, max_size=limit), \
                    states[k].value(*face)
    elif family == 'icr':
        from crossratio import EdgeLabels, backlund_extend, icr_explicit, icr_iterate, rotated_rows

        labels = EdgeLabels([2, 3, 5, 7], [11, 13, 17, 19], backend=backend)
        zt = icr_iterate(rotated_rows(random_values(rng, 4, backend), random_values(rng, 4, backend),
                                      backend=backend), labels, 3)
        pair = backlund_extend(zt, labels, (0, 0), parse_value('3', backend), window=range(-4, 9))
        for site in ((1, 1), (2, 1), (3, 0)):
            values = icr_explicit(pair, site, method=method, max_size=limit)
            yield site + ('z',), values['z'], pair.z_at(*site)
            yield site + ('w',), values['w'], pair.w_at(*site)
    elif family == 'pnet':
        from pnet import pnet_explicit, pnet_from_rows, pnet_iterate

        m = scenario.int_param('m', 5, minimum=2)
        p = pnet_iterate(pnet_from_rows(random_values(rng, m, backend), random_values(rng, m, backend),
                                        backend=backend), kmax - 1)
        for k in range(2, kmax + 1):
            for i in range(min(m, 3)):
                yield (i, k), pnet_explicit(p, i, k, method=method, max_size=limit), p.value(i, k)
    elif family == 'dhol':
        from crossratio import rotated_rows, unrotated
        from dhol import dhol_explicit, dhol_iterate

        m = scenario.int_param('m', 4, minimum=2)
        zt = rotated_rows(random_values(rng, m, backend), random_values(rng, m, backend), backend=backend)
        zt = dhol_iterate(zt, kmax)
        for total in range(2, kmax + 1):
            for i in range(1, total):
                site = (total - i + 1, i)
                yield site, dhol_explicit(zt, site, method=method, max_size=limit), unrotated(zt, *site)
    elif family == 'pentagram':
        from pentagram import corr_explicit, corr_iterate, make_generic_polygon

        polygon = make_generic_polygon(scenario.int_param('n', 7, minimum=5), seed=scenario.seed, backend=backend)
        orbit = corr_iterate(polygon, kmax)
        for step in range(2, kmax + 1):
            for index in (0, len(polygon) // 2):
                yield (step, index), corr_explicit(polygon, step, index, method=method, max_size=limit), \
                    orbit[step][index]
    else:
        from hyperplane import HyperplaneOrbit, hyp_explicit, seed_companion
        from pentagram import make_generic_polygon

        polygon = make_generic_polygon(scenario.int_param('n', 7, minimum=6), N=3, seed=scenario.seed,
                                       backend=backend)
        orbit = HyperplaneOrbit(polygon, seed_companion(polygon, 2, 3))
        for step in range(2, min(kmax, 3) + 1):
            for i in (2, 3):
                yield (step, i), hyp_explicit(orbit, step, i, method=method, max_size=limit), orbit.v(step, i)


def _text(item) -> str:
    text = item.format()
    return text if isinstance(text, str) else "(" + ", ".join(text) + ")"


@system('explicit', _check_explicit, 'explicit dimer solutions agree with iterating the map')
def run_explicit(scenario: Scenario, max_aztec: int) -> RunResult:
    family = scenario.choice_param('family', EXPLICIT_FAMILIES, 'pnet')
    report = CheckReport(name=f'{family}_explicit', passed=False, steps=scenario.int_param('kmax', 3, minimum=2))
    rows = []
    for site, explicit, iterated in _explicit_sites(scenario, max_aztec):
        agree = explicit == iterated
        if not agree:
            report.violations.append({'site': list(site), 'explicit': _text(explicit), 'iterated': _text(iterated)})
        rows.append({'site': str(site), 'explicit': _text(explicit), 'iterated': _text(iterated), 'agree': agree})
    report.passed = bool(rows) and not report.violations
    report.details['comparisons'] = len(rows)
    return RunResult(report, table=pd.DataFrame(rows))


def run_scenario(scenario: Scenario, max_aztec: int = MAX_AZTEC_SIZE) -> RunResult:
    logger.info(f"Running scenario '{scenario.name}' ({scenario.system}, {scenario.backend})")
    result = SYSTEMS[scenario.system].run(scenario, max_aztec)
    logger.info(f"Scenario '{scenario.name}': {'pass' if result.report.passed else 'FAIL'}")
    return result
