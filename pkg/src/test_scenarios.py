#!/usr/bin/env python3
"""
Tests for scenario loading, validation and runs
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from field import ProjValue
from scenarios import SYSTEMS, Scenario, ScenarioError, run_scenario

SCENARIO_DIR = Path(__file__).parent.parent / 'scenarios'


def error_path(doc):
    with pytest.raises(ScenarioError) as info:
        Scenario.from_dict(doc)
    return info.value.path


def test_schema_errors_name_the_offending_entry():
    assert error_path(['not', 'an', 'object']) == '$'
    assert error_path({'system': 'pnet_singularity', 'colour': 'red'}) == '$.colour'
    assert error_path({'system': 'no_such_system'}) == '$.system'
    assert error_path({'system': 'aztec', 'backend': 'quaternion', 'params': {'k': 1}}) == '$.backend'
    assert error_path({'system': 'aztec', 'params': {'k': 1}, 'outputs': ['report', 'gif']}) == '$.outputs[1]'
    assert error_path({'system': 'dskp_dodgson', 'params': {'m': 'four'}}) == '$.params.m'
    assert error_path({'system': 'dskp_devron', 'params': {'m': 3}}) == '$.params.p'
    assert error_path({'system': 'pnet_singularity', 'data': {'values': ['1', 'abc']}}) == '$.data.values[1]'
    assert error_path({'system': 'explicit', 'params': {'family': 'hexagonal'}}) == '$.params.family'
    assert error_path({'system': 'pair_experiment', 'params': {'m': 3, 'p': 2}}) == '$.params.m'
    assert error_path({'system': 'pair_experiment', 'params': {'m': 4, 'p': 1}}) == '$.params.p'


def test_malformed_file_reports_position(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"system": "aztec",\n  "params": {"k": }\n}')
    with pytest.raises(ScenarioError) as info:
        Scenario.load(path)
    assert info.value.path.startswith('$ (line 2')
    with pytest.raises(ScenarioError):
        Scenario.load(tmp_path / 'missing.json')


def test_name_defaults_to_file_stem(tmp_path):
    path = tmp_path / 'small_pnet.json'
    path.write_text('{"system": "pnet_singularity", "data": {"values": ["1", "3"]}}')
    assert Scenario.load(path).name == 'small_pnet'


def test_shipped_scenarios_are_valid():
    files = sorted(SCENARIO_DIR.glob('*.json'))
    assert files
    for path in files:
        scenario = Scenario.load(path)
        assert scenario.system in SYSTEMS
        assert scenario.name == path.stem


def test_pnet_run_reaches_harmonic_mean():
    result = run_scenario(Scenario.from_dict({'system': 'pnet_singularity', 'data': {'values': ['1', '3']}}))
    assert result.report.passed
    assert result.report.value == ProjValue.of(Fraction(3, 2))


def test_dodgson_run_has_slab_table():
    doc = {'system': 'dskp_dodgson', 'params': {'m': 2, 'p': 1}, 'data': {'values': ['1', '3']}}
    result = run_scenario(Scenario.from_dict(doc))
    assert result.report.passed
    assert result.table is not None and len(result.table) > 0


def test_aztec_run_draws_faces():
    result = run_scenario(Scenario.from_dict({'system': 'aztec', 'params': {'k': 2, 'seed': 1}}))
    assert result.report.details['internal_faces'] == 5
    assert result.report.details['open_faces'] == 8
    assert '<rect' in result.scene.to_svg()


def test_explicit_pnet_run():
    doc = {'system': 'explicit', 'params': {'family': 'pnet', 'kmax': 2, 'm': 3, 'seed': 4}}
    result = run_scenario(Scenario.from_dict(doc))
    assert result.report.name == 'pnet_explicit'
    assert result.report.passed
    assert result.report.details['comparisons'] == 3


def test_report_json_is_stable():
    doc = {'system': 'pnet_singularity', 'params': {'m': 3, 'seed': 9}}
    first = run_scenario(Scenario.from_dict(doc)).report.to_json()
    second = run_scenario(Scenario.from_dict(doc)).report.to_json()
    assert first == second


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
