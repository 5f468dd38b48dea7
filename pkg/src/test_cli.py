#!/usr/bin/env python3
"""
Tests for the command line interface
"""

import json
import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from cli import EXIT_OK, EXIT_SCENARIO_ERROR, main
from selftest import build_cases, case, run_case


def write_scenario(directory, name, doc):
    path = directory / f'{name}.json'
    path.write_text(json.dumps(doc))
    return path


def test_run_writes_requested_outputs(tmp_path):
    path = write_scenario(tmp_path, 'pnet_small', {
        'system': 'pnet_singularity', 'data': {'values': ['1', '3']}, 'outputs': ['report', 'svg']
    })
    output = tmp_path / 'output'
    assert main(['--output-dir', str(output), 'run', str(path)]) == EXIT_OK
    report = json.loads((output / 'pnet_small.json').read_text())
    assert report['pass'] is True
    assert report['value'] == '3/2+0/1*i'
    assert (output / 'pnet_small.svg').read_text().startswith('<svg')


def test_failed_check_still_exits_zero(tmp_path):
    path = write_scenario(tmp_path, 'generic_devron', {
        'system': 'pentagram_devron', 'params': {'m': 3, 'seed': 3, 'generic': True}
    })
    assert main(['--output-dir', str(tmp_path), 'run', str(path)]) == EXIT_OK
    assert json.loads((tmp_path / 'generic_devron.json').read_text())['pass'] is False


def test_schema_error_exit_code(tmp_path, capsys):
    path = write_scenario(tmp_path, 'bad', {'system': 'aztec', 'params': {'k': -1}})
    assert main(['--output-dir', str(tmp_path), 'run', str(path)]) == EXIT_SCENARIO_ERROR
    assert '$.params.k' in capsys.readouterr().out


def test_render_writes_svg(tmp_path):
    path = write_scenario(tmp_path, 'aztec', {'system': 'aztec', 'params': {'k': 1}})
    target = tmp_path / 'aztec.svg'
    assert main(['render', str(path), '-o', str(target)]) == EXIT_OK
    assert '<rect' in target.read_text()


def test_selftest_filter(capsys):
    assert main(['selftest', '--filter', 'pnet_m2_sing']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'pnet_m2_sing' in out
    assert '0 failure(s)' in out


def test_experiment_errors_do_not_count_as_failures():
    row = run_case(case('paired diagonals', 'pair_experiment', 'odd_pair', expect='report', m=3, p=2))
    assert row['status'] == 'report-only'
    row = run_case(case('paired diagonals', 'pair_experiment', 'odd_pair', m=3, p=2))
    assert row['status'] == 'ERROR'


def test_selftest_covers_every_expectation():
    cases = build_cases()
    assert {c.expect for c in cases} == {'pass', 'fail', 'report'}
    assert len({c.name for c in cases}) == len(cases)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
