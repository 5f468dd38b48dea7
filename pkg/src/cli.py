#!/usr/bin/env python3
"""
Command line interface: run scenario files, render their states, run the self-test
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import LOG_LEVEL, LOG_FORMAT, MAX_AZTEC_SIZE, OUTPUT_DIR, PNG_PREVIEW, SUPPORTED_BACKENDS
from render import Scene
from scenarios import Scenario, ScenarioError, run_scenario
from selftest import print_matrix, run_selftest

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_SCENARIO_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def load_scenario(path: str, backend: Optional[str] = None) -> Scenario:
    scenario = Scenario.load(path)
    if backend is not None:
        scenario.backend = backend
    return scenario


def write_outputs(scenario: Scenario, result, output_dir: Path) -> List[str]:
    """Write the requested artifacts; returns their paths."""
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if 'report' in scenario.outputs:
        path = output_dir / f"{scenario.name}.json"
        path.write_text(result.report.to_json() + '\n')
        written.append(str(path))
    if 'csv' in scenario.outputs:
        if result.table is None:
            logger.warning(f"Scenario '{scenario.name}' has no table to write")
        else:
            path = output_dir / f"{scenario.name}.csv"
            result.table.to_csv(path, index=False)
            written.append(str(path))
    if 'svg' in scenario.outputs:
        scene = result.scene if result.scene is not None else Scene(scenario.name)
        written.append(str(scene.save(output_dir / f"{scenario.name}.svg")))
    return written


def _run_file(path: str, output_dir: str, backend: Optional[str], max_aztec: int) -> Dict[str, Any]:
    """Run one scenario file; the outcome is plain data so worker processes can return it."""
    outcome = {'file': path, 'name': None, 'pass': None, 'report_only': False, 'code': EXIT_OK,
               'message': '', 'written': []}
    try:
        scenario = load_scenario(path, backend)
        outcome['name'] = scenario.name
        result = run_scenario(scenario, max_aztec=max_aztec)
        outcome['pass'] = result.report.passed
        outcome['report_only'] = result.report.report_only
        outcome['written'] = write_outputs(scenario, result, Path(output_dir))
    except ScenarioError as e:
        logger.error(f"{path}: {e}")
        outcome.update(code=EXIT_SCENARIO_ERROR, message=str(e))
    except Exception as e:
        logger.exception(f"{path}: internal error")
        outcome.update(code=EXIT_INTERNAL_ERROR, message=f"{type(e).__name__}: {e}")
    return outcome


def command_run(args) -> int:
    files = [str(f) for f in args.files]
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as executor:
            outcomes = list(executor.map(_run_file, files, [args.output_dir] * len(files),
                                         [args.backend] * len(files), [args.max_aztec] * len(files)))
    else:
        outcomes = [_run_file(f, args.output_dir, args.backend, args.max_aztec) for f in files]

    print("\n" + "=" * 50)
    print("SCENARIO RESULTS")
    print("=" * 50)
    for outcome in outcomes:
        if outcome['code'] != EXIT_OK:
            verdict = 'ERROR'
        elif outcome['report_only']:
            verdict = 'report-only'
        else:
            verdict = 'pass' if outcome['pass'] else 'FAIL'
        print(f"{outcome['name'] or outcome['file']}: {verdict}")
        if outcome['message']:
            print(f"  - {outcome['message']}")
        for path in outcome['written']:
            print(f"  wrote {path}")
    print("=" * 50)
    return max((o['code'] for o in outcomes), default=EXIT_OK)


def command_render(args) -> int:
    try:
        scenario = load_scenario(args.file, args.backend)
        result = run_scenario(scenario, max_aztec=args.max_aztec)
    except ScenarioError as e:
        logger.error(f"{args.file}: {e}")
        return EXIT_SCENARIO_ERROR
    except Exception:
        logger.exception(f"{args.file}: internal error")
        return EXIT_INTERNAL_ERROR
    scene = result.scene if result.scene is not None else Scene(scenario.name)
    output = args.output or Path(args.output_dir) / f"{scenario.name}.svg"
    scene.save(output, png=args.png or PNG_PREVIEW)
    print(f"Wrote {output}")
    return EXIT_OK


def command_selftest(args) -> int:
    result = run_selftest(args.filter, max_aztec=args.max_aztec)
    print_matrix(result)
    return EXIT_SELFTEST_FAILED if result.failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dskp_lab',
        description="Explicit solutions and singularities of the dSKP recurrence and its geometric systems",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    python dskp_lab.py run scenarios/pnet_m3_sing.json
    python dskp_lab.py run scenarios/*.json --jobs 4 --output-dir output
    python dskp_lab.py render scenarios/miquel_m3.json -o miquel.svg
    python dskp_lab.py selftest --filter Devron

Exit codes:
    0 success (a failed theorem check is still a result)
    1 self-test failure
    2 scenario schema error
    3 internal error
        """
    )
    parser.add_argument('--backend', choices=SUPPORTED_BACKENDS, default=None,
                        help='Override the scalar backend of every scenario')
    parser.add_argument('--max-aztec', type=int, default=MAX_AZTEC_SIZE,
                        help=f'Largest Aztec diamond for matching enumeration (default: {MAX_AZTEC_SIZE})')
    parser.add_argument('--output-dir', default=OUTPUT_DIR, help=f'Artifact directory (default: {OUTPUT_DIR})')
    parser.add_argument('--verbose', action='store_true', help='Enable verbose logging')

    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='Run scenario files and write their artifacts')
    run.add_argument('files', nargs='+', type=Path, help='Scenario JSON files')
    run.add_argument('--jobs', type=int, default=1, help='Worker processes for several files')
    run.set_defaults(handler=command_run)

    render = commands.add_parser('render', help='Run a scenario and write its state as SVG')
    render.add_argument('file', type=Path, help='Scenario JSON file')
    render.add_argument('-o', '--output', type=Path, default=None, help='SVG file to write')
    render.add_argument('--png', action='store_true', help='Also write a raster preview')
    render.set_defaults(handler=command_render)

    selftest = commands.add_parser('selftest', help='Run the acceptance suite')
    selftest.add_argument('--filter', default=None, help='Only cases whose theorem or scenario name contains this')
    selftest.set_defaults(handler=command_selftest)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    # Set logging level
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
