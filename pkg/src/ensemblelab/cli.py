"""Command-line front end.

Exit codes are a stable contract: 0 success, 2 config parse error,
3 validation error, 4 solver abort, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ScenarioError
from .presets import PRESETS
from .runner import RunResult, emit_results, run_case, run_scenario
from .scenario import Scenario, TOMLParseError, load_scenario

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER_ABORT = 4
EXIT_IO = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemblelab",
        description="Canonical ensemble simulations from declarative scenario files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario file or preset")
    run.add_argument("scenario", help="path to a TOML scenario or a preset name")
    run.add_argument("--out", default="runs", help="output directory (default: runs)")
    run.add_argument(
        "--format",
        choices=("csv", "json", "both"),
        default="both",
        help="result format (default: both)",
    )
    run.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="run independent cases concurrently (default: 1)",
    )

    sub.add_parser("presets", help="list built-in scenarios")

    val = sub.add_parser("validate", help="validate a scenario file")
    val.add_argument("scenario", help="path to a TOML scenario or a preset name")
    return parser


def _load(source: str) -> Scenario:
    return load_scenario(source)


def _case_worker(args):
    source, case_index, out_dir, formats = args
    scenario = _load(source)
    pairs = list(scenario.case_configs())
    case_name, cfg = pairs[case_index]
    case = run_case(cfg, scenario.name, case_name)
    result = RunResult(scenario.name, [case])
    # Emit only this case's files.
    from .runner import write_csv, write_json

    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    if "csv" in formats:
        write_csv(case, directory)
    if "json" in formats:
        write_json(case, directory, cfg)
    return case.label, case.aborted, len(case.rows), case.report.get("constraint", {}).get("verdict")


def _cmd_run(args) -> int:
    formats = ("csv", "json") if args.format == "both" else (args.format,)
    try:
        scenario = _load(args.scenario)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except TOMLParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ScenarioError as err:
        print(f"validation error: {err}", file=sys.stderr)
        return EXIT_VALIDATION

    n_cases = max(1, len(scenario.cases))
    try:
        if args.jobs > 1 and n_cases > 1:
            jobs = min(args.jobs, n_cases)
            payload = [
                (args.scenario, i, args.out, formats) for i in range(n_cases)
            ]
            aborted = False
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for label, case_aborted, n_rows, verdict in pool.map(_case_worker, payload):
                    aborted = aborted or case_aborted
                    _print_case_line(label, case_aborted, n_rows, verdict)
            return EXIT_SOLVER_ABORT if aborted else EXIT_OK
        result = run_scenario(scenario)
        emit_results(result, scenario, args.out, formats)
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    for case in result.cases:
        _print_case_line(
            case.label,
            case.aborted,
            len(case.rows),
            case.report.get("constraint", {}).get("verdict"),
        )
    return EXIT_SOLVER_ABORT if result.aborted else EXIT_OK


def _print_case_line(label, aborted, n_rows, verdict) -> None:
    status = "ABORTED" if aborted else "ok"
    extra = f"  verdict={verdict}" if verdict else ""
    print(f"{label}: {status}  rows={n_rows}{extra}")


def _cmd_presets() -> int:
    width = max(len(name) for name in PRESETS)
    for name, preset in PRESETS.items():
        print(f"{name:<{width}}  {preset.description}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        _load(args.scenario)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except TOMLParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ScenarioError as err:
        print(f"validation error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    print("ok")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "presets":
        return _cmd_presets()
    return _cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
