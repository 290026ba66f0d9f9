"""``lunarflow`` command line: solve, sweep, validate, report.

Exit codes: 0 success, 1 usage or parse error, 2 infeasible problem, failed
validation, or (with ``--strict``) a failed replay.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import report as rpt
from .scenario import (
    ScenarioError,
    load_scenario_file,
    run_sweep,
    solve_scenario,
    validate_scenario,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
OUTPUT_ENV = "LUNARFLOW_OUTPUT_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lunarflow", description="Lunar ISRU campaign optimizer.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_opts(sp):
        sp.add_argument("--output-dir", type=Path, default=None,
                        help=f"where reports go (default ${OUTPUT_ENV} or the current directory)")

    s = sub.add_parser("solve", help="solve one scenario and write its report")
    s.add_argument("scenario", help="scenario file, or a shipped scenario name")
    out_opts(s)
    s.add_argument("--format", choices=("csv", "structured"), default=None,
                   help="write only the CSV tables or only the JSON report (default both)")
    s.add_argument("--strict", action="store_true", help="exit 2 if the replay check fails")
    s.add_argument("--node-limit", type=int, default=20000)

    w = sub.add_parser("sweep", help="run a named sweep and write its CSV table")
    w.add_argument("scenario")
    w.add_argument("--name", required=True, help="sweep name from the scenario file")
    out_opts(w)
    w.add_argument("--workers", type=int, default=1, help="solve rows in parallel (output order is fixed)")

    v = sub.add_parser("validate", help="load and check a scenario without solving")
    v.add_argument("scenario")

    r = sub.add_parser("report", help="summarize a JSON solve report")
    r.add_argument("solve_output", type=Path, help="JSON report, or a directory holding exactly one")
    r.add_argument("--format", choices=("csv", "structured"), default="structured")
    return p


def _output_dir(arg: Path | None) -> Path:
    if arg is not None:
        return arg
    return Path(os.environ.get(OUTPUT_ENV, "."))


def _load(path: str):
    try:
        return load_scenario_file(path)
    except FileNotFoundError:
        print(f"error: no such scenario file: {path}", file=sys.stderr)
    except ScenarioError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
    return None


def cmd_solve(args) -> int:
    config = _load(args.scenario)
    if config is None:
        return EXIT_USAGE
    diags = validate_scenario(config)
    if diags:
        for d in diags:
            print(d, file=sys.stderr)
        return EXIT_FAILED
    result = solve_scenario(config, node_limit=args.node_limit)
    paths = rpt.write_solve_outputs(result, _output_dir(args.output_dir), args.format)
    sys.stdout.write(rpt.summarize(rpt.solve_report(result)))
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    status = result.solution.status
    if status not in ("optimal", "node_limit"):
        print(f"error: {status}: {result.solution.message}", file=sys.stderr)
        return EXIT_FAILED
    if result.replay is not None and not result.replay.passed:
        print(f"replay failed: {result.replay.first_violation}", file=sys.stderr)
        if args.strict:
            return EXIT_FAILED
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load(args.scenario)
    if config is None:
        return EXIT_USAGE
    try:
        spec = config.sweep(args.name)
    except KeyError:
        known = ", ".join(s.name for s in config.sweeps) or "none"
        print(f"error: no sweep named {args.name!r} (defined: {known})", file=sys.stderr)
        return EXIT_USAGE
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    rows = run_sweep(config, spec, workers=args.workers)
    for r in rows:
        if r.status != "optimal":
            print(f"row {r.value:g}: {r.status}: {r.error}", file=sys.stderr)
    text = rpt.sweep_csv(rows)
    out = _output_dir(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{config.name}_{spec.name}.csv"
    path.write_text(text)
    sys.stdout.write(text)
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK if any(r.status == "optimal" for r in rows) else EXIT_FAILED


def cmd_validate(args) -> int:
    config = _load(args.scenario)
    if config is None:
        return EXIT_USAGE
    try:
        diags = validate_scenario(config)
    except ScenarioError as exc:
        print(exc)
        return EXIT_FAILED
    for d in diags:
        print(d)
    if diags:
        return EXIT_FAILED
    print(f"{config.name}: ok")
    return EXIT_OK


def cmd_report(args) -> int:
    path = args.solve_output
    if path.is_dir():
        found = sorted(path.glob("*.json"))
        if len(found) != 1:
            print(f"error: expected one JSON report in {path}, found {len(found)}", file=sys.stderr)
            return EXIT_USAGE
        path = found[0]
    try:
        report = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(report, dict) or "status" not in report or "scenario" not in report:
        print(f"error: {path} is not a solve report", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(rpt.summary_csv(report) if args.format == "csv" else rpt.summarize(report))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "validate": cmd_validate, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
