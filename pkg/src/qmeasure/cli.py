"""Command line interface.

Verbs: run <scenario-file>, cat, compare <scenario-file>, verify.
Exit codes: 0 success, 1 parse or validation failure, 2 a numerical
invariant was violated, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ParseError, QmError
from .report import emit_report, emit_summary, sig12
from .scenario import compare_collapse_vs_restriction, parse_scenario, run_cat, run_scenario
from .verification import run_all


class _Parser(argparse.ArgumentParser):
    # argparse exits with its own code 2 on usage errors; route them through
    # the package's error mapping instead (bad usage is an input problem)
    def error(self, message):
        raise ParseError(message)


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError("expected re or re,im")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}")
    return complex(re, im)


def build_parser() -> _Parser:
    parser = _Parser(prog="qmeasure", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument(
        "--format", choices=("table", "json"), default="table", help="output format"
    )
    common.add_argument(
        "--tol",
        type=float,
        default=1e-9,
        help="largest tolerated analytic deviation before exit code 2",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", parents=[common], help="run a scenario file")
    p_run.add_argument("scenario", help="path to a scenario JSON document")

    p_cat = sub.add_parser(
        "cat", parents=[common], help="superpose two macroscopic branches"
    )
    p_cat.add_argument("--c1", type=_complex_arg, required=True, help="amplitude re,im of branch 1")
    p_cat.add_argument("--c2", type=_complex_arg, required=True, help="amplitude re,im of branch 2")
    p_cat.add_argument("--chain", type=int, default=8, help="number of two-level cells")

    p_cmp = sub.add_parser(
        "compare", parents=[common], help="randomized collapse vs restriction check"
    )
    p_cmp.add_argument("scenario", help="path to a scenario JSON document")
    p_cmp.add_argument("--random", type=int, default=100, help="number of random cases")
    p_cmp.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    sub.add_parser("verify", parents=[common], help="run the built-in invariant suite")
    return parser


def _cmd_run(args) -> int:
    scenario = parse_scenario(Path(args.scenario).read_text())
    report = run_scenario(scenario)
    sys.stdout.write(emit_report(report, args.format))
    if report.max_deviation > args.tol:
        sys.stderr.write(
            f"error: max deviation {report.max_deviation:.3e} exceeds --tol {args.tol:.3e}\n"
        )
        return 2
    return 0


def _cmd_cat(args) -> int:
    report = run_cat(args.c1, args.c2, chain_length=args.chain)
    if args.format == "table":
        sys.stdout.write(
            f"cat run: chain of {args.chain} cells, branch 1 (alive) at readout "
            f"+{args.chain}, branch 2 (dead) at -{args.chain}\n"
        )
    sys.stdout.write(emit_report(report, args.format))
    if report.max_deviation > args.tol:
        sys.stderr.write(
            f"error: max deviation {report.max_deviation:.3e} exceeds --tol {args.tol:.3e}\n"
        )
        return 2
    return 0


def _cmd_compare(args) -> int:
    scenario = parse_scenario(Path(args.scenario).read_text())
    summary = compare_collapse_vs_restriction(scenario, args.random, args.seed)
    sys.stdout.write(emit_summary(summary, args.format))
    if summary.worst > args.tol:
        sys.stderr.write(
            f"error: worst deviation {summary.worst:.3e} exceeds --tol {args.tol:.3e}\n"
        )
        return 2
    return 0


def _cmd_verify(args) -> int:
    results = run_all()
    if args.format == "json":
        payload = [
            {
                "name": r.name,
                "passed": r.passed,
                "worst": sig12(r.worst),
                "tolerance": sig12(r.tolerance),
                "detail": r.detail,
            }
            for r in results
        ]
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for r in results:
            flag = "PASS" if r.passed else "FAIL"
            sys.stdout.write(
                f"{flag} {r.name}: worst {r.worst:.3e}, tolerance {r.tolerance:.1e} ({r.detail})\n"
            )
    return 0 if all(r.passed for r in results) else 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (0, None) else 1
    except ParseError as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    try:
        if args.verb == "run":
            return _cmd_run(args)
        if args.verb == "cat":
            return _cmd_cat(args)
        if args.verb == "compare":
            return _cmd_compare(args)
        return _cmd_verify(args)
    except QmError as err:
        sys.stderr.write(f"error: {type(err).__name__}: {err}\n")
        return 1
    except OSError as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    except Exception as err:  # pragma: no cover - defensive
        sys.stderr.write(f"internal error: {type(err).__name__}: {err}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
