"""Command line: verify one built-in example end to end.

The default path generates the GP script, runs the engine, parses the
transcript and prints the verdict report as JSON.  `--script-only` stops
after generation (inspect or run the script elsewhere); `--parse` scores a
previously recorded transcript instead of running the engine, which is also
how hosts without GP can re-score archived runs.  Exit codes: 0 verdict
pass, 1 verdict fail (including engine-missing/timeout error verdicts),
2 bad input.
"""

import argparse
import os
import sys
from typing import Optional, Sequence

from nfexamples import engine as engine_mod
from nfexamples.examples import BUILTIN_EXAMPLES
from nfexamples.parse import ParseError, parse_engine_output
from nfexamples.script import DEFAULT_DEGREE_GUARD, build_script
from nfexamples.verdict import (
    assemble_verdict,
    error_verdict,
    exit_code,
    render_json,
    validate_report,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nf-examples",
        description="Verify the built-in number-field towers with a GP/PARI engine",
    )
    parser.add_argument("--p", type=int, required=True, choices=(5, 7))
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument(
        "--grh",
        action="store_true",
        default=True,
        help="run class-group work GRH-conditionally (default)",
    )
    mode.add_argument(
        "--unconditional",
        dest="grh",
        action="store_false",
        help="certify class groups unconditionally",
    )
    parser.add_argument(
        "--timeout",
        type=float,
        default=engine_mod.DEFAULT_TIMEOUT,
        help="engine wall-clock budget in seconds (default 6 hours)",
    )
    parser.add_argument(
        "--degree-guard",
        type=int,
        default=DEFAULT_DEGREE_GUARD,
        dest="degree_guard",
        help="skip composita whose potential degree exceeds this (default 96)",
    )
    parser.add_argument("--engine", help="path to the GP interpreter")
    parser.add_argument(
        "--script-only",
        action="store_true",
        dest="script_only",
        help="print the generated engine script and exit",
    )
    parser.add_argument(
        "--parse",
        metavar="FILE",
        help="score a recorded engine transcript instead of running the engine",
    )
    parser.add_argument("--output", help="write the verdict JSON to this file")
    return parser


def _emit(report: dict, output: Optional[str]) -> int:
    validate_report(report)
    text = render_json(report)
    if output:
        parent = os.path.dirname(output)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {output}; verdict: {report['verdict']}")
    else:
        sys.stdout.write(text)
    return exit_code(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    spec = BUILTIN_EXAMPLES[args.p]
    parameters = {"p": args.p, "grh": args.grh, "degree_guard": args.degree_guard}

    if args.script_only:
        sys.stdout.write(build_script(spec, args.grh, args.degree_guard))
        return 0

    if args.parse:
        try:
            with open(args.parse, "r", encoding="utf-8") as fh:
                transcript = fh.read()
        except OSError as ex:
            print(f"input error: {ex}", file=sys.stderr)
            return 2
        try:
            result = parse_engine_output(transcript)
        except ParseError as ex:
            print(f"input error: {ex}", file=sys.stderr)
            return 2
        # recorded transcripts carry their own mode; --p must still match
        return _emit(assemble_verdict(spec, result), args.output)

    try:
        engine_path = engine_mod.find_engine(args.engine)
    except engine_mod.EngineMissing as ex:
        return _emit(error_verdict(parameters, "engine-available", str(ex)), args.output)
    if engine_path is None:
        return _emit(
            error_verdict(
                parameters,
                "engine-available",
                "no GP interpreter found (install PARI/GP or set NFEX_GP)",
            ),
            args.output,
        )
    script = build_script(spec, args.grh, args.degree_guard)
    try:
        transcript = engine_mod.run_engine(script, engine_path, args.timeout)
    except engine_mod.EngineTimeout as ex:
        return _emit(error_verdict(parameters, "engine-run", str(ex)), args.output)
    except engine_mod.EngineFailure as ex:
        return _emit(error_verdict(parameters, "engine-run", str(ex)), args.output)
    try:
        result = parse_engine_output(transcript)
    except ParseError as ex:
        return _emit(
            error_verdict(parameters, "engine-transcript", str(ex)), args.output
        )
    return _emit(assemble_verdict(spec, result, use_grh=args.grh), args.output)


if __name__ == "__main__":
    sys.exit(main())
