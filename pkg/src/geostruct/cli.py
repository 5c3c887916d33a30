"""Command-line entry point.

Exit codes: 0 success, 1 configuration or input error, 2 golden mismatch,
3 internal invariant violation or numeric check over tolerance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .config import PRESETS, ConfigError, NumericCheck, load_config, preset_config
from .golden import GoldenFormatError, load_golden, parse_golden, shipped_golden_text, verify_golden
from .numeric import numeric_crosscheck
from .parser import ExprSyntaxError
from .pipeline import Pipeline
from .report import build_report, check_invariants, dumps, render_text
from .tensor import DegenerateMetricError

EXIT_OK, EXIT_CONFIG, EXIT_GOLDEN, EXIT_INVARIANT = 0, 1, 2, 3


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors are configuration errors; exit 2 is reserved for golden diffs
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _epsilon(text: str) -> int:
    if text in ("+1", "1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError("epsilon must be +1 or -1")


def _source(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESETS)
    group.add_argument("--custom", metavar="CONFIG_FILE", help="JSON run configuration")
    parser.add_argument("--epsilon", type=_epsilon, help="sign of g33: +1 or -1 (required with --preset)")
    parser.add_argument("--zero", action="append", default=[], metavar="SYMBOL",
                        help="substitute the zero function for SYMBOL (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="geostruct", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute everything and print a classification report")
    _source(run)
    run.add_argument("--output", choices=("text", "json"), default=None)
    run.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")
    run.add_argument("--numeric-check", action="store_true", help="include the finite-difference check")
    run.add_argument("--samples", type=int, default=10)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--verify", action="store_true", help="include golden-table diffs (shipped table)")
    run.add_argument("--golden", metavar="FILE", help="include golden-table diffs against FILE")

    verify = sub.add_parser("verify", help="compare computed components with a golden table")
    _source(verify)
    verify.add_argument("--golden", metavar="FILE", help="golden table (default: the shipped one)")
    verify.add_argument("--output", choices=("text", "json"), default="text")

    check = sub.add_parser("check", help="finite-difference cross-check of the symbolic pipeline")
    _source(check)
    check.add_argument("--samples", type=int, default=10)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--tolerance", type=float, default=1e-5)
    return ap


def _config(args):
    if args.custom:
        cfg = load_config(args.custom)
        if args.epsilon is not None:
            cfg.epsilon = args.epsilon
    else:
        if args.epsilon is None:
            raise ConfigError("--epsilon is required with --preset")
        cfg = preset_config(args.preset, args.epsilon)
    if args.zero:
        cfg.zero_symbols = sorted(set(cfg.zero_symbols) | set(args.zero))
    return cfg.validate()


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        pipeline = Pipeline(cfg)
        pipeline.metric  # surfaces degenerate metrics as config errors
        if args.command == "run":
            return _run(args, pipeline)
        if args.command == "verify":
            return _verify(args, pipeline)
        return _check(args, pipeline)
    except (ConfigError, GoldenFormatError, ExprSyntaxError, DegenerateMetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _run(args, pipeline: Pipeline) -> int:
    cfg = pipeline.config
    if args.output:
        cfg.output_format = args.output
    if args.numeric_check:
        cfg.numeric_check = NumericCheck(args.samples, args.seed)
    problems = check_invariants(pipeline)
    numeric = None
    if cfg.numeric_check is not None:
        numeric = numeric_crosscheck(pipeline, cfg.numeric_check.samples, cfg.numeric_check.seed)
    golden = None
    if args.verify or args.golden:
        golden = verify_golden(pipeline, _golden_entries(args.golden, cfg))
    report = build_report(pipeline, golden=golden, numeric=numeric)
    _emit(dumps(report) if cfg.output_format == "json" else render_text(report), args.out)
    for msg in problems:
        print(f"invariant violated: {msg}", file=sys.stderr)
    if problems or (numeric is not None and not numeric.passed):
        return EXIT_INVARIANT
    if golden is not None and not golden.ok:
        return EXIT_GOLDEN
    return EXIT_OK


def _golden_entries(path: Optional[str], cfg):
    if path:
        return load_golden(path, cfg.declared_symbols)
    if cfg.preset == "custom":
        raise ConfigError("--golden is required for custom configurations")
    return parse_golden(shipped_golden_text(cfg.preset, cfg.epsilon), cfg.declared_symbols)


def _verify(args, pipeline: Pipeline) -> int:
    result = verify_golden(pipeline, _golden_entries(args.golden, pipeline.config))
    if args.output == "json":
        sys.stdout.write(dumps(result.to_dict()))
    else:
        print(f"{result.matched}/{result.total} entries match; "
              f"{len(result.hard_diffs)} mismatches, {len(result.suspect_diffs)} suspect")
        for d in result.diffs:
            tag = " (suspect)" if d.entry.suspect else ""
            dd = d.to_dict()
            print(f"line {dd['line']}: {dd['entry']}: expected {dd['expected']}, computed {dd['computed']}{tag}")
    return EXIT_OK if result.ok else EXIT_GOLDEN


def _check(args, pipeline: Pipeline) -> int:
    summary = numeric_crosscheck(pipeline, args.samples, args.seed, args.tolerance)
    print(f"points: {len(summary.points)}  values compared: {summary.compared}")
    print(f"max relative error: {summary.max_relative_error:.3e} ({summary.worst_component or 'n/a'})")
    print("PASS" if summary.passed else "FAIL")
    return EXIT_OK if summary.passed else EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
