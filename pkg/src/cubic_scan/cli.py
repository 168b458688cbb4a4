"""Command-line front end: cubic-scan verify | coeff | series | dissect | list."""

import argparse
import json
import sys
from collections.abc import Sequence

from loguru import logger

from cubic_scan.dsl import ExpressionEvaluationError, ExpressionSyntaxError, eval_text
from cubic_scan.identities import (
    DEFAULT_JOBS,
    DEFAULT_TERMS,
    UnknownIdentityError,
    get_case,
    registry,
    verify_all,
)
from cubic_scan.partitions import PartitionKind, partition_table
from cubic_scan.reports import Status, format_report, reports_to_json
from cubic_scan.series import TruncatedSeries, dissect, reduce_mod

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def configure_logging(verbose: bool = False, debug: bool = False) -> None:
    """Send logs to stderr only, at WARNING unless asked for more."""
    logger.remove()
    level = "DEBUG" if debug else "INFO" if verbose else "WARNING"
    logger.add(sys.stderr, level=level)


def positive_int(text: str) -> int:
    """argparse type for counts of at least one."""
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def nonzero_int(text: str) -> int:
    """argparse type for joblib worker counts, where -1 means all cores."""
    value = int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a nonzero integer (-1 for all cores)")
    return value


def build_parser() -> argparse.ArgumentParser:
    """The cubic-scan parser with its five subcommands."""
    parser = argparse.ArgumentParser(prog="cubic-scan", description="Verify q-series identities exactly")
    parser.add_argument("--verbose", action="store_true", help="log progress at INFO")
    parser.add_argument("--debug", action="store_true", help="log every series operation at DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="verify registry identities")
    verify.add_argument("ids", nargs="*", help="identity ids (see `list`)")
    verify.add_argument("--all", action="store_true", help="verify the whole registry")
    verify.add_argument("--terms", type=positive_int, default=DEFAULT_TERMS, help="coefficients to compare")
    verify.add_argument("--jobs", type=nonzero_int, default=DEFAULT_JOBS, help="parallel workers, -1 for all cores")
    verify.add_argument("--json", action="store_true", help="print structured reports")

    coeff = commands.add_parser("coeff", help="print p(n) or a(n)")
    coeff.add_argument("kind", choices=[k.value for k in PartitionKind], help="p (ordinary) or a (cubic)")
    coeff.add_argument("n", type=int)
    coeff.add_argument("--modulus", type=int, help="print the least non-negative residue instead")

    series = commands.add_parser("series", help="expand an expression")
    series.add_argument("expr")
    series.add_argument("--terms", type=positive_int, default=DEFAULT_TERMS)
    series.add_argument("--modulus", type=int, help="reduce every coefficient")
    series.add_argument("--json", action="store_true")

    dissection = commands.add_parser("dissect", help="coefficients m n + r of an expression")
    dissection.add_argument("expr")
    dissection.add_argument("m", type=positive_int)
    dissection.add_argument("r", type=int)
    dissection.add_argument("--terms", type=positive_int, default=DEFAULT_TERMS)
    dissection.add_argument("--modulus", type=int)
    dissection.add_argument("--json", action="store_true")

    commands.add_parser("list", help="list registry identities")
    return parser


def _run_verify(args: argparse.Namespace) -> int:
    if args.all == bool(args.ids):
        logger.error("give identity ids or --all, not both")
        return EXIT_USAGE
    try:
        cases = registry() if args.all else [get_case(case_id) for case_id in args.ids]
    except UnknownIdentityError as e:
        logger.error(e.args[0])
        return EXIT_USAGE
    reports = verify_all(args.terms, n_jobs=args.jobs, cases=cases)
    if args.json:
        print(reports_to_json(reports))
    else:
        for report in reports:
            print(format_report(report))
    return EXIT_OK if all(report.status is Status.VERIFIED for report in reports) else EXIT_FAILED


def _run_coeff(args: argparse.Namespace) -> int:
    if args.n < 0:
        logger.error(f"n must be non-negative, got {args.n}")
        return EXIT_USAGE
    if args.modulus is not None and args.modulus < 2:
        logger.error(f"modulus must be at least 2, got {args.modulus}")
        return EXIT_USAGE
    value = partition_table(PartitionKind(args.kind), args.n)[args.n]
    print(value % args.modulus if args.modulus is not None else value)
    return EXIT_OK


def _print_series(f: TruncatedSeries, args: argparse.Namespace) -> None:
    if args.modulus is not None:
        f = reduce_mod(f, args.modulus)
    if args.json:
        payload = {
            "expression": args.expr,
            "terms": len(f),
            "modulus": args.modulus,
            "coefficients": [str(c) for c in f.coeffs],
        }
        print(json.dumps(payload, indent=2))
    else:
        for n, c in enumerate(f.coeffs):
            print(f"{n}\t{c}")


def _run_expression(args: argparse.Namespace) -> int:
    if args.modulus is not None and args.modulus < 2:
        logger.error(f"modulus must be at least 2, got {args.modulus}")
        return EXIT_USAGE
    order = args.terms - 1
    try:
        if args.command == "dissect":
            if not 0 <= args.r < args.m:
                logger.error(f"residue must satisfy 0 <= r < {args.m}, got {args.r}")
                return EXIT_USAGE
            f = dissect(eval_text(args.expr, args.m * order + args.r), args.m, args.r)
        else:
            f = eval_text(args.expr, order)
    except ExpressionSyntaxError as e:
        logger.error(f"syntax error: {e}\n  {args.expr}\n  {' ' * (e.offset - 1)}^")
        return EXIT_USAGE
    except ExpressionEvaluationError as e:
        start, end = e.span
        logger.error(f"cannot evaluate {args.expr[start:end]!r}: {e}")
        return EXIT_FAILED
    _print_series(f, args)
    return EXIT_OK


def _run_list() -> int:
    for case in registry():
        print(f"{case.id}\t{case.kind.value}\t{case.description}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(args.verbose, args.debug)
    match args.command:
        case "verify":
            return _run_verify(args)
        case "coeff":
            return _run_coeff(args)
        case "series" | "dissect":
            return _run_expression(args)
        case _:
            return _run_list()


if __name__ == "__main__":
    sys.exit(main())
