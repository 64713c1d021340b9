"""
Command-line frontend.

    ffnets construct --q 2 --s 2 --rows 16 --out c.txt
    ffnets points --in c.txt --n0 0 --count 8 --m 4 --exact
    ffnets tvalue --in c.txt --mmax 8
    ffnets netcheck --in c.txt --m 4 --t 0 --offset 1
    ffnets expand --q 2 --element "x^2" --place "x+1" --depth 3
    ffnets selftest --quick

Exit status is 0 iff the command succeeded and every assertion it makes
passed, 1 if an assertion failed, 2 on invalid input.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from .construct import build_system
from .genmat import build_matrices, load_matrix_set, save_matrix_set
from .interfaces.function_field import FunctionField
from .linalg import as_ints
from .netverify import MAX_M, check_bound, net_check
from .params import params_from_mapping, parse_element, parse_place, tokenize_params
from .selftest import run_selftest
from .seqgen import PointRequest, format_point, points
from .types import FFNetsError, OutputMode

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

MAX_DEPTH = 64


# ============================================================================
# Parameter options
# ============================================================================

def _add_params_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("construction parameters")
    group.add_argument("--params", help="key=value parameter text; the flags below override its keys")
    group.add_argument("--variant", choices=["genus0", "gpos", "xing"])
    group.add_argument("--q", help="Field as p^e or a prime power")
    group.add_argument("--e", type=int, help="Extension degree when --q is the characteristic")
    group.add_argument("--modulus", help="c0,c1,... of the field modulus")
    group.add_argument("--curve", help="a1,a2,a3,a4,a6 or a reference curve name (F2, F3)")
    group.add_argument("--s", type=int, help="Dimension")
    group.add_argument("--mu", type=int, help="Degree of P_inf")
    group.add_argument("--places", help="P_1;...;P_s")
    group.add_argument("--pinf", help="P_inf")
    group.add_argument("--D", dest="divisor", help="Auxiliary divisor")
    group.add_argument("--vandermonde", action="store_true", help="Genus 0: rows as powers of fixed generators")


def params_mapping(args: argparse.Namespace) -> Dict[str, str]:
    """Merge --params text with the individual flags."""
    values = tokenize_params(args.params) if args.params else {}
    if args.q is not None:
        values["q"] = f"{args.q}^{args.e}" if args.e is not None else args.q
    elif args.e is not None:
        raise FFNetsError("--e needs --q")
    if args.curve is not None:
        values["backend"] = f"elliptic:{args.curve}"
    flags = {
        "variant": args.variant,
        "modulus": args.modulus,
        "s": None if args.s is None else str(args.s),
        "mu": None if args.mu is None else str(args.mu),
        "places": args.places,
        "pinf": args.pinf,
        "D": args.divisor,
    }
    values.update({key: value for key, value in flags.items() if value is not None})
    if args.vandermonde:
        values["vandermonde"] = "1"
    if "backend" in values and "variant" not in values:
        values["variant"] = "gpos"
    return values


# ============================================================================
# Subcommands
# ============================================================================

def cmd_construct(args: argparse.Namespace) -> int:
    rows = args.rows
    cols = args.cols if args.cols is not None else rows
    if not 1 <= rows <= MAX_DEPTH or not 1 <= cols <= MAX_DEPTH:
        raise FFNetsError(f"--rows and --cols must lie in 1..{MAX_DEPTH}")
    params = params_from_mapping(params_mapping(args))
    system = build_system(params)
    ms = build_matrices(system, rows, cols)
    digest = save_matrix_set(ms, args.out)
    logger.info(f"Wrote {args.out}")
    print(digest)
    return EXIT_OK


def cmd_points(args: argparse.Namespace) -> int:
    ms = load_matrix_set(args.input)
    mode = OutputMode.EXACT if args.exact else OutputMode.BINARY64
    request = PointRequest(args.n0, args.count, args.m, mode)
    for n, numerators in points(ms, request):
        print(format_point(n, numerators, ms.q, args.m, mode))
    return EXIT_OK


def cmd_tvalue(args: argparse.Namespace) -> int:
    if not 1 <= args.mmax <= MAX_M:
        raise FFNetsError(f"--mmax must lie in 1..{MAX_M}")
    ms = load_matrix_set(args.input)
    report = check_bound(ms, args.mmax)
    for row in report.rows:
        print(f"{row.m} {row.t_star} {row.bound} {row.margin}")
    for violation in report.violations:
        print(f"violation: {violation}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_netcheck(args: argparse.Namespace) -> int:
    ms = load_matrix_set(args.input)
    if not 0 <= args.t <= args.m:
        raise FFNetsError(f"--t must lie in 0..{args.m}")
    if args.offset < 0:
        raise FFNetsError("--offset must be >= 0")
    results = net_check(ms, args.m, args.t, args.offset)
    for shape, ok in results.items():
        print(f"{','.join(str(e) for e in shape)} {'pass' if ok else 'fail'}")
    return EXIT_OK if all(results.values()) else EXIT_FAILED


def expansion_lines(ff: FunctionField, f: Any, P: Any, depth: int) -> List[str]:
    """
    `k coeff` lines for the first `depth` coefficients of f at P, starting at
    min(0, nu_P(f)). A coefficient of a degree-mu place prints as its mu
    digit indices, comma-separated.
    """
    shift = 0 if f.is_zero() else max(0, -int(ff.valuation(f, P)))
    if shift:
        f = f * ff.local_parameter(P) ** shift
    mu = P.degree
    digits = as_ints(ff.expansion_digits(f, P, depth))
    return [
        f"{k - shift} {','.join(str(d) for d in digits[k * mu : (k + 1) * mu])}"
        for k in range(depth)
    ]


def cmd_expand(args: argparse.Namespace) -> int:
    if args.depth < 1:
        raise FFNetsError("--depth must be >= 1")
    params = params_from_mapping(params_mapping(args))
    ff = params.ff
    f = parse_element(args.element, ff)
    P = parse_place(args.place, ff)
    for line in expansion_lines(ff, f, P, args.depth):
        print(line)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    result = run_selftest(quick=args.quick, golden_path=args.golden)
    for check in result.check_results:
        label = "PASS" if check.success else "FAIL"
        text = check.detail if check.success else check.error
        print(f"{label} {check.check_id} ({check.duration_ms} ms) {text or ''}".rstrip())
    print(f"{result.status.value}: {result.checks_run - result.checks_failed}/{result.checks_run} checks passed")
    return EXIT_OK if result.success else EXIT_FAILED


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffnets", description="Digital (T,s)-sequences from global function fields")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="Build generating matrices and write a matrix file")
    _add_params_options(construct)
    construct.add_argument("--rows", type=int, default=16, help="Rows per matrix")
    construct.add_argument("--cols", type=int, help="Columns per matrix (default: --rows)")
    construct.add_argument("--out", required=True, help="Output matrix file")
    construct.set_defaults(handler=cmd_construct)

    pts = sub.add_parser("points", help="Print sequence points")
    pts.add_argument("--in", dest="input", required=True, help="Matrix file")
    pts.add_argument("--n0", type=int, default=0, help="First index")
    pts.add_argument("--count", type=int, required=True, help="Number of points")
    pts.add_argument("--m", "--precision", dest="m", type=int, required=True, help="Digits per coordinate")
    pts.add_argument("--exact", action="store_true", help="Print y/q^m instead of binary64")
    pts.set_defaults(handler=cmd_points)

    tvalue = sub.add_parser("tvalue", help="Exhaustive T*(m) against the claimed bound")
    tvalue.add_argument("--in", dest="input", required=True, help="Matrix file")
    tvalue.add_argument("--mmax", type=int, required=True, help=f"Largest m (at most {MAX_M})")
    tvalue.set_defaults(handler=cmd_tvalue)

    netcheck = sub.add_parser("netcheck", help="Count points in elementary intervals")
    netcheck.add_argument("--in", dest="input", required=True, help="Matrix file")
    netcheck.add_argument("--m", type=int, required=True, help="Block size q^m")
    netcheck.add_argument("--t", type=int, required=True, help="Quality parameter")
    netcheck.add_argument("--offset", type=int, default=0, help="Block index k")
    netcheck.set_defaults(handler=cmd_netcheck)

    expand = sub.add_parser("expand", help="Local expansion of a function-field element")
    _add_params_options(expand)
    expand.add_argument("--element", required=True, help="Expression in x (and y on a curve)")
    expand.add_argument("--place", required=True, help="Expansion place")
    expand.add_argument("--depth", type=int, default=8, help="Number of coefficients")
    expand.set_defaults(handler=cmd_expand)

    selftest = sub.add_parser("selftest", help="Run the bundled acceptance suite")
    selftest.add_argument("--quick", action="store_true", help="Genus-0 and golden-file checks only")
    selftest.add_argument("--golden", help="Replacement Pascal golden file")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except (FFNetsError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
