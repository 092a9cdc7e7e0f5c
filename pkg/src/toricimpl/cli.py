"""Command-line interface: read a surface file, print its implicit equation.

Exit codes: 0 success, 2 verification failure, 3 parse/input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .chow import cross_gcd, implicitize_chow
from .errors import ParseError, ToricImplError, VerificationFailed
from .lattice import degree_formula_check, newton_polygon
from .moving import implicitize_mq
from .oracle import verify_vanishing
from .polynomials import Polynomial, format_poly
from .surfaces import parse_input


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricimpl",
        description="Exact implicit equation of a rational parametric "
                    "surface given by four sparse (Laurent) polynomials.")
    parser.add_argument("--input", required=True, metavar="FILE",
                        help="surface file with lines x1..x4 = <polynomial>")
    parser.add_argument("--method", choices=("chow", "mq", "auto", "both"),
                        default="auto")
    parser.add_argument("--edges", metavar="I,J,...",
                        help="edge-chain override for the moving-surface method")
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        dest="output_format")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--verify", action="store_true",
                        help="check vanishing and the degree formula")
    parser.add_argument("--diagnostics", action="store_true",
                        help="print method diagnostics to stderr")
    parser.add_argument("--projective", action="store_true",
                        help="homogenize the output with X4")
    return parser


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Polynomial):
        return format_poly(value)
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def _needs_fallback(result) -> bool:
    diag = result.diagnostics
    return (result.basepoint_degree > 0
            or diag.get("extraneous_unresolved", False)
            or diag.get("degree_formula_ok") is False)


def _dispatch(method: str, surface, seed: int, edges):
    xs = list(surface.components)
    if method == "chow":
        return implicitize_chow(xs, seed=seed)
    if method == "mq":
        return implicitize_mq(xs, seed=seed, edge_override=edges)
    if method == "both":
        chow_result = implicitize_chow(xs, seed=seed)
        mq_result = implicitize_mq(
            xs, seed=seed, edge_override=edges,
            basepoint_degree=chow_result.basepoint_degree)
        return cross_gcd(chow_result, mq_result, xs)
    # auto: chow first, moving surfaces only when base points interfere
    chow_result = implicitize_chow(xs, seed=seed)
    if not _needs_fallback(chow_result):
        return chow_result
    try:
        mq_result = implicitize_mq(
            xs, seed=seed, edge_override=edges,
            basepoint_degree=chow_result.basepoint_degree)
        return cross_gcd(chow_result, mq_result, xs)
    except ToricImplError:
        return chow_result


def _homogenize(p: Polynomial) -> Polynomial:
    degree = p.x_degree()
    terms = {}
    for e, c in p.terms.items():
        missing = degree - (e[2] + e[3] + e[4] + e[5])
        terms[e[:5] + (e[5] + missing,)] = c
    return Polynomial(terms)


def run_cli(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    path = Path(args.input)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 3
    try:
        surface = parse_input(text)
    except ParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return 3
    edges = None
    if args.edges:
        try:
            edges = tuple(int(part) for part in args.edges.split(","))
        except ValueError:
            print(f"error: bad --edges value {args.edges!r}", file=sys.stderr)
            return 3
    try:
        result = _dispatch(args.method, surface, args.seed, edges)
        if args.verify:
            xs = list(surface.components)
            if not verify_vanishing(result.implicit, xs):
                raise VerificationFailed("output does not vanish on the surface")
            polygon = newton_polygon([p.support() for p in xs])
            if not degree_formula_check(polygon, result.degree,
                                        result.exponent_d,
                                        result.basepoint_degree):
                raise VerificationFailed(
                    "degree formula violated: "
                    f"{result.exponent_d}*{result.degree} != "
                    f"{polygon.area2} - {result.basepoint_degree}")
    except VerificationFailed as exc:
        print(f"error: verification failed: {exc}", file=sys.stderr)
        return 2
    except ToricImplError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    implicit = _homogenize(result.implicit) if args.projective else result.implicit
    if args.output_format == "json":
        payload = {
            "implicit": format_poly(implicit),
            "degree": result.degree,
            "deg_phi": result.exponent_d,
            "method": result.method,
            "basepoint_degree": result.basepoint_degree,
            "extraneous": format_poly(result.extraneous)
            if result.extraneous is not None else None,
            "diagnostics": _jsonable(result.diagnostics),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(format_poly(implicit))
        if result.extraneous is not None:
            print(f"# extraneous factor: {format_poly(result.extraneous)}",
                  file=sys.stderr)
    if args.diagnostics:
        print(json.dumps(_jsonable(result.diagnostics), indent=2,
                         sort_keys=True), file=sys.stderr)
    return 0


def main() -> None:
    sys.exit(run_cli())
