"""Command-line entry point: ``ergodic-lab <subcommand> ...``.

Exit status is 0 on success, 1 when a certificate fails verification and 2
on malformed input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .counterexample import DEFAULT_DEPTH, CertificateError, synthesize, verify_certificate
from .measure_model import INF, DomainError, Loc, in_R_mu, level_measure, tail_value
from .operators import averages_at, orbit_sums
from .rearrangement import rearrange
from .spaces import CATALOG_EXAMPLES, has_iet, parse_space

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def _num(x) -> str:
    if x == INF:
        return "inf"
    if isinstance(x, Fraction):
        return io.fmt(x)
    return repr(float(x))


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _existing(text: str) -> Path:
    path = Path(text)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ergodic-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("csv", "json")):
        p.add_argument("--out", type=Path, help="write here instead of stdout")
        p.add_argument("--format", choices=fmt, default=fmt[0])

    p = sub.add_parser("rearrange", help="decreasing rearrangement as value,width rows")
    p.add_argument("--fn", type=_existing, required=True)
    common(p)

    p = sub.add_parser("norms", help="norm and membership report for one catalog space")
    p.add_argument("--fn", type=_existing, required=True)
    p.add_argument("--space", required=True, help="l1, linf, l1cap, l1plus, orlicz:p=..,u0=.., lorentz:gamma=.. | lorentz:cap=..")
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    common(p, ("json",))

    p = sub.add_parser("membership", help="R_mu membership and per-space containment")
    p.add_argument("--fn", type=_existing, required=True)
    p.add_argument("--space", action="append", help="repeatable; defaults to the built-in catalog")
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    common(p, ("json",))

    p = sub.add_parser("simulate", help="trace of the ergodic averages at one location")
    p.add_argument("--op", type=_existing, required=True)
    p.add_argument("--fn", type=_existing, required=True)
    p.add_argument("--at", required=True, help="location, e.g. atom:1")
    p.add_argument("--n-max", type=_positive_int, required=True)
    common(p)

    p = sub.add_parser("synthesize", help="divergence counterexample and certificate")
    p.add_argument("--fn", type=_existing, required=True)
    p.add_argument("--depth", type=_positive_int, default=DEFAULT_DEPTH)
    p.add_argument("--op-out", type=Path, help="also write the operator spec here")
    common(p, ("json",))

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("certificate", type=_existing)
    p.add_argument("--fn", type=_existing, help="override the embedded function spec")
    p.add_argument("--op", type=_existing, help="override the embedded operator spec")
    common(p, ("json",))
    return parser


def _space_report(space, f, tol) -> dict:
    norm = space.norm(f, tol)
    return {
        "space": space.name,
        "norm": _num(norm),
        "in_space": norm != INF,
        "contains_one": space.contains_one(),
        "has_iet": has_iet(space),
        "order_continuous": space.order_continuous,
    }


def _cmd_rearrange(args) -> tuple:
    f = io.function_from_json(io.load_json(args.fn))
    steps = rearrange(f).steps
    if args.format == "json":
        return EXIT_OK, io.dumps({"steps": [[_num(v), _num(w)] for v, w in steps]})
    return EXIT_OK, "".join(f"{_num(v)},{_num(w)}\n" for v, w in steps)


def _cmd_norms(args) -> tuple:
    f = io.function_from_json(io.load_json(args.fn))
    return EXIT_OK, io.dumps(_space_report(parse_space(args.space), f, args.tol))


def _cmd_membership(args) -> tuple:
    f = io.function_from_json(io.load_json(args.fn))
    spaces = [parse_space(s) for s in args.space] if args.space else list(CATALOG_EXAMPLES)
    tail = tail_value(f)
    report = {
        "in_R_mu": in_R_mu(f),
        "tail": _num(tail),
        "level_measure_at_half_tail": _num(level_measure(f, tail / 2)) if tail else None,
        "spaces": [_space_report(s, f, args.tol) for s in spaces],
    }
    return EXIT_OK, io.dumps(report)


def _cmd_simulate(args) -> tuple:
    T = io.operator_from_json(io.load_json(args.op))
    f = io.function_from_json(io.load_json(args.fn))
    loc = Loc.parse(args.at)
    rows = [(n, total / n) for n, total in orbit_sums(T, f, loc, args.n_max)]
    if args.format == "json":
        return EXIT_OK, io.dumps({"at": str(loc), "averages": [[n, _num(v)] for n, v in rows]})
    return EXIT_OK, "".join(f"{n},{_num(v)}\n" for n, v in rows)


def _cmd_synthesize(args) -> tuple:
    f = io.function_from_json(io.load_json(args.fn))
    try:
        T, cert = synthesize(f, args.depth)
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED, ""
    if args.op_out:
        args.op_out.write_text(io.dumps(io.operator_to_json(T)))
    return EXIT_OK, io.dumps(io.certificate_to_json(cert, f))


def _cmd_verify(args) -> tuple:
    cert, f = io.certificate_from_json(io.load_json(args.certificate))
    T = cert.operator
    if args.fn:
        f = io.function_from_json(io.load_json(args.fn))
    if args.op:
        T = io.operator_from_json(io.load_json(args.op))
    ok = verify_certificate(cert, T, f)
    report = {"verified": ok, "ns": list(cert.ns), "claimed": [io.fmt(v) for v in cert.trace]}
    if not ok:
        try:
            report["recomputed"] = [io.fmt(v) for v in averages_at(T, f, cert.band.base_point, cert.ns)]
        except (DomainError, ValueError) as exc:
            report["recomputed"] = None
            report["error"] = str(exc)
    return (EXIT_OK if ok else EXIT_FAILED), io.dumps(report)


COMMANDS = {
    "rearrange": _cmd_rearrange,
    "norms": _cmd_norms,
    "membership": _cmd_membership,
    "simulate": _cmd_simulate,
    "synthesize": _cmd_synthesize,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, text = COMMANDS[args.command](args)
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
