# weylforms.py
"""
Command line entry:

    python weylforms.py op eval|mul|comm ...
    python weylforms.py series add|mul|inv|derive|antiderive|compose|root|exp A [B]
    python weylforms.py newton report P
    python weylforms.py schur compute P
    python weylforms.py normal-form P Q
    python weylforms.py qp-tail p
    python weylforms.py ode solve --g 1,2,1 --A 2 --d 3 --c 1
    python weylforms.py recurse P Q
    python weylforms.py decompose P Q
    python weylforms.py verify [--seed S] [--bounds key=value ...]

Operators are given in the text grammar of README.md or as @file.json.
Exit codes: 0 success, 1 check failure, 2 usage or parse error.
"""
import argparse
import json
import logging
import sys
import time
from typing import Any, Dict, List, Optional

import coloredlogs
import humanfriendly

from config import Config
from core.errors import DivisionByZeroError, ParseError, PreconditionError, WeylFormsError
from core.event_bus import EventBus
from events.events import CheckCompleted, ReductionMoveApplied, RecursionStepRecorded, SchurComponentSolved
from exactnum.scalars import parse_rat
from exactnum.series import format_series, parse_series, series_arith, series_exp, series_nth_root
from hcp.text import format_hcp, hcp_to_json
from newton.polygon import polygon_data
from normalform.schur import normal_form_pair, normal_form_report, qp_tail
from pipeline.decompose import decompose_automorphism
from pipeline.lemma_suite import lemma_suite
from pipeline.ode import poly_ode_solve
from pipeline.recursion import Exponents, fi_recursion
from weyl.d1_op import from_weyl
from weyl.text_format import format_op, format_word, op_from_json, op_to_json, parse_op
from weyl.weyl_op import WeylOp, commutator

logger = logging.getLogger("weylforms")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_op(text: str) -> WeylOp:
    """Operator text, or @path to a JSON term list."""
    if text.startswith("@"):
        path = text[1:]
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read operator file {path}: {exc}", text)
        return op_from_json(data)
    return parse_op(text)


def _emit(args, payload: Any, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


# subcommands -----------------------------------------------------------

def cmd_op(args) -> int:
    P = read_op(args.P)
    if args.action == "eval":
        if args.at is None:
            _emit(args, op_to_json(P), format_op(P))
            return EXIT_OK
        f = parse_series(args.at)
        value = from_weyl(P, f.precision).apply(f)
        _emit(args, {"operator": format_op(P), "value": format_series(value)}, format_series(value))
        return EXIT_OK
    if args.Q is None:
        raise PreconditionError(f"op {args.action} needs a second operator")
    Q = read_op(args.Q)
    result = P * Q if args.action == "mul" else commutator(P, Q)
    _emit(args, op_to_json(result), format_op(result))
    return EXIT_OK


def cmd_series(args) -> int:
    a = parse_series(args.A)
    if args.action == "root":
        result = series_nth_root(a, args.n)
    elif args.action == "exp":
        result = series_exp(a)
    else:
        b = parse_series(args.B) if args.B is not None else None
        result = series_arith(a, b, args.action)
    _emit(args, {"series": format_series(result), "precision": result.precision}, format_series(result))
    return EXIT_OK


def cmd_newton(args) -> int:
    data = polygon_data(read_op(args.P))
    report = data.to_json()
    lines = [f"points: {report['points']}", f"hull:   {report['hull']}"]
    for weight, top in report["tops"].items():
        lines.append(f"v{weight} = {top['value']} at {top['top']}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_schur(args) -> int:
    P = read_op(args.P)
    sd, _ = normal_form_pair(P, P, depth=args.depth, bus=args.bus)
    payload = {"p": sd.p, "S": sd.S.to_json(), "S_inv": sd.S_inv.to_json()}
    _emit(args, payload, f"S    = {sd.S}\nS^-1 = {sd.S_inv}")
    return EXIT_OK


def cmd_normal_form(args) -> int:
    P, Q = read_op(args.P), read_op(args.Q)
    sd, Qt = normal_form_pair(P, Q, depth=args.depth, bus=args.bus)
    report = normal_form_report(Qt, sd.p)
    payload = {"normal_form": Qt.to_json(), "central": {str(r): ok for r, ok in report.central.items()},
               "tail_central": report.tail_central}
    lines = [str(Qt)]
    lines += [f"order {r}: {'central' if ok else 'not central'}" for r, ok in sorted(report.central.items())]
    if report.tail_central is not None:
        lines.append(f"Q_-p - qp_tail: {'central' if report.tail_central else 'not central'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_qp_tail(args) -> int:
    tail = qp_tail(args.p)
    _emit(args, hcp_to_json(tail), format_hcp(tail))
    return EXIT_OK


def cmd_ode(args) -> int:
    try:
        g = [parse_rat(c) for c in args.g.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad coefficient list {args.g!r}: {exc}", args.g)
    z = args.z if args.z is not None else (args.A - 1) * args.d
    sol = poly_ode_solve(g, args.A, args.d, z, parse_rat(args.c))
    if not sol.solvable:
        _emit(args, {"solvable": False, "degree_bound": sol.degree_bound, "roots": sol.roots},
              f"no polynomial solution (degree bound {sol.degree_bound}, {sol.roots} distinct roots)")
        return EXIT_OK
    H = sol.H.as_expr()
    _emit(args, {"solvable": True, "H": str(H), "degree": sol.degree, "roots": sol.roots}, f"H = {H}")
    return EXIT_OK


def cmd_recurse(args) -> int:
    P, Q = read_op(args.P), read_op(args.Q)
    trace = fi_recursion(P, Q, max_steps=args.max_steps, exponents=Exponents(args.exponents), bus=args.bus)
    payload = trace.to_json()
    lines = [f"{'i':>3} {'ord':>5} {'n':>3} {'m':>3} {'eps':>8}  Q_i"]
    for s in payload["steps"]:
        cells = ["-" if s[key] is None else str(s[key]) for key in ("ord", "n", "m", "epsilon")]
        lines.append(f"{s['index']:>3} {cells[0]:>5} {cells[1]:>3} {cells[2]:>3} {cells[3]:>8}  {s['Q']}")
    lines.append(f"verdict: {payload['verdict']} {payload['detail']}".rstrip())
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_decompose(args) -> int:
    P, Q = read_op(args.P), read_op(args.Q)
    dec = decompose_automorphism(P, Q, max_steps=args.max_steps, bus=args.bus)
    if not dec.ok:
        cert = dec.certificate
        _emit(args, {"ok": False, "reason": cert.reason, "P": format_op(cert.P), "Q": format_op(cert.Q),
                     "step": cert.step},
              f"failed at step {cert.step}: {cert.reason}\n  P = {format_op(cert.P)}\n  Q = {format_op(cert.Q)}")
        return EXIT_FAILED
    _emit(args, {"ok": True, "word": format_word(dec.word)}, format_word(dec.word) or "id")
    return EXIT_OK


def parse_bounds(items: Optional[List[str]]) -> Dict[str, int]:
    bounds = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"bound must read key=value, got {item!r}", item)
        try:
            bounds[key.strip()] = int(value)
        except ValueError:
            raise ParseError(f"bound {key} needs an integer, got {value!r}", item)
    return bounds


def cmd_verify(args) -> int:
    start = time.monotonic()
    report = lemma_suite(seed=args.seed, bounds=parse_bounds(args.bounds), only=args.only,
                         corrupt=args.corrupt, progress=not args.json, bus=args.bus)
    elapsed = humanfriendly.format_timespan(time.monotonic() - start)
    lines = []
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        lines.append(f"{c.check_id:<15} {status}  {c.instances:>6} instances" + (f"  {c.witness}" if c.witness else ""))
    lines.append(f"seed {report.seed}: {'all checks passed' if report.passed else 'failures'} in {elapsed}")
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_FAILED


# wiring ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weylforms", description="Exact computations in the first Weyl algebra")
    parser.add_argument("--json", action="store_true", help="print JSON instead of text")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    op = sub.add_parser("op", help="normal-ordered arithmetic")
    op.add_argument("action", choices=["eval", "mul", "comm"])
    op.add_argument("P")
    op.add_argument("Q", nargs="?")
    op.add_argument("--at", help="series to apply P to, e.g. '1 + x + O(x^8)'")
    op.set_defaults(handler=cmd_op)

    series = sub.add_parser("series", help="truncated power series arithmetic")
    series.add_argument("action", choices=["add", "mul", "inv", "derive", "antiderive", "compose", "root", "exp"])
    series.add_argument("A")
    series.add_argument("B", nargs="?")
    series.add_argument("--n", type=int, default=2, help="root degree")
    series.set_defaults(handler=cmd_series)

    newton = sub.add_parser("newton", help="Newton polygon data")
    newton.add_argument("action", choices=["report"])
    newton.add_argument("P")
    newton.set_defaults(handler=cmd_newton)

    schur = sub.add_parser("schur", help="Schur operator of P")
    schur.add_argument("action", choices=["compute"])
    schur.add_argument("P")
    schur.add_argument("--depth", type=int)
    schur.set_defaults(handler=cmd_schur)

    nf = sub.add_parser("normal-form", help="normal form of Q with respect to P")
    nf.add_argument("P")
    nf.add_argument("Q")
    nf.add_argument("--depth", type=int)
    nf.set_defaults(handler=cmd_normal_form)

    tail = sub.add_parser("qp-tail", help="closed-form commutator tail for d^p")
    tail.add_argument("p", type=int)
    tail.set_defaults(handler=cmd_qp_tail)

    ode = sub.add_parser("ode", help="polynomial solutions of c g^A = H'g - ((z+1)/d) H g'")
    ode.add_argument("action", choices=["solve"])
    ode.add_argument("--g", required=True, help="coefficients of g, lowest degree first")
    ode.add_argument("--A", type=int, required=True)
    ode.add_argument("--d", type=int, required=True)
    ode.add_argument("--z", type=int, help="defaults to (A - 1) d")
    ode.add_argument("--c", default="1")
    ode.set_defaults(handler=cmd_ode)

    rec = sub.add_parser("recurse", help="order-reducing recursion on (P, Q)")
    rec.add_argument("P")
    rec.add_argument("Q")
    rec.add_argument("--max-steps", type=int)
    rec.add_argument("--exponents", choices=[e.value for e in Exponents], default=Exponents.REDUCED.value)
    rec.set_defaults(handler=cmd_recurse)

    dec = sub.add_parser("decompose", help="tame word of the automorphism x -> P, d -> Q")
    dec.add_argument("P")
    dec.add_argument("Q")
    dec.add_argument("--max-steps", type=int)
    dec.set_defaults(handler=cmd_decompose)

    ver = sub.add_parser("verify", help="seeded lemma suite")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--bounds", nargs="*", metavar="KEY=VALUE")
    ver.add_argument("--only", nargs="*", metavar="CHECK")
    ver.add_argument("--corrupt", action="store_true", help="self-test with one rewrite coefficient dropped")
    ver.set_defaults(handler=cmd_verify)
    return parser


def _debug_bus() -> EventBus:
    bus = EventBus()
    for event_type in (CheckCompleted, RecursionStepRecorded, ReductionMoveApplied, SchurComponentSolved):
        bus.subscribe(event_type, lambda ev: logger.debug("event %s", ev))
    return bus


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = "DEBUG" if args.verbose else Config.get("logging.level", "INFO")
    coloredlogs.install(level=level, fmt=Config.get("logging.fmt"), stream=sys.stderr)
    args.bus = _debug_bus() if args.verbose else None
    try:
        return args.handler(args)
    except (ParseError, PreconditionError, DivisionByZeroError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except WeylFormsError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
