"""Command-line front end.

    formaljets COMMAND SESSION [options]

Exit codes: 0 success, 1 malformed input (session text or arguments),
2 mathematical domain error, 3 uncertified result (budget_exceeded)
without ``--allow-unstable``, 4 internal cross-check failure.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .chevalley import BUDGET_EXCEEDED, FIXED_L, MATCHED_ORACLE, LPolicy, chevalley_estimate, diagram_at_point
from .errors import CrossCheckError, FormalJetsError, ParseError
from .ideals import (
    IdealPresentation,
    diagram_of_ideal,
    hilbert_samuel_direct,
    standard_basis_truncated,
)
from .multiindex import Diagram, hilbert_samuel_table
from .series import format_series, hironaka_divide
from .session import (
    Session,
    parse_diagram_literal,
    parse_ideal_literal,
    parse_polynomial,
    parse_rational_list,
    parse_session,
)
from .strata import diagram_along_arc, semicontinuity_check, z_set_membership

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_UNSTABLE, EXIT_INTERNAL = 0, 1, 2, 3, 4


# ------------------------------------------------------------------ report


@dataclass
class Report:
    """Everything a command prints; JSON-native fields only."""

    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    diagram: Dict[str, Any] = field(default_factory=lambda: {"n": None, "vertices": None})
    hs: Optional[List[int]] = None
    chevalley: Dict[str, Any] = field(default_factory=lambda: {"l": None})
    status: str = "exact"
    verdict: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Report":
        return cls(**d)

    @property
    def uncertified(self) -> bool:
        return self.status == BUDGET_EXCEEDED


def emit_structured(report: Report) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def parse_structured(text: str) -> Report:
    return Report.from_dict(json.loads(text))


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def _diagram_dict(N: Diagram) -> Dict[str, Any]:
    return {"n": N.n, "vertices": [list(v) for v in N.vertices]}


def _fmt_vertices(vs) -> str:
    return "{" + ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in vs) + "}"


def emit_staircase(N: Diagram, k: int) -> str:
    """(k+1) x (k+1) grid for n = 2: '#' in the diagram, '.' outside.

    Column i is the exponent of y1, row j the exponent of y2; the origin is
    at the lower left.
    """
    if N.n != 2:
        raise ValueError(f"staircases are drawn for n = 2 only, not n = {N.n}")
    lines = []
    for j in range(k, -1, -1):
        lines.append("".join("#" if (i, j) in N else "." for i in range(k + 1)))
    return "\n".join(lines) + "\n"


def emit_text(report: Report, staircase: bool = False) -> str:
    out = [f"command: {report.command}"]
    if report.config:
        out.append("config: " + " ".join(f"{k}={report.config[k]}" for k in sorted(report.config)))
    out.append(f"status: {report.status}")
    if report.verdict is not None:
        out.append(f"verdict: {report.verdict}")
    if report.diagram.get("vertices") is not None:
        out.append(f"diagram: {_fmt_vertices(report.diagram['vertices'])}")
    if report.hs is not None:
        out.append("hs: " + " ".join(str(h) for h in report.hs))
    if report.chevalley.get("l") is not None:
        out.append(f"chevalley.l: {report.chevalley['l']}")
    for key in sorted(report.details):
        out.extend(_text_detail(key, report.details[key]))
    for w in report.warnings:
        out.append(f"warning: {w}")
    text = "\n".join(out) + "\n"
    if staircase and report.diagram.get("n") == 2 and "k" in report.config:
        N = Diagram(2, tuple(tuple(v) for v in report.diagram["vertices"]))
        text += "staircase (y1 across, y2 up):\n" + emit_staircase(N, report.config["k"])
    return text


def _text_detail(key: str, value) -> List[str]:
    if isinstance(value, list) and value and isinstance(value[0], dict):
        lines = [f"{key}:"]
        for item in value:
            lines.append("  " + ", ".join(f"{k}={_inline(k, item[k])}" for k in sorted(item)))
        return lines
    if isinstance(value, list) and value and all(isinstance(v, str) and not _RATIONAL.match(v) for v in value):
        return [f"{key}:"] + [f"  {v}" for v in value]
    return [f"{key}: {_inline(key, value)}"]


_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _inline(key: str, v) -> str:
    if isinstance(v, list):
        if v and isinstance(v[0], list):
            if "diagram" in key:
                return _fmt_vertices(v)
            return "[" + ", ".join("(" + ", ".join(str(x) for x in t) + ")" for t in v) + "]"
        if v and isinstance(v[0], str) and all(_RATIONAL.match(x) for x in v):
            return "(" + ", ".join(v) + ")"
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


# ---------------------------------------------------------------- commands


def _resolve_ideal(session: Session, spec: str, n: Optional[int] = None) -> IdealPresentation:
    spec = spec.strip()
    if spec.startswith("<"):
        return parse_ideal_literal(spec, n, label=spec)
    if spec not in session.ideals:
        raise ParseError(f"unknown ideal {spec!r}")
    return session.ideals[spec]


def _need(table: Dict, name: Optional[str], kind: str, flag: str):
    if name is None:
        raise ParseError(f"{flag} is required")
    if name not in table:
        raise ParseError(f"unknown {kind} {name!r}")
    return table[name]


def _policy(args, oracle: Optional[IdealPresentation]) -> LPolicy:
    return LPolicy(l=args.l, window=args.window, l_max=args.lmax, oracle=oracle)


def _config(args, **extra) -> Dict[str, Any]:
    cfg = {"session": Path(args.session).name}
    for key in ("k", "l", "window", "lmax", "degree", "mode"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    cfg.update({k: v for k, v in extra.items() if v is not None})
    return cfg


def _map_and_fiber(session: Session, args):
    phi = _need(session.maps, args.map, "map", "--map")
    tup = _need(session.fibers, args.fiber, "fiber", "--fiber")
    if session.fiber_maps[args.fiber] != args.map:
        raise ParseError(f"fiber {args.fiber} is declared over {session.fiber_maps[args.fiber]}, not {args.map}")
    return phi, tup


def _oracle(session: Session, args, n: int) -> Optional[IdealPresentation]:
    if getattr(args, "oracle", None) is None:
        return None
    I = _resolve_ideal(session, args.oracle, n)
    if I.n != n:
        raise ParseError(f"oracle ideal has {I.n} variables, the map has {n} components")
    return I


def cmd_diagram(session: Session, args) -> Report:
    if args.ideal is not None:
        if args.map is not None or args.fiber is not None:
            raise ParseError("use either --ideal or --map/--fiber")
        I = _resolve_ideal(session, args.ideal)
        N, completeness = diagram_of_ideal(I, args.k)
        basis = standard_basis_truncated(I, args.k)
        return Report(
            command="diagram",
            config=_config(args, ideal=args.ideal),
            diagram=_diagram_dict(N),
            hs=list(hilbert_samuel_table(N, args.k)),
            status=completeness,
            details={"standard_basis": [format_series(g) for g in basis]},
        )
    phi, tup = _map_and_fiber(session, args)
    if args.l is not None and args.auto:
        raise ParseError("--l and --auto are mutually exclusive")
    oracle = _oracle(session, args, phi.n)
    rep = diagram_at_point(phi, tup, args.k, policy=_policy(args, oracle))
    warnings = []
    if rep.status == BUDGET_EXCEEDED:
        warnings.append("E^lk did not stabilize by l_max; the diagram is a lower bound in the diagram order")
    elif rep.status == FIXED_L:
        warnings.append("l was fixed by the caller; stabilization is not checked")
    return Report(
        command="diagram",
        config=_config(args, map=args.map, fiber=args.fiber, oracle=args.oracle),
        diagram=_diagram_dict(rep.diagram),
        hs=list(rep.hs_table),
        chevalley={"l": rep.l_used},
        status=rep.status,
        details={
            "image": [_q(x) for x in rep.image],
            "points": [[_q(x) for x in p] for p in tup.points],
            "standard_basis": [format_series(g) for g in rep.standard_basis or []],
            "jet_dim": rep.jet_dim,
        },
        warnings=warnings,
    )


def cmd_hilbert(session: Session, args) -> Report:
    I = _resolve_ideal(session, args.ideal)
    table = [hilbert_samuel_direct(I, j) for j in range(args.k + 1)]
    N, completeness = diagram_of_ideal(I, args.k)
    return Report(
        command="hilbert",
        config=_config(args, ideal=args.ideal),
        diagram=_diagram_dict(N),
        hs=table,
        status=completeness,
    )


def cmd_divide(session: Session, args) -> Report:
    I = _resolve_ideal(session, args.by)
    target = args.target.strip()
    if target in session.ideals:
        T = session.ideals[target]
        if len(T.generators) != 1:
            raise ParseError(f"--target ideal {target} must have exactly one generator")
        G = T.generators[0]
    else:
        G = parse_polynomial(target, I.n)
    if G.n != I.n:
        raise ParseError(f"target has {G.n} variables, divisors have {I.n}")
    res = hironaka_divide(G, list(I.generators), bound=args.degree)
    return Report(
        command="divide",
        config=_config(args, by=args.by, target=args.target),
        status="exact",
        verdict="remainder_zero" if res.remainder.is_zero() else "remainder_nonzero",
        details={
            "quotients": [format_series(q) for q in res.quotients],
            "remainder": format_series(res.remainder),
            "initial_exponents": [list(a) for a in res.partition.exponents],
        },
    )


def cmd_chevalley(session: Session, args) -> Report:
    phi, tup = _map_and_fiber(session, args)
    oracle = _oracle(session, args, phi.n)
    est = chevalley_estimate(phi, tup, args.k, args.window, args.lmax, oracle)
    warnings = []
    if est.status == BUDGET_EXCEEDED:
        warnings.append("no stabilization detected up to l_max")
    return Report(
        command="chevalley",
        config=_config(args, map=args.map, fiber=args.fiber, oracle=args.oracle),
        chevalley={"l": est.l},
        status=est.status,
        details={"dims": [[l, d] for l, d in est.dims], "image": [_q(x) for x in tup.image]},
        warnings=warnings,
    )


def _overall_status(statuses: Sequence[str]) -> str:
    if BUDGET_EXCEEDED in statuses:
        return BUDGET_EXCEEDED
    if all(s == MATCHED_ORACLE for s in statuses):
        return MATCHED_ORACLE
    if FIXED_L in statuses:
        return FIXED_L
    return "stabilized_window"


def cmd_arc(session: Session, args) -> Report:
    phi = _need(session.maps, args.map, "map", "--map")
    arc = _need(session.arcs, args.arc, "arc", "--arc")
    if session.arc_maps[args.arc] != args.map:
        raise ParseError(f"arc {args.arc} is declared for {session.arc_maps[args.arc]}, not {args.map}")
    samples = parse_rational_list(args.samples)
    oracle = _oracle(session, args, phi.n)
    ar = diagram_along_arc(phi, arc, samples, args.k, _policy(args, oracle), jobs=args.jobs)
    v = semicontinuity_check(ar)
    per_sample = [
        {
            "t": _q(t),
            "diagram": [list(x) for x in r.diagram.vertices],
            "hs": list(r.hs_table),
            "status": r.status,
            "l": r.l_used,
        }
        for t, r in zip(ar.samples, ar.reports)
    ]
    return Report(
        command="arc",
        config=_config(args, map=args.map, arc=args.arc, oracle=args.oracle, samples=[_q(t) for t in ar.samples]),
        diagram=_diagram_dict(v.limit_diagram),
        hs=list(v.limit_hs),
        chevalley={"l": max(r.l_used for r in ar.reports)},
        status=_overall_status([r.status for r in ar.reports]),
        verdict=v.verdict,
        details={
            "samples": per_sample,
            "generic_diagram": [list(x) for x in v.generic_diagram.vertices],
            "generic_hs": list(v.generic_hs),
            "limit_vs_generic": v.diagram_comparison,
            "hs_margins": list(v.hs_margins),
            "certified": v.certified,
            "classes": [
                {"diagram": [list(x) for x in N.vertices], "samples": [_q(t) for t in ts]} for N, ts in ar.classes()
            ],
        },
        warnings=list(v.warnings),
    )


def cmd_zmember(session: Session, args) -> Report:
    phi, tup = _map_and_fiber(session, args)
    N = parse_diagram_literal(args.diagram, phi.n)
    oracle = _oracle(session, args, phi.n)
    policy = _policy(args, oracle)
    rep = diagram_at_point(phi, tup, args.k, policy=policy, with_basis=False)
    member = z_set_membership(phi, tup, N, args.mode, args.k, policy)
    return Report(
        command="zmember",
        config=_config(args, map=args.map, fiber=args.fiber, diagram=[list(v) for v in N.vertices]),
        diagram=_diagram_dict(rep.diagram),
        hs=list(rep.hs_table),
        chevalley={"l": rep.l_used},
        status=rep.status,
        verdict="member" if member else "not_member",
        details={"image": [_q(x) for x in tup.image]},
    )


COMMANDS = {
    "diagram": cmd_diagram,
    "hilbert": cmd_hilbert,
    "divide": cmd_divide,
    "chevalley": cmd_chevalley,
    "arc": cmd_arc,
    "zmember": cmd_zmember,
}


# ------------------------------------------------------------------ argparse


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _ArgParser(add_help=False)
    common.add_argument("session", help="session file")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--staircase", action="store_true", help="draw the diagram (n = 2)")
    common.add_argument("--allow-unstable", action="store_true", help="exit 0 on budget_exceeded")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for sample grids")

    search = _ArgParser(add_help=False)
    search.add_argument("--l", type=_nonneg, default=None, help="fixed jet order")
    search.add_argument("--auto", action="store_true", help="search for l (the default)")
    search.add_argument("--window", type=_positive, default=2)
    search.add_argument("--lmax", type=_nonneg, default=None)
    search.add_argument("--oracle", default=None, help="ideal of known relations (name or <...>)")

    p = _ArgParser(prog="formaljets", description="Diagrams of initial exponents through jets.")
    p.add_argument("--version", action="version", version=f"formaljets {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    d = sub.add_parser("diagram", parents=[common, search], help="diagram of an ideal or at a fiber")
    d.add_argument("--ideal")
    d.add_argument("--map")
    d.add_argument("--fiber")
    d.add_argument("--k", type=_nonneg, required=True)

    h = sub.add_parser("hilbert", parents=[common], help="Hilbert-Samuel table of an ideal")
    h.add_argument("--ideal", required=True)
    h.add_argument("--k", type=_nonneg, required=True)

    v = sub.add_parser("divide", parents=[common], help="Hironaka division")
    v.add_argument("--target", required=True)
    v.add_argument("--by", required=True)
    v.add_argument("--degree", type=_nonneg, required=True)

    c = sub.add_parser("chevalley", parents=[common, search], help="Chevalley estimate at a fiber")
    c.add_argument("--map", required=True)
    c.add_argument("--fiber", required=True)
    c.add_argument("--k", type=_nonneg, required=True)

    a = sub.add_parser("arc", parents=[common, search], help="diagrams along an arc")
    a.add_argument("--map", required=True)
    a.add_argument("--arc", required=True)
    a.add_argument("--samples", default="1,1/2,1/4,1/8,0")
    a.add_argument("--k", type=_nonneg, required=True)

    z = sub.add_parser("zmember", parents=[common, search], help="membership in Z_N at a fiber")
    z.add_argument("--map", required=True)
    z.add_argument("--fiber", required=True)
    z.add_argument("--diagram", required=True)
    z.add_argument("--mode", choices=("geq", "gt"), default="geq")
    z.add_argument("--k", type=_nonneg, required=True)
    return p


def run_command(session: Session, args) -> Report:
    return COMMANDS[args.command](session, args)


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    where = ""
    try:
        args = build_parser().parse_args(argv)
        try:
            text = Path(args.session).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read session file: {exc.strerror}") from None
        where = f"{args.session}: "
        session = parse_session(text)
        where = ""
        report = run_command(session, args)
    except ParseError as exc:
        print(f"error: {where}{exc}", file=stderr)
        return EXIT_PARSE
    except CrossCheckError as exc:
        print(f"internal error: {exc}", file=stderr)
        return EXIT_INTERNAL
    except (FormalJetsError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DOMAIN
    if args.format == "structured":
        stdout.write(emit_structured(report))
    else:
        stdout.write(emit_text(report, args.staircase))
    if report.uncertified and not args.allow_unstable:
        print("error: result not certified (budget_exceeded); pass --allow-unstable to accept it", file=stderr)
        return EXIT_UNSTABLE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
