"""Session files: named maps, ideals, points, fiber tuples and arcs.

Grammar (whitespace-insensitive, ``#`` starts a comment)::

    map NAME : R^m -> R^n { y1 = <poly in x1..xm>; ... }
    ideal NAME [: R^n] = < poly, ... >
    point NAME = (q1, ..., qm)
    fiber NAME over MAP = [ (q, ...) | POINT, ... ]
    arc NAME(w) for MAP = [ (p1(w), ..., pm(w)), ... ]

Numbers are integers or fractions p/q; decimals are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .errors import DomainError, ParseError
from .ideals import IdealPresentation
from .jets import FiberTuple, PolynomialMap
from .multiindex import Diagram, diagram_from_vertices, empty_diagram
from .series import TruncatedSeries
from .strata import Arc

KEYWORDS = ("map", "ideal", "point", "fiber", "arc")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<decimal>\d*\.\d+|\d+\.)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<arrow>->)
  | (?P<sym>[:{};=<>,()\[\]+\-*^/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, sym, end
    value: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    toks: List[Token] = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind == "decimal":
            raise ParseError(f"decimal literal {val!r} is not allowed; write it as a fraction p/q", line, col)
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("int", "name"):
                toks.append(Token(kind, val, line, col))
            elif kind in ("sym", "arrow"):
                toks.append(Token("sym", val, line, col))
            col += len(val)
        i = m.end()
    toks.append(Token("end", "", line, col))
    return toks


@dataclass
class Session:
    maps: Dict[str, PolynomialMap] = field(default_factory=dict)
    ideals: Dict[str, IdealPresentation] = field(default_factory=dict)
    points: Dict[str, Tuple[Fraction, ...]] = field(default_factory=dict)
    fibers: Dict[str, FiberTuple] = field(default_factory=dict)
    fiber_maps: Dict[str, str] = field(default_factory=dict)
    arcs: Dict[str, Arc] = field(default_factory=dict)
    arc_maps: Dict[str, str] = field(default_factory=dict)

    def names(self) -> set:
        return set(self.maps) | set(self.ideals) | set(self.points) | set(self.fibers) | set(self.arcs)


class VarSpec:
    """Which variable names a polynomial may use, and how they map to indices."""

    def __init__(self, prefix: Optional[str], nvars: Optional[int], single: Optional[str] = None):
        self.prefix = prefix
        self.nvars = nvars
        self.single = single
        self.seen_max = 0

    def index(self, tok: Token) -> int:
        if self.single is not None:
            if tok.value == self.single:
                return 0
            raise ParseError(f"unknown variable {tok.value!r}; the parameter is {self.single!r}", tok.line, tok.column)
        m = re.fullmatch(re.escape(self.prefix) + r"([1-9]\d*)", tok.value)
        if m is None:
            raise ParseError(f"unknown variable {tok.value!r}; expected {self.prefix}1, {self.prefix}2, ...", tok.line, tok.column)
        i = int(m.group(1))
        if self.nvars is not None and i > self.nvars:
            raise ParseError(f"variable {tok.value} out of range 1..{self.nvars}", tok.line, tok.column)
        self.seen_max = max(self.seen_max, i)
        return i - 1


# polynomials are parsed into {exponent dict keyed by variable index} and
# converted to TruncatedSeries once the variable count is known
Poly = Dict[Tuple[Tuple[int, int], ...], Fraction]


def _padd(a: Poly, b: Poly, sign=1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, Fraction(0)) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            d = dict(e1)
            for i, k in e2:
                d[i] = d.get(i, 0) + k
            e = tuple(sorted(d.items()))
            v = out.get(e, Fraction(0)) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_to_series(p: Poly, n: int) -> TruncatedSeries:
    coeffs = {}
    for e, c in p.items():
        exp = [0] * n
        for i, k in e:
            exp[i] = k
        coeffs[tuple(exp)] = c
    return TruncatedSeries(n, coeffs, None)


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    # ---- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        t = tok or self.tok
        return ParseError(msg, t.line, t.column)

    def _describe(self, t: Token) -> str:
        return "end of input" if t.kind == "end" else repr(t.value)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "end":
            self.pos += 1
        return t

    def at(self, value: str) -> bool:
        return self.tok.kind == "sym" and self.tok.value == value

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise self.error(f"expected {value!r}, found {self._describe(self.tok)}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if self.tok.kind != "name" or self.tok.value != word:
            raise self.error(f"expected {word!r}, found {self._describe(self.tok)}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected {what}, found {self._describe(self.tok)}")
        return self.advance()

    def expect_int(self) -> Tuple[int, Token]:
        if self.tok.kind != "int":
            raise self.error(f"expected an integer, found {self._describe(self.tok)}")
        t = self.advance()
        return int(t.value), t

    # ---- numbers and polynomials

    def rational(self) -> Fraction:
        sign = 1
        while self.at("-") or self.at("+"):
            if self.advance().value == "-":
                sign = -sign
        num, _ = self.expect_int()
        if self.at("/"):
            self.advance()
            den, dt = self.expect_int()
            if den == 0:
                raise self.error("division by zero in a rational literal", dt)
            return sign * Fraction(num, den)
        return sign * Fraction(num)

    def polynomial(self, vars: VarSpec) -> Poly:
        if self.tok.kind == "end" or (self.tok.kind == "sym" and self.tok.value in ",;)>]}"):
            raise self.error(f"expected a polynomial, found {self._describe(self.tok)}")
        out = self._term(vars)
        while self.at("+") or self.at("-"):
            sign = 1 if self.advance().value == "+" else -1
            out = _padd(out, self._term(vars), sign)
        return out

    def _term(self, vars: VarSpec) -> Poly:
        out = self._unary(vars)
        while self.at("*"):
            self.advance()
            out = _pmul(out, self._unary(vars))
        if self.at("/"):
            raise self.error("division is only allowed inside a rational literal p/q")
        return out

    def _unary(self, vars: VarSpec) -> Poly:
        if self.at("-"):
            self.advance()
            return {e: -c for e, c in self._unary(vars).items()}
        if self.at("+"):
            self.advance()
            return self._unary(vars)
        return self._power(vars)

    def _power(self, vars: VarSpec) -> Poly:
        base = self._atom(vars)
        if self.at("^"):
            self.advance()
            if self.at("-"):
                raise self.error("negative exponents are not allowed")
            k, _ = self.expect_int()
            out: Poly = {(): Fraction(1)}
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def _atom(self, vars: VarSpec) -> Poly:
        t = self.tok
        if t.kind == "int":
            self.advance()
            c = Fraction(int(t.value))
            if self.at("/"):
                self.advance()
                den, dt = self.expect_int()
                if den == 0:
                    raise self.error("division by zero in a rational literal", dt)
                c = c / den
            return {(): c} if c else {}
        if t.kind == "name":
            self.advance()
            return {((vars.index(t), 1),): Fraction(1)}
        if self.at("("):
            self.advance()
            p = self.polynomial(vars)
            self.expect(")")
            return p
        raise self.error(f"expected a number, variable or '(', found {self._describe(t)}")

    def point_literal(self, dim: Optional[int] = None) -> Tuple[Fraction, ...]:
        start = self.expect("(")
        vals = [self.rational()]
        while self.at(","):
            self.advance()
            vals.append(self.rational())
        self.expect(")")
        if dim is not None and len(vals) != dim:
            raise self.error(f"point has {len(vals)} coordinates, expected {dim}", start)
        return tuple(vals)

    def space(self) -> int:
        t = self.expect_name("'R'")
        if t.value != "R":
            raise self.error(f"expected 'R', found {t.value!r}", t)
        self.expect("^")
        d, dt = self.expect_int()
        if d < 1:
            raise self.error("dimension must be positive", dt)
        return d

    # ---- declarations

    def session(self) -> Session:
        s = Session()
        while self.tok.kind != "end":
            t = self.tok
            if t.kind != "name" or t.value not in KEYWORDS:
                raise self.error(f"expected a declaration ({', '.join(KEYWORDS)}), found {self._describe(t)}")
            getattr(self, "_decl_" + t.value)(s)
        return s

    def _new_name(self, s: Session) -> Token:
        t = self.expect_name()
        if t.value in KEYWORDS:
            raise self.error(f"{t.value!r} is a keyword", t)
        if t.value in s.names():
            raise self.error(f"name {t.value!r} is already defined", t)
        return t

    def _lookup(self, table: Dict, kind: str) -> Tuple[str, Token]:
        t = self.expect_name(f"a {kind} name")
        if t.value not in table:
            raise self.error(f"unknown {kind} {t.value!r}", t)
        return t.value, t

    def _decl_map(self, s: Session) -> None:
        self.advance()
        name = self._new_name(s)
        self.expect(":")
        m = self.space()
        self.expect("->")
        n = self.space()
        self.expect("{")
        comps: Dict[int, TruncatedSeries] = {}
        while not self.at("}"):
            lhs = self.expect_name("a component y1..yn")
            mm = re.fullmatch(r"y([1-9]\d*)", lhs.value)
            if mm is None or int(mm.group(1)) > n:
                raise self.error(f"expected a component y1..y{n}, found {lhs.value!r}", lhs)
            i = int(mm.group(1)) - 1
            if i in comps:
                raise self.error(f"component {lhs.value} defined twice", lhs)
            self.expect("=")
            comps[i] = poly_to_series(self.polynomial(VarSpec("x", m)), m)
            self.expect(";")
        close = self.expect("}")
        missing = [f"y{i + 1}" for i in range(n) if i not in comps]
        if missing:
            raise self.error(f"map {name.value} is missing {', '.join(missing)}", close)
        s.maps[name.value] = PolynomialMap(m, n, tuple(comps[i] for i in range(n)), name.value)

    def _decl_ideal(self, s: Session) -> None:
        self.advance()
        name = self._new_name(s)
        n = None
        if self.at(":"):
            self.advance()
            n = self.space()
        self.expect("=")
        s.ideals[name.value] = self.ideal_body(n, name.value)

    def ideal_body(self, n: Optional[int], label: str) -> IdealPresentation:
        self.expect("<")
        vars = VarSpec("y", n)
        polys = [self.polynomial(vars)]
        while self.at(","):
            self.advance()
            polys.append(self.polynomial(vars))
        self.expect(">")
        if n is None:
            n = max(vars.seen_max, 1)
        return IdealPresentation(n, tuple(poly_to_series(p, n) for p in polys), label)

    def _decl_point(self, s: Session) -> None:
        self.advance()
        name = self._new_name(s)
        self.expect("=")
        s.points[name.value] = self.point_literal()

    def _decl_fiber(self, s: Session) -> None:
        self.advance()
        name = self._new_name(s)
        self.expect_keyword("over")
        mname, _ = self._lookup(s.maps, "map")
        phi = s.maps[mname]
        self.expect("=")
        self.expect("[")
        pts, where = [], []
        while True:
            t = self.tok
            if t.kind == "name":
                pname, pt = self._lookup(s.points, "point")
                p = s.points[pname]
                if len(p) != phi.m:
                    raise self.error(f"point {pname} has {len(p)} coordinates, map {mname} needs {phi.m}", pt)
            else:
                p = self.point_literal(phi.m)
            pts.append(p)
            where.append(t)
            if not self.at(","):
                break
            self.advance()
        self.expect("]")
        b0 = phi(pts[0])
        for p, t in zip(pts[1:], where[1:]):
            b = phi(p)
            if b != b0:
                raise self.error(
                    f"fiber {name.value}: {mname}{_fmt(p)} = {_fmt(b)} but {mname}{_fmt(pts[0])} = {_fmt(b0)}", t
                )
        s.fibers[name.value] = FiberTuple.over(phi, pts, name.value)
        s.fiber_maps[name.value] = mname

    def _decl_arc(self, s: Session) -> None:
        self.advance()
        name = self._new_name(s)
        self.expect("(")
        par = self.expect_name("a parameter name")
        self.expect(")")
        self.expect_keyword("for")
        mname, _ = self._lookup(s.maps, "map")
        phi = s.maps[mname]
        self.expect("=")
        self.expect("[")
        vars = VarSpec(None, 1, single=par.value)
        curves = []
        while True:
            start = self.expect("(")
            comps = [poly_to_series(self.polynomial(vars), 1)]
            while self.at(","):
                self.advance()
                comps.append(poly_to_series(self.polynomial(vars), 1))
            self.expect(")")
            if len(comps) != phi.m:
                raise self.error(f"curve has {len(comps)} components, map {mname} needs {phi.m}", start)
            curves.append(tuple(comps))
            if not self.at(","):
                break
            self.advance()
        self.expect("]")
        arc = Arc(name.value, phi.m, tuple(curves), par.value)
        try:
            arc.validate(phi)
        except DomainError as exc:
            raise self.error(str(exc), name) from None
        s.arcs[name.value] = arc
        s.arc_maps[name.value] = mname


def _fmt(p) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"


def parse_session(text: str) -> Session:
    return Parser(text).session()


def _parse_whole(text: str, rule: Callable[[Parser], object]):
    p = Parser(text)
    out = rule(p)
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p._describe(p.tok)}")
    return out


def parse_ideal_literal(text: str, n: Optional[int] = None, label: str = "I") -> IdealPresentation:
    """An inline ``< poly, ... >``."""
    return _parse_whole(text, lambda p: p.ideal_body(n, label))


def parse_polynomial(text: str, n: int, prefix: str = "y") -> TruncatedSeries:
    return poly_to_series(_parse_whole(text, lambda p: p.polynomial(VarSpec(prefix, n))), n)


def parse_rational(text: str) -> Fraction:
    return _parse_whole(text, lambda p: p.rational())


def parse_rational_list(text: str) -> List[Fraction]:
    def rule(p: Parser):
        vals = [p.rational()]
        while p.at(","):
            p.advance()
            vals.append(p.rational())
        return vals

    return _parse_whole(text, rule)


def parse_diagram_literal(text: str, n: Optional[int] = None) -> Diagram:
    """``"(a,b);(c,d)"``: vertices, auto-minimalized. An empty string needs ``n``."""
    def rule(p: Parser):
        vs = []
        if p.tok.kind == "end":
            return vs
        while True:
            start = p.tok
            v = p.point_literal()
            if any(x.denominator != 1 or x < 0 for x in v):
                raise p.error("vertex entries must be non-negative integers", start)
            if n is not None and len(v) != n:
                raise p.error(f"vertex has {len(v)} entries, expected {n}", start)
            vs.append(tuple(int(x) for x in v))
            if not p.at(";"):
                break
            p.advance()
        return vs

    vs = _parse_whole(text, rule)
    if not vs:
        if n is None:
            raise ParseError("empty diagram literal needs a known dimension", 1, 1)
        return empty_diagram(n)
    lengths = {len(v) for v in vs}
    if len(lengths) != 1:
        raise ParseError("vertices of different lengths", 1, 1)
    return diagram_from_vertices(vs, n)
