"""Truncated formal power series with exact rational coefficients.

A :class:`TruncatedSeries` is known exactly modulo m^(D+1), where D is its
``bound``. ``bound=None`` marks an exact polynomial (known to every order);
polynomial maps and ideal generators use that form.

Bounds propagate conservatively: sums and products carry the minimum of the
operand bounds, and any term above the resulting bound is dropped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import DimensionError, TruncationError, ZeroSeriesError
from .multiindex import (
    Diagram,
    MultiIndex,
    DeltaPartition,
    add,
    order_key,
    sub,
    unit,
)

Rational = Fraction


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or int")
    return Fraction(value)


def _min_bound(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    n: int
    coeffs: Mapping[MultiIndex, Fraction] = field(default_factory=dict)
    bound: Optional[int] = None

    def __post_init__(self):
        clean: Dict[MultiIndex, Fraction] = {}
        for e, c in self.coeffs.items():
            e = tuple(e)
            if len(e) != self.n:
                raise DimensionError(f"exponent {e} not in N^{self.n}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e}")
            if self.bound is not None and sum(e) > self.bound:
                continue
            c = as_rational(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        clean = {e: c for e, c in clean.items() if c}
        object.__setattr__(self, "coeffs", clean)

    # ---- constructors

    @classmethod
    def zero(cls, n: int, bound: Optional[int] = None) -> "TruncatedSeries":
        return cls(n, {}, bound)

    @classmethod
    def constant(cls, n: int, c, bound: Optional[int] = None) -> "TruncatedSeries":
        return cls(n, {(0,) * n: c}, bound)

    @classmethod
    def monomial(cls, alpha: MultiIndex, c=1, bound: Optional[int] = None) -> "TruncatedSeries":
        return cls(len(alpha), {tuple(alpha): c}, bound)

    @classmethod
    def variable(cls, n: int, i: int, bound: Optional[int] = None) -> "TruncatedSeries":
        return cls.monomial(unit(n, i), 1, bound)

    # ---- basic queries

    @property
    def is_polynomial(self) -> bool:
        return self.bound is None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, alpha) -> Fraction:
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def terms(self) -> List[Tuple[MultiIndex, Fraction]]:
        """Terms in increasing graded order."""
        return sorted(self.coeffs.items(), key=lambda t: order_key(t[0]))

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.n == other.n and self.bound == other.bound and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.bound, frozenset(self.coeffs.items())))

    def __repr__(self):
        b = "exact" if self.bound is None else f"mod m^{self.bound + 1}"
        return f"TruncatedSeries({format_series(self)}, {b})"

    def same_modulo(self, other: "TruncatedSeries", D: int) -> bool:
        """Equality of the D-jets."""
        return self.truncate(D).coeffs == other.truncate(D).coeffs

    def truncate(self, D: int) -> "TruncatedSeries":
        if self.bound is not None and D > self.bound:
            raise TruncationError(f"series known only modulo m^{self.bound + 1}, asked for degree {D}")
        return TruncatedSeries(self.n, self.coeffs, D)

    def with_bound(self, D: Optional[int]) -> "TruncatedSeries":
        """Lower the bound (or keep exactness with ``None``)."""
        if D is None:
            return self
        return self.truncate(min(D, self.bound) if self.bound is not None else D)

    # ---- arithmetic

    def _check(self, other: "TruncatedSeries"):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.n, other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return TruncatedSeries(self.n, out, _min_bound(self.bound, other.bound))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.n, {e: -c for e, c in self.coeffs.items()}, self.bound)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = as_rational(c)
        return TruncatedSeries(self.n, {e: c * v for e, v in self.coeffs.items()}, self.bound)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        D = _min_bound(self.bound, other.bound)
        out: Dict[MultiIndex, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            if D is not None and d1 > D:
                continue
            for e2, c2 in other.coeffs.items():
                if D is not None and d1 + sum(e2) > D:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TruncatedSeries(self.n, out, D)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, p: int):
        if p < 0:
            raise ValueError("negative power")
        result = TruncatedSeries.constant(self.n, 1, self.bound)
        base = self
        while p:
            if p & 1:
                result = result * base
            base = base * base
            p >>= 1
        return result

    def shift(self, gamma: MultiIndex, c=1) -> "TruncatedSeries":
        """c * y^gamma * self."""
        c = as_rational(c)
        return TruncatedSeries(
            self.n, {add(e, gamma): c * v for e, v in self.coeffs.items()}, self.bound
        )

    # ---- evaluation / substitution

    def evaluate(self, point: Sequence) -> Fraction:
        if not self.is_polynomial:
            raise TruncationError("cannot evaluate a truncated series at a point")
        if len(point) != self.n:
            raise DimensionError(f"point of length {len(point)} for series in {self.n} variables")
        pt = [as_rational(p) for p in point]
        total = Fraction(0)
        for e, c in self.coeffs.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def substitute(self, values: Sequence["TruncatedSeries"], m: Optional[int] = None) -> "TruncatedSeries":
        """Compose with the exact polynomial ``self``: y_i -> ``values[i]``.

        The result carries the minimum bound of ``values``. ``m`` (the number
        of variables of the result) is only needed when ``values`` is empty.
        """
        if not self.is_polynomial:
            raise TruncationError("only exact polynomials can be composed")
        if len(values) != self.n:
            raise DimensionError(f"{len(values)} substitutions for {self.n} variables")
        if values:
            m = values[0].n
        elif m is None:
            raise ValueError("target dimension needed for a constant")
        D = None
        for v in values:
            if v.n != m:
                raise DimensionError("substituted series live in different rings")
            D = _min_bound(D, v.bound)
        powers: List[Dict[int, TruncatedSeries]] = [dict() for _ in values]

        def power(i: int, k: int) -> TruncatedSeries:
            cache = powers[i]
            if k not in cache:
                cache[k] = TruncatedSeries.constant(m, 1, D) if k == 0 else power(i, k - 1) * values[i]
            return cache[k]

        total = TruncatedSeries.zero(m, D)
        for e, c in self.coeffs.items():
            term = TruncatedSeries.constant(m, c, D)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total


# ---------------------------------------------------------------- helpers


def polynomial(n: int, coeffs: Mapping[MultiIndex, object]) -> TruncatedSeries:
    """An exact polynomial in n variables."""
    return TruncatedSeries(n, dict(coeffs), None)


def support(F: TruncatedSeries) -> frozenset:
    return frozenset(F.coeffs)


def initial_exponent(F: TruncatedSeries) -> MultiIndex:
    """Minimum of the support in the graded order.

    Raises ZeroSeriesError when F vanishes to its known precision; whether
    that means "zero" or "undetermined" is the caller's call.
    """
    if not F.coeffs:
        raise ZeroSeriesError("initial exponent of a series that is zero to its known precision")
    return min(F.coeffs, key=order_key)


def initial_monomial(F: TruncatedSeries) -> TruncatedSeries:
    e = initial_exponent(F)
    return TruncatedSeries.monomial(e, F.coeffs[e], F.bound)


def recenter_polynomial(P: TruncatedSeries, b: Sequence) -> TruncatedSeries:
    """Taylor expansion of the polynomial P at the point b.

    The result is in coordinates z = y - b and is still exact.
    """
    if not P.is_polynomial:
        raise TruncationError("recentering needs an exact polynomial")
    if len(b) != P.n:
        raise DimensionError(f"point of length {len(b)} for polynomial in {P.n} variables")
    pt = [as_rational(x) for x in b]
    out: Dict[MultiIndex, Fraction] = {}
    for e, c in P.coeffs.items():
        # prod_i (z_i + b_i)^{e_i}, expanded by the binomial theorem
        partial: Dict[MultiIndex, Fraction] = {(): c}
        for ei, bi in zip(e, pt):
            nxt: Dict[MultiIndex, Fraction] = {}
            for head, v in partial.items():
                for j in range(ei + 1):
                    w = v * comb(ei, j) * bi ** (ei - j)
                    if not w:
                        continue
                    key = head + (j,)
                    nxt[key] = nxt.get(key, Fraction(0)) + w
            partial = nxt
        for k, v in partial.items():
            out[k] = out.get(k, Fraction(0)) + v
    return TruncatedSeries(P.n, out, None)


def _working_bound(series: Iterable[TruncatedSeries], bound: Optional[int]) -> int:
    D = bound
    for s in series:
        D = _min_bound(D, s.bound)
    if D is None:
        raise TruncationError("all inputs are exact polynomials; pass an explicit degree bound")
    return D


@dataclass
class DivisionResult:
    quotients: List[TruncatedSeries]
    remainder: TruncatedSeries
    bound: int
    partition: DeltaPartition

    def __iter__(self):
        yield self.quotients
        yield self.remainder


def hironaka_divide(
    G: TruncatedSeries,
    divisors: Sequence[TruncatedSeries],
    bound: Optional[int] = None,
    check: bool = True,
) -> DivisionResult:
    """Divide G by F_1..F_s: G = sum F_i Q_i + R modulo m^(D+1).

    D is the minimum of all bounds (and ``bound`` if given). Each step takes
    the least surviving exponent gamma of the working series; if gamma lies
    in the first-match block Delta_i it is cancelled by a multiple of F_i,
    otherwise the term moves to R. gamma strictly increases, so the loop
    ends within the finitely many exponents of degree <= D.
    """
    if not divisors:
        raise ValueError("need at least one divisor")
    n = G.n
    for F in divisors:
        if F.n != n:
            raise DimensionError(f"dimension mismatch: {F.n} vs {n}")
    D = _working_bound([G, *divisors], bound)
    Fs = [F.with_bound(D) for F in divisors]
    alphas = []
    for i, F in enumerate(Fs):
        if F.is_zero():
            raise ZeroSeriesError(f"divisor {i} is zero modulo m^{D + 1}")
        alphas.append(initial_exponent(F))
    part = DeltaPartition(alphas, n)
    leads = [F.coeffs[a] for F, a in zip(Fs, alphas)]

    work: Dict[MultiIndex, Fraction] = dict(G.with_bound(D).coeffs)
    quotients: List[Dict[MultiIndex, Fraction]] = [dict() for _ in Fs]
    remainder: Dict[MultiIndex, Fraction] = {}
    while work:
        gamma = min(work, key=order_key)
        c = work.pop(gamma)
        i = part.classify(gamma)
        if i is None:
            remainder[gamma] = c
            continue
        q = c / leads[i]
        shift = sub(gamma, alphas[i])
        quotients[i][shift] = quotients[i].get(shift, Fraction(0)) + q
        for e, v in Fs[i].coeffs.items():
            if e == alphas[i]:
                continue
            tgt = add(e, shift)
            if sum(tgt) > D:
                continue
            nv = work.get(tgt, Fraction(0)) - q * v
            if nv:
                work[tgt] = nv
            else:
                work.pop(tgt, None)

    result = DivisionResult(
        [TruncatedSeries(n, q, D) for q in quotients],
        TruncatedSeries(n, remainder, D),
        D,
        part,
    )
    if check:
        check_division(G, Fs, result)
    return result


def check_division(G: TruncatedSeries, divisors: Sequence[TruncatedSeries], result: DivisionResult) -> None:
    """Assert the division contract; raises AssertionError on violation."""
    D = result.bound
    part = result.partition
    total = result.remainder
    for F, Q in zip(divisors, result.quotients):
        total = total + F.with_bound(D) * Q
    assert total.same_modulo(G.with_bound(D), D), "G != sum F_i Q_i + R"
    for i, (a, Q) in enumerate(zip(part.exponents, result.quotients)):
        for e in Q.coeffs:
            assert part.classify(add(a, e)) == i, f"quotient {i} term {e} leaves Delta_{i}"
    for e in result.remainder.coeffs:
        assert part.classify(e) is None, f"remainder term {e} lies in the diagram"
    Gd = G.with_bound(D)
    if Gd.coeffs:
        g = order_key(initial_exponent(Gd))
        if result.remainder.coeffs:
            assert order_key(initial_exponent(result.remainder)) >= g
        for a, Q in zip(part.exponents, result.quotients):
            if Q.coeffs:
                assert order_key(add(a, initial_exponent(Q))) >= g


def normalize(F: TruncatedSeries) -> TruncatedSeries:
    """Scale F so that its initial coefficient is 1."""
    e = initial_exponent(F)
    return F.scale(1 / F.coeffs[e])


def reduce_to_standard_basis(
    generators: Sequence[TruncatedSeries],
    N: Diagram,
    bound: Optional[int] = None,
) -> List[TruncatedSeries]:
    """Reduced standard basis y^(alpha^i) + tail with tails outside N.

    The generators' initial exponents must be exactly the vertices of N.
    Each tail is divided by the whole system and replaced by its remainder.
    """
    if len(generators) != len(N.vertices):
        raise ValueError("need exactly one generator per vertex of the diagram")
    D = _working_bound(generators, bound)
    gens = [normalize(g.with_bound(D)) for g in generators]
    exps = [initial_exponent(g) for g in gens]
    if sorted(exps, key=order_key) != list(N.vertices):
        raise ValueError(f"initial exponents {exps} do not match the vertices {list(N.vertices)}")
    order = sorted(range(len(gens)), key=lambda i: order_key(exps[i]))
    gens = [gens[i] for i in order]
    out = []
    for g in gens:
        a = initial_exponent(g)
        tail = g - TruncatedSeries.monomial(a, 1, D)
        if tail.is_zero():
            out.append(g)
            continue
        R = hironaka_divide(tail, gens, bound=D).remainder
        out.append(TruncatedSeries.monomial(a, 1, D) + R)
    return out


def format_series(F: TruncatedSeries, var: str = "y", indexed: bool = True) -> str:
    """Polynomial text in var1, var2, ...; ``indexed=False`` writes a bare var (n = 1)."""
    if not F.coeffs:
        return "0"
    names = [f"{var}{i + 1}" if indexed else var for i in range(F.n)]
    parts = []
    for e, c in F.terms():
        mono = "*".join(names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    s = " + ".join(parts)
    return s.replace("+ -", "- ")
