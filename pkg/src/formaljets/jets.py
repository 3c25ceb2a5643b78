"""Jet spaces and jet matrices of polynomial maps.

Jet coordinates of a series G at b are the derivatives D^beta G(b) for
|beta| <= l, laid out in increasing multi-index order (:class:`JetIndexing`).
The jet matrix of phi at a has rows alpha (source jets) and columns beta
(target jets), with entry

    L^beta_alpha(a) = (1/beta!) d^alpha/dx^alpha (phi - b)^beta (a),   b = phi(a),

so that ``jet_matrix @ jet_vector(G) == jet_vector(G o phi)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

from .errors import DimensionError, DomainError
from .linalg import AD_BUDGET, RationalMatrix, Subspace, ker_theta, vstack
from .multiindex import MultiIndex, exponents_up_to, jet_dimension, sub, unit
from .series import TruncatedSeries, as_rational, recenter_polynomial

Point = Tuple[Fraction, ...]


def mi_factorial(beta: MultiIndex) -> int:
    out = 1
    for b in beta:
        out *= factorial(b)
    return out


def as_point(values: Sequence, dim: Optional[int] = None) -> Point:
    pt = tuple(as_rational(v) for v in values)
    if dim is not None and len(pt) != dim:
        raise DimensionError(f"point of length {len(pt)} in a space of dimension {dim}")
    return pt


@dataclass(frozen=True)
class PolynomialMap:
    """phi : Q^m -> Q^n with exact polynomial components in x1..xm."""

    m: int
    n: int
    components: Tuple[TruncatedSeries, ...]
    name: str = "phi"

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.n:
            raise DimensionError(f"{len(comps)} components for a map into Q^{self.n}")
        for c in comps:
            if c.n != self.m:
                raise DimensionError(f"component in {c.n} variables for a map from Q^{self.m}")
            if not c.is_polynomial:
                raise ValueError("map components must be exact polynomials")

    @classmethod
    def identity(cls, n: int) -> "PolynomialMap":
        return cls(n, n, tuple(TruncatedSeries.variable(n, i) for i in range(n)), "id")

    def __call__(self, a: Sequence) -> Point:
        pt = as_point(a, self.m)
        return tuple(c.evaluate(pt) for c in self.components)

    def compose(self, G: TruncatedSeries) -> TruncatedSeries:
        """G o phi for an exact polynomial G in y1..yn."""
        if G.n != self.n:
            raise DimensionError(f"G has {G.n} variables, the map has {self.n} components")
        return G.substitute(list(self.components), self.m)

    def localized(self, a: Sequence, bound: int) -> Tuple[TruncatedSeries, ...]:
        """Components phi_i(a + z) - phi_i(a), as series in z mod m^(bound+1)."""
        pt = as_point(a, self.m)
        out = []
        for c in self.components:
            r = recenter_polynomial(c, pt)
            out.append((r - r[(0,) * self.m]).truncate(bound))
        return tuple(out)


@dataclass(frozen=True)
class FiberTuple:
    """Source points a_1..a_s with the common image b."""

    points: Tuple[Point, ...]
    image: Point
    label: str = ""

    @classmethod
    def over(cls, phi: PolynomialMap, points: Sequence[Sequence], label: str = "") -> "FiberTuple":
        if not points:
            raise DomainError("a fiber tuple needs at least one point")
        pts = tuple(as_point(p, phi.m) for p in points)
        b = phi(pts[0])
        for i, p in enumerate(pts[1:], start=1):
            bi = phi(p)
            if bi != b:
                raise DomainError(
                    f"point {i} maps to {_fmt_point(bi)}, point 0 maps to {_fmt_point(b)}"
                )
        return cls(pts, b, label)

    def __len__(self):
        return len(self.points)


def _fmt_point(p: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"


class JetIndexing:
    """Coordinate layout of J^l in n variables: multi-indices in increasing order."""

    def __init__(self, n: int, l: int):
        if l < 0:
            raise ValueError("jet order must be non-negative")
        self.n = n
        self.l = l
        self.exponents: Tuple[MultiIndex, ...] = exponents_up_to(n, l)
        self.position: Dict[MultiIndex, int] = {e: i for i, e in enumerate(self.exponents)}

    def __len__(self):
        return len(self.exponents)

    def dim(self, k: Optional[int] = None) -> int:
        """Number of coordinates of degree <= k (default l)."""
        return jet_dimension(self.n, self.l if k is None else k)

    def __eq__(self, other):
        return isinstance(other, JetIndexing) and (self.n, self.l) == (other.n, other.l)

    def __hash__(self):
        return hash((self.n, self.l))


def jet_vector(G: TruncatedSeries, l: int, b: Optional[Sequence] = None) -> Tuple[Fraction, ...]:
    """(D^beta G(b))_{|beta| <= l}; with b=None, G is already centered."""
    if b is not None:
        G = recenter_polynomial(G, b)
    if G.bound is not None and G.bound < l:
        raise DimensionError(f"series known to degree {G.bound}, jet of order {l} requested")
    return tuple(G[e] * mi_factorial(e) for e in exponents_up_to(G.n, l))


def series_from_jet(vec: Sequence, n: int, l: int) -> TruncatedSeries:
    """Inverse of :func:`jet_vector`: a series mod m^(l+1)."""
    exps = exponents_up_to(n, l)
    if len(vec) != len(exps):
        raise DimensionError(f"jet vector of length {len(vec)}, expected {len(exps)}")
    return TruncatedSeries(n, {e: as_rational(v) / mi_factorial(e) for e, v in zip(exps, vec)}, l)


def jet_matrix(phi: PolynomialMap, a: Sequence, l: int) -> RationalMatrix:
    """Matrix of J^l(b) -> J^l(a), G -> G o phi, in derivative coordinates."""
    pt = as_point(a, phi.m)
    psi = phi.localized(pt, l)
    src = exponents_up_to(phi.m, l)
    tgt = exponents_up_to(phi.n, l)
    # powers psi^beta built incrementally: psi^beta = psi^(beta - e_i) * psi_i
    powers: Dict[MultiIndex, TruncatedSeries] = {(0,) * phi.n: TruncatedSeries.constant(phi.m, 1, l)}
    for beta in tgt[1:]:
        i = next(j for j, e in enumerate(beta) if e)
        powers[beta] = powers[sub(beta, unit(phi.n, i))] * psi[i]
    afact = [mi_factorial(al) for al in src]
    rows = [[Fraction(0)] * len(tgt) for _ in src]
    for j, beta in enumerate(tgt):
        P = powers[beta]
        bf = mi_factorial(beta)
        for i, al in enumerate(src):
            c = P[al]
            if c:
                if sum(beta) > sum(al):
                    raise AssertionError(f"jet matrix not triangular at alpha={al}, beta={beta}")
                rows[i][j] = c * afact[i] / bf
    return RationalMatrix(rows, len(tgt))


def stacked_jet_matrix(phi: PolynomialMap, tup: FiberTuple, l: int) -> RationalMatrix:
    if not tup.points:
        raise DomainError("empty fiber tuple")
    for p in tup.points:
        if phi(p) != tup.image:
            raise DomainError(f"point {_fmt_point(p)} is not over {_fmt_point(tup.image)}")
    return vstack([jet_matrix(phi, p, l) for p in tup.points])


def split_S_T(jetstack: RationalMatrix, indexing: JetIndexing, k: int) -> Tuple[RationalMatrix, RationalMatrix]:
    """Columns |beta| <= k (S) and k < |beta| <= l (T)."""
    if jetstack.ncols != len(indexing):
        raise DimensionError(f"{jetstack.ncols} columns, indexing has {len(indexing)}")
    if not 0 <= k <= indexing.l:
        raise ValueError(f"k={k} outside 0..{indexing.l}")
    d = indexing.dim(k)
    return jetstack.columns(range(d)), jetstack.columns(range(d, jetstack.ncols))


def e_lk(
    phi: PolynomialMap,
    tup: FiberTuple,
    l: int,
    k: int,
    cross_check: bool = False,
    budget: int = AD_BUDGET,
) -> Subspace:
    """E^lk: degree-<=k projection of the kernel of the stacked jet matrix."""
    if k > l:
        raise ValueError(f"k={k} exceeds l={l}")
    M = stacked_jet_matrix(phi, tup, l)
    S, T = split_S_T(M, JetIndexing(phi.n, l), k)
    return ker_theta(S, T, budget=budget, cross_check=cross_check).subspace


E_lk = e_lk
