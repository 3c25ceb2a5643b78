"""Ideals of Q[[y]] given by explicit generators, seen through their jets.

All jet subspaces use the derivative coordinates of :mod:`formaljets.jets`,
so they compare directly with the E^lk subspaces of a map.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import List, NamedTuple, Sequence, Tuple

from .errors import DimensionError, TruncationError
from .jets import jet_vector, mi_factorial
from .linalg import Subspace
from .multiindex import Diagram, diagram_from_vertices, exponents_up_to, hilbert_samuel_from_diagram
from .series import TruncatedSeries, recenter_polynomial


@dataclass(frozen=True)
class IdealPresentation:
    n: int
    generators: Tuple[TruncatedSeries, ...]
    label: str = "I"

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("an ideal needs at least one generator (use 0 for the zero ideal)")
        for g in gens:
            if g.n != self.n:
                raise DimensionError(f"generator in {g.n} variables for an ideal in {self.n}")

    def recentered(self, b: Sequence) -> "IdealPresentation":
        """The same ideal in coordinates z = y - b (generators must be exact)."""
        return IdealPresentation(self.n, tuple(recenter_polynomial(g, b) for g in self.generators), self.label)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)


class IdealDiagram(NamedTuple):
    diagram: Diagram
    completeness: str


def _check_bounds(I: IdealPresentation, k: int) -> None:
    for g in I.generators:
        if g.bound is not None and g.bound < k:
            raise TruncationError(f"generator known to degree {g.bound}, degree {k} requested")


def ideal_jet_subspace(I: IdealPresentation, k: int) -> Subspace:
    """(I + m^(k+1)) / m^(k+1) inside J^k.

    Spanned by y^gamma * g_i with |gamma| <= k: a combination sum Q_i g_i
    only depends on the Q_i modulo m^(k+1), and every monomial of degree
    > k kills g_i in J^k, so the cap on gamma loses nothing.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    _check_bounds(I, k)
    vecs = []
    for g in I.generators:
        gk = g.with_bound(k)
        if gk.is_zero():
            continue
        order = min(sum(e) for e in gk.coeffs)
        for gamma in exponents_up_to(I.n, k - order):
            vecs.append(jet_vector(gk.shift(gamma), k))
    return Subspace.span(vecs, comb(I.n + k, k))


def diagram_of_subspace(V: Subspace, n: int, k: int) -> Diagram:
    """Diagram generated by the initial exponents (echelon pivots) of V."""
    exps = exponents_up_to(n, k)
    if V.ambient != len(exps):
        raise DimensionError(f"subspace of Q^{V.ambient} is not a subspace of J^{k} in {n} variables")
    return diagram_from_vertices([exps[p] for p in V.pivots], n)


def diagram_of_ideal(I: IdealPresentation, k: int) -> IdealDiagram:
    """Vertices of N(I) of degree <= k; nothing is claimed beyond degree k."""
    return IdealDiagram(diagram_of_subspace(ideal_jet_subspace(I, k), I.n, k), "exact_to_k")


def hilbert_samuel_direct(I: IdealPresentation, k: int) -> int:
    V = ideal_jet_subspace(I, k)
    h = comb(I.n + k, k) - V.dim
    via_diagram = hilbert_samuel_from_diagram(diagram_of_subspace(V, I.n, k), k)
    assert h == via_diagram, f"H({k}) = {h} but the diagram counts {via_diagram}"
    return h


def membership_jet(F: TruncatedSeries, I: IdealPresentation, k: int) -> bool:
    """Whether F lies in I + m^(k+1)."""
    if F.n != I.n:
        raise DimensionError(f"F has {F.n} variables, the ideal {I.n}")
    if F.bound is not None and F.bound < k:
        raise TruncationError(f"F known to degree {F.bound}, degree {k} requested")
    return ideal_jet_subspace(I, k).contains(jet_vector(F.with_bound(k), k))


def standard_basis_from_subspace(V: Subspace, n: int, k: int) -> List[TruncatedSeries]:
    """Reduced standard basis mod m^(k+1) read off the echelon rows of V.

    The pivots of V are exactly the diagram's exponents of degree <= k, and
    a reduced echelon row vanishes at every other pivot, so its tail already
    avoids the diagram. Only the vertex rows are kept.
    """
    exps = exponents_up_to(n, k)
    N = diagram_of_subspace(V, n, k)
    vertices = set(N.vertices)
    out = []
    for p, row in zip(V.pivots, V.basis):
        if exps[p] not in vertices:
            continue
        # derivative coordinates -> Taylor coefficients, leading coefficient 1
        lead = row[p] / mi_factorial(exps[p])
        coeffs = {e: v / mi_factorial(e) / lead for e, v in zip(exps, row) if v}
        out.append(TruncatedSeries(n, coeffs, k))
    return out


def standard_basis_truncated(I: IdealPresentation, k: int) -> List[TruncatedSeries]:
    return standard_basis_from_subspace(ideal_jet_subspace(I, k), I.n, k)
