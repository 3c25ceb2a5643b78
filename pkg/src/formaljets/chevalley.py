"""The formal ideal of relations of a map at a fiber tuple, through jets.

R^k (relations modulo m^(k+1)) is approached by E^lk, which shrinks as l
grows and equals R^k from some l on. That l is not computable from the
data alone, so every result carries a status:

* ``matched_oracle``: E^lk equals the jet subspace of user-supplied
  relations; since those relations lie in R^k and R^k lies in E^lk, this
  pins R^k exactly.
* ``stabilized_window``: E^lk did not change for ``window`` consecutive
  increments of l. A heuristic.
* ``budget_exceeded``: neither happened by ``l_max``. The subspace is then
  only an outer approximation of R^k, so its diagram is a lower bound in
  the diagram order.
* ``fixed_l``: the caller chose l; nothing is claimed about stabilization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import List, Optional, Sequence, Tuple

from .errors import CrossCheckError, DimensionError, DomainError, TruncationError
from .ideals import (
    IdealPresentation,
    diagram_of_subspace,
    ideal_jet_subspace,
    standard_basis_from_subspace,
)
from .jets import FiberTuple, JetIndexing, PolynomialMap, Point, e_lk, jet_vector, stacked_jet_matrix
from .linalg import AD_BUDGET, Subspace, ker_theta
from .multiindex import (
    Diagram,
    MultiIndex,
    diagram_contains,
    exponents_up_to,
    hilbert_samuel_table,
    order_key,
)
from .series import TruncatedSeries

MATCHED_ORACLE = "matched_oracle"
STABILIZED_WINDOW = "stabilized_window"
BUDGET_EXCEEDED = "budget_exceeded"
FIXED_L = "fixed_l"
STATUSES = (MATCHED_ORACLE, STABILIZED_WINDOW, BUDGET_EXCEEDED, FIXED_L)


def default_l_max(k: int) -> int:
    return 3 * k + 6


@dataclass(frozen=True)
class LPolicy:
    """How to choose l: a fixed value, or a search up to ``l_max``."""

    l: Optional[int] = None
    window: int = 2
    l_max: Optional[int] = None
    oracle: Optional[IdealPresentation] = None
    cross_check: bool = False

    def resolved_l_max(self, k: int) -> int:
        return default_l_max(k) if self.l_max is None else self.l_max


@dataclass
class ChevalleyEstimate:
    l: int
    status: str
    subspace: Subspace
    dims: List[Tuple[int, int]] = field(default_factory=list)  # (l, dim E^lk) visited

    def __iter__(self):
        yield self.l
        yield self.status


@dataclass
class DiagramReport:
    label: str
    k: int
    l_used: int
    status: str
    diagram: Diagram
    hs_table: Tuple[int, ...]
    image: Point
    standard_basis: Optional[List[TruncatedSeries]] = None
    jet_dim: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if tuple(self.hs_table) != hilbert_samuel_table(self.diagram, self.k):
            raise ValueError("HS table inconsistent with the diagram")

    @property
    def certified(self) -> bool:
        return self.status == MATCHED_ORACLE


def formal_ideal_jet(phi: PolynomialMap, tup: FiberTuple, k: int, l: int, cross_check: bool = False) -> Subspace:
    """E^lk, the candidate for R^k at this l."""
    return e_lk(phi, tup, l, k, cross_check=cross_check)


def validate_oracle(phi: PolynomialMap, oracle: IdealPresentation) -> None:
    """Every oracle generator must compose with phi to zero."""
    if oracle.n != phi.n:
        raise DimensionError(f"oracle ideal in {oracle.n} variables, map into Q^{phi.n}")
    for i, g in enumerate(oracle.generators):
        if not g.is_polynomial:
            raise DomainError("oracle generators must be exact polynomials")
        if not phi.compose(g).is_zero():
            raise DomainError(f"oracle generator {i} does not vanish on the image of {phi.name}")


def oracle_jet_subspace(oracle: IdealPresentation, b: Sequence, k: int) -> Subspace:
    return ideal_jet_subspace(oracle.recentered(b), k)


def chevalley_estimate(
    phi: PolynomialMap,
    tup: FiberTuple,
    k: int,
    window: int = 2,
    l_max: Optional[int] = None,
    oracle: Optional[IdealPresentation] = None,
    cross_check: bool = False,
) -> ChevalleyEstimate:
    """Search l = k, k+1, ..., l_max for the Chevalley estimate.

    With an oracle (relations written in the global coordinates y) the
    answer is the first l with E^lk equal to the oracle's jet subspace at
    b. Without one it is the first l of a run of ``window`` unchanged
    increments.
    """
    if not tup.points:
        raise DomainError("empty fiber tuple")
    if window < 1:
        raise ValueError("window must be at least 1")
    if l_max is None:
        l_max = default_l_max(k)
    if l_max < k:
        raise ValueError(f"l_max={l_max} is below k={k}")
    target = None
    if oracle is not None:
        validate_oracle(phi, oracle)
        target = oracle_jet_subspace(oracle, tup.image, k)
    dims: List[Tuple[int, int]] = []
    prev: Optional[Subspace] = None
    run_start = k
    for l in range(k, l_max + 1):
        E = formal_ideal_jet(phi, tup, k, l, cross_check)
        dims.append((l, E.dim))
        if prev is not None:
            if not E <= prev:
                raise CrossCheckError(f"E^({l},{k}) is not contained in E^({l - 1},{k})")
            if E != prev:
                run_start = l
        if target is not None:
            if not target <= E:
                raise DomainError("oracle relations are not contained in E^lk; oracle inconsistent with the map")
            if E == target:
                return ChevalleyEstimate(l, MATCHED_ORACLE, E, dims)
        elif l - run_start >= window:
            return ChevalleyEstimate(run_start, STABILIZED_WINDOW, prev, dims)
        prev = E
    return ChevalleyEstimate(l_max, BUDGET_EXCEEDED, prev, dims)


def nu_truncated(F: TruncatedSeries, Rk: Subspace, k: int) -> int:
    """min(nu(F), k+1): the largest l <= k+1 with F in R^k + m^l (jet level)."""
    if F.bound is not None and F.bound < k:
        raise TruncationError(f"F known to degree {F.bound}, degree {k} requested")
    exps = exponents_up_to(F.n, k)
    if Rk.ambient != len(exps):
        raise DimensionError(f"R^k lives in Q^{Rk.ambient}, J^{k} has dimension {len(exps)}")
    v = jet_vector(F.with_bound(k), k)
    for l in range(k + 1, -1, -1):
        extra = [[1 if j == i else 0 for j in range(len(exps))] for i, e in enumerate(exps) if sum(e) >= l]
        if (Rk + Subspace.span(extra, Rk.ambient)).contains(v):
            return l
    raise AssertionError("every jet lies in m^0")


def _resolve(
    phi: PolynomialMap, tup: FiberTuple, k: int, policy: LPolicy
) -> ChevalleyEstimate:
    if policy.l is not None:
        if policy.l < k:
            raise ValueError(f"l={policy.l} is below k={k}")
        E = formal_ideal_jet(phi, tup, k, policy.l, policy.cross_check)
        if policy.oracle is not None:
            validate_oracle(phi, policy.oracle)
            if E == oracle_jet_subspace(policy.oracle, tup.image, k):
                return ChevalleyEstimate(policy.l, MATCHED_ORACLE, E, [(policy.l, E.dim)])
        return ChevalleyEstimate(policy.l, FIXED_L, E, [(policy.l, E.dim)])
    return chevalley_estimate(
        phi, tup, k, policy.window, policy.resolved_l_max(k), policy.oracle, policy.cross_check
    )


def diagram_at_point(
    phi: PolynomialMap,
    tup: FiberTuple,
    k: int,
    l: Optional[int] = None,
    policy: Optional[LPolicy] = None,
    with_basis: bool = True,
) -> DiagramReport:
    """Diagram (vertices of degree <= k) of the relation ideal at the tuple.

    Coordinates are centered at the image point b. ``l`` fixes the jet
    order; otherwise ``policy`` (default: window search) chooses it.
    """
    if policy is None:
        policy = LPolicy(l=l)
    elif l is not None:
        policy = LPolicy(l, policy.window, policy.l_max, policy.oracle, policy.cross_check)
    est = _resolve(phi, tup, k, policy)
    V = est.subspace
    N = diagram_of_subspace(V, phi.n, k)
    basis = standard_basis_from_subspace(V, phi.n, k) if with_basis else None
    return DiagramReport(
        label=tup.label,
        k=k,
        l_used=est.l,
        status=est.status,
        diagram=N,
        hs_table=hilbert_samuel_table(N, k),
        image=tup.image,
        standard_basis=basis,
        jet_dim=V.dim,
    )


def alpha_membership_test(
    phi: PolynomialMap,
    tup: FiberTuple,
    alpha: MultiIndex,
    Nminus: Diagram,
    l: int,
    cross_check: bool = False,
) -> bool:
    """Decide alpha in N from the jet system restricted outside N^-(alpha).

    Columns beta <= alpha (eta) and beta > alpha (zeta), all with
    |beta| <= l and beta outside N^-(alpha). alpha is in the diagram exactly
    when some solution of A eta + B zeta = 0 has eta != 0.
    """
    alpha = tuple(alpha)
    if Nminus.n != phi.n or len(alpha) != phi.n:
        raise DimensionError(f"diagram or alpha not in N^{phi.n}")
    if diagram_contains(Nminus, alpha):
        return True
    if sum(alpha) > l:
        raise ValueError(f"|alpha|={sum(alpha)} exceeds l={l}")
    M = stacked_jet_matrix(phi, tup, l)
    idx = JetIndexing(phi.n, l)
    key = order_key(alpha)
    eta = [i for i, b in enumerate(idx.exponents) if not diagram_contains(Nminus, b) and order_key(b) <= key]
    zeta = [i for i, b in enumerate(idx.exponents) if not diagram_contains(Nminus, b) and order_key(b) > key]
    A = M.columns(eta)
    B = M.columns(zeta)
    return ker_theta(A, B, budget=AD_BUDGET, cross_check=cross_check).subspace.dim > 0


def relation_jet_dimension(n: int, k: int, hs_k: int) -> int:
    """dim R^k predicted by the HS value: C(n+k, k) - H(k)."""
    return comb(n + k, k) - hs_k
