"""Diagrams along arcs and on sample grids.

An arc is a family of fiber tuples (gamma_1(w), ..., gamma_s(w)) with
polynomial components; w = 0 is the limit point. Sample diagrams away from
the limit estimate the generic diagram (their minimum), and the limit is
checked to dominate it, both in the diagram order and through the
Hilbert-Samuel function.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .chevalley import MATCHED_ORACLE, DiagramReport, LPolicy, diagram_at_point
from .errors import DimensionError, DomainError
from .jets import FiberTuple, PolynomialMap, stacked_jet_matrix
from .linalg import rank
from .multiindex import EQUAL, GREATER, LESS, Diagram, compare_diagrams
from .series import TruncatedSeries, as_rational, format_series

DEFAULT_SAMPLES = (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(0))


@dataclass(frozen=True)
class Arc:
    """s curves w -> gamma_i(w) in the source of a map, polynomial in w."""

    name: str
    m: int
    curves: Tuple[Tuple[TruncatedSeries, ...], ...]
    parameter: str = "w"

    def __post_init__(self):
        curves = tuple(tuple(c) for c in self.curves)
        object.__setattr__(self, "curves", curves)
        if not curves:
            raise DomainError("an arc needs at least one curve")
        for c in curves:
            if len(c) != self.m:
                raise DimensionError(f"curve with {len(c)} components in Q^{self.m}")
            for p in c:
                if p.n != 1 or not p.is_polynomial:
                    raise ValueError("arc components must be exact polynomials in one variable")

    def at(self, t) -> Tuple[Tuple[Fraction, ...], ...]:
        t = as_rational(t)
        return tuple(tuple(p.evaluate((t,)) for p in c) for c in self.curves)

    def image_curve(self, phi: PolynomialMap, i: int = 0) -> Tuple[TruncatedSeries, ...]:
        return tuple(g.substitute(list(self.curves[i])) for g in phi.components)

    def validate(self, phi: PolynomialMap) -> None:
        """phi(gamma_i(w)) = phi(gamma_1(w)) identically in w."""
        if phi.m != self.m:
            raise DimensionError(f"arc in Q^{self.m}, map from Q^{phi.m}")
        base = self.image_curve(phi, 0)
        for i in range(1, len(self.curves)):
            other = self.image_curve(phi, i)
            for j, (p, q) in enumerate(zip(base, other)):
                diff = q - p
                if not diff.is_zero():
                    raise DomainError(
                        f"arc {self.name}: component y{j + 1} of phi(curve {i + 1}) - phi(curve 1) "
                        f"= {format_series(diff, self.parameter, indexed=False)} is not zero"
                    )


def _run_sample(args):
    phi, points, label, k, policy = args
    tup = FiberTuple.over(phi, points, label)
    return diagram_at_point(phi, tup, k, policy=policy)


@dataclass
class ArcReport:
    arc: str
    k: int
    samples: Tuple[Fraction, ...]
    reports: Tuple[DiagramReport, ...]

    def limit_index(self) -> Optional[int]:
        for i, t in enumerate(self.samples):
            if t == 0:
                return i
        return None

    def nonlimit(self) -> List[DiagramReport]:
        return [r for t, r in zip(self.samples, self.reports) if t != 0]

    def classes(self) -> List[Tuple[Diagram, Tuple[Fraction, ...]]]:
        """Samples grouped by equal diagram, classes in increasing diagram order."""
        groups: Dict[Diagram, List[Fraction]] = {}
        for t, r in zip(self.samples, self.reports):
            groups.setdefault(r.diagram, []).append(t)
        keys = sorted(groups, key=_DiagramKey)
        return [(N, tuple(sorted(groups[N], reverse=True))) for N in keys]


class _DiagramKey:
    __slots__ = ("N",)

    def __init__(self, N: Diagram):
        self.N = N

    def __lt__(self, other):
        return compare_diagrams(self.N, other.N) == LESS


def normalize_samples(samples: Sequence) -> Tuple[Fraction, ...]:
    vals = sorted({as_rational(s) for s in samples}, reverse=True)
    if not vals:
        raise ValueError("no samples")
    return tuple(vals)


def diagram_along_arc(
    phi: PolynomialMap,
    arc: Arc,
    samples: Sequence = DEFAULT_SAMPLES,
    k: int = 3,
    policy: Optional[LPolicy] = None,
    jobs: int = 1,
) -> ArcReport:
    """Diagram reports at each sample, in decreasing parameter order."""
    arc.validate(phi)
    if policy is None:
        policy = LPolicy()
    ts = normalize_samples(samples)
    tasks = [(phi, arc.at(t), f"{arc.name}({t})", k, policy) for t in ts]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_sample, tasks))
    else:
        reports = [_run_sample(t) for t in tasks]
    return ArcReport(arc.name, k, ts, tuple(reports))


class GenericEstimate(NamedTuple):
    diagram: Diagram
    disagreement: bool


def generic_diagram_estimate(diagrams: Sequence) -> GenericEstimate:
    """Minimum of the sample diagrams; flags samples that disagree."""
    ds = [d.diagram if isinstance(d, DiagramReport) else d for d in diagrams]
    if not ds:
        raise ValueError("need at least one non-limit sample")
    best = ds[0]
    for d in ds[1:]:
        if compare_diagrams(d, best) == LESS:
            best = d
    return GenericEstimate(best, any(d != best for d in ds))


@dataclass
class SemicontinuityVerdict:
    passed: bool
    diagram_comparison: str  # "greater", "equal" or "less": limit vs generic
    limit_diagram: Diagram
    generic_diagram: Diagram
    limit_hs: Tuple[int, ...]
    generic_hs: Tuple[int, ...]
    hs_margins: Tuple[int, ...]
    certified: bool
    warnings: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


_CMP_WORD = {LESS: "less", EQUAL: "equal", GREATER: "greater"}


def semicontinuity_check(report: ArcReport) -> SemicontinuityVerdict:
    i = report.limit_index()
    if i is None:
        raise DomainError("the sample list has no limit point 0")
    rest = report.nonlimit()
    if not rest:
        raise DomainError("need at least one sample away from the limit")
    limit = report.reports[i]
    gen = generic_diagram_estimate(rest)
    cmp = compare_diagrams(limit.diagram, gen.diagram)
    generic_hs = next(r.hs_table for r in rest if r.diagram == gen.diagram)
    margins = tuple(a - b for a, b in zip(limit.hs_table, generic_hs))
    warnings = []
    if gen.disagreement:
        warnings.append("non-limit samples have different diagrams; generic estimate is their minimum")
    certified = all(r.status == MATCHED_ORACLE for r in report.reports)
    if not certified:
        warnings.append("some sample diagrams are not certified by an oracle")
    return SemicontinuityVerdict(
        passed=cmp != LESS and all(m >= 0 for m in margins),
        diagram_comparison=_CMP_WORD[cmp],
        limit_diagram=limit.diagram,
        generic_diagram=gen.diagram,
        limit_hs=tuple(limit.hs_table),
        generic_hs=tuple(generic_hs),
        hs_margins=margins,
        certified=certified,
        warnings=warnings,
    )


def z_set_membership(
    phi: PolynomialMap,
    tup: FiberTuple,
    N: Diagram,
    mode: str = "geq",
    k: Optional[int] = None,
    policy: Optional[LPolicy] = None,
) -> bool:
    """Whether the point's diagram is >= N (mode geq) or > N (mode gt).

    Both diagrams are cut at alpha = (k, 0, ..., 0), the largest exponent of
    degree k. This is the full comparison as long as the point's diagram
    has no vertex of degree above k.
    """
    if mode not in ("geq", "gt"):
        raise ValueError(f"mode must be 'geq' or 'gt', not {mode!r}")
    if N.n != phi.n:
        raise DimensionError(f"diagram in N^{N.n}, map into Q^{phi.n}")
    if k is None:
        k = N.max_vertex_degree()
    if N.max_vertex_degree() > k:
        raise DomainError(f"diagram has a vertex of degree {N.max_vertex_degree()} > k={k}")
    point = diagram_at_point(phi, tup, k, policy=policy or LPolicy(), with_basis=False).diagram
    cmp = compare_diagrams(point, N)
    return cmp != LESS if mode == "geq" else cmp == GREATER


class RankTest(NamedTuple):
    indices: Tuple[int, ...]
    ranks: Tuple[int, ...]
    relative_to_supplied: bool  # always True: other tuples in the fiber were not examined


def essential_rank_test(phi: PolynomialMap, tuples: Sequence[FiberTuple], l: int) -> RankTest:
    """Tuples whose stacked jet matrix has maximal rank among those given."""
    if not tuples:
        raise ValueError("no tuples")
    b = tuples[0].image
    for t in tuples:
        if t.image != b:
            raise DomainError("tuples lie over different image points")
    ranks = tuple(rank(stacked_jet_matrix(phi, t, l)) for t in tuples)
    top = max(ranks)
    return RankTest(tuple(i for i, r in enumerate(ranks) if r == top), ranks, True)
