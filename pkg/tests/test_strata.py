from fractions import Fraction

import pytest

from formaljets.chevalley import LPolicy
from formaljets.errors import DomainError
from formaljets.jets import FiberTuple
from formaljets.multiindex import LESS, compare_diagrams, diagram_from_vertices, empty_diagram
from formaljets.series import TruncatedSeries
from formaljets.strata import (
    Arc,
    ArcReport,
    diagram_along_arc,
    essential_rank_test,
    generic_diagram_estimate,
    normalize_samples,
    semicontinuity_check,
    z_set_membership,
)
from examples import cusp, nodal, surface

S, T, N = cusp(), surface(), nodal()
CUSP, SURF, NODE = S.maps["cusp"], T.maps["surf"], N.maps["node"]

D010 = diagram_from_vertices([(0, 1, 0)])
D002 = diagram_from_vertices([(0, 0, 2)])


@pytest.fixture(scope="module")
def surface_arc():
    pol = LPolicy(oracle=T.ideals["rel"])
    return diagram_along_arc(SURF, T.arcs["g"], [1, Fraction(1, 2), Fraction(1, 4), 0], 3, pol)


def test_surface_arc_diagrams(surface_arc):
    rep = surface_arc
    assert rep.samples == (1, Fraction(1, 2), Fraction(1, 4), 0)
    assert [r.diagram for r in rep.reports] == [D010, D010, D010, D002]
    assert all(r.certified for r in rep.reports)
    assert rep.classes() == [(D010, (1, Fraction(1, 2), Fraction(1, 4))), (D002, (0,))]


def test_surface_semicontinuity(surface_arc):
    v = semicontinuity_check(surface_arc)
    assert v.verdict == "PASS" and v.certified
    assert v.diagram_comparison == "greater"
    assert v.limit_hs == (1, 4, 9, 16) and v.generic_hs == (1, 3, 6, 10)
    assert v.hs_margins == (0, 1, 3, 6)
    assert not v.warnings


def test_swapped_limit_fails(surface_arc):
    rep = surface_arc
    # the generic sample's report placed at the limit and vice versa
    gen, lim = rep.reports[0], rep.reports[-1]
    swapped = ArcReport(rep.arc, rep.k, rep.samples, (lim, lim, lim, gen))
    v = semicontinuity_check(swapped)
    assert v.verdict == "FAIL"
    assert v.diagram_comparison == "less"
    assert any(m < 0 for m in v.hs_margins)


def test_cusp_arc():
    rep = diagram_along_arc(CUSP, S.arcs["g"], [1, Fraction(1, 2), 0], 2, LPolicy(oracle=S.ideals["I"]))
    assert [r.diagram.vertices for r in rep.reports] == [((0, 1),), ((0, 1),), ((0, 2),)]
    assert [r.image for r in rep.reports][1] == (Fraction(1, 4), Fraction(1, 8))
    v = semicontinuity_check(rep)
    assert v.verdict == "PASS" and v.certified


def test_constant_arc_passes_with_equality():
    arc = Arc("c", 2, (((TruncatedSeries(1, {(0,): 1}), TruncatedSeries(1, {}))),))
    rep = diagram_along_arc(SURF, arc, [1, Fraction(1, 2), 0], 2, LPolicy(oracle=T.ideals["rel"]))
    v = semicontinuity_check(rep)
    assert v.verdict == "PASS" and v.diagram_comparison == "equal"
    assert v.hs_margins == (0, 0, 0)


def test_jobs_do_not_change_results(surface_arc):
    pol = LPolicy(oracle=T.ideals["rel"])
    par = diagram_along_arc(SURF, T.arcs["g"], [0, Fraction(1, 4), Fraction(1, 2), 1], 3, pol, jobs=2)
    assert par == surface_arc


def test_samples_normalized():
    assert normalize_samples([0, "1/2", 1, Fraction(1, 2)]) == (1, Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        normalize_samples([])


def test_missing_limit_rejected():
    rep = diagram_along_arc(CUSP, S.arcs["g"], [1, Fraction(1, 2)], 1)
    with pytest.raises(DomainError):
        semicontinuity_check(rep)


def test_incoherent_arc_rejected():
    w = TruncatedSeries(1, {(1,): 1})
    one = TruncatedSeries(1, {(0,): 1})
    arc = Arc("bad", 1, ((one + w,), (w,)))
    with pytest.raises(DomainError, match="y1"):
        diagram_along_arc(NODE, arc, [1, 0], 1)
    # the nodal pair arc in the fixture is coherent (both curves equal)
    N.arcs["pair"].validate(NODE)


# ---- generic estimate


def test_generic_estimate_examples():
    assert generic_diagram_estimate([D010, D010]) == (D010, False)
    assert generic_diagram_estimate([D002, D010]) == (D010, True)
    assert generic_diagram_estimate([D002]) == (D002, False)
    with pytest.raises(ValueError):
        generic_diagram_estimate([])


def test_generic_estimate_is_lower_bound(surface_arc):
    gen = generic_diagram_estimate(surface_arc.nonlimit()).diagram
    for r in surface_arc.nonlimit():
        assert compare_diagrams(gen, r.diagram) != 1


# ---- Z sets


def test_z_set_examples():
    f0, f1 = S.fibers["f0"], S.fibers["f1"]
    N02 = diagram_from_vertices([(0, 2)])
    pol = LPolicy(oracle=S.ideals["I"])
    assert z_set_membership(CUSP, f0, N02, "geq", 2, pol)
    assert not z_set_membership(CUSP, f0, N02, "gt", 2, pol)
    assert not z_set_membership(CUSP, f1, N02, "geq", 2, pol)
    # {(0,0)} is the smallest diagram, the empty diagram the largest
    assert z_set_membership(CUSP, f1, diagram_from_vertices([(0, 0)]), "geq", 2, pol)
    assert not z_set_membership(CUSP, f0, empty_diagram(2), "geq", 2, pol)
    assert compare_diagrams(diagram_from_vertices([(0, 2)]), empty_diagram(2)) == LESS
    with pytest.raises(DomainError):
        z_set_membership(CUSP, f0, diagram_from_vertices([(0, 3)]), "geq", 2)
    with pytest.raises(ValueError):
        z_set_membership(CUSP, f0, N02, "ge")


def test_z_set_surface():
    pol = LPolicy(oracle=T.ideals["rel"])
    assert z_set_membership(SURF, T.fibers["base"], D002, "geq", 3, pol)
    assert not z_set_membership(SURF, T.fibers["side"], D002, "geq", 3, pol)
    assert z_set_membership(SURF, T.fibers["base"], D010, "gt", 3, pol)


# ---- essential rank test


def test_essential_rank_nodal():
    single, both = N.fibers["single"], N.fibers["both"]
    r1 = essential_rank_test(NODE, [single, both], 1)
    assert r1.ranks == (2, 3) and r1.indices == (1,)
    r4 = essential_rank_test(NODE, [single, both], 4)
    assert r4.ranks == (5, 9) and r4.indices == (1,)
    assert r4.relative_to_supplied


def test_essential_rank_trivial_cases():
    single = N.fibers["single"]
    assert essential_rank_test(NODE, [single], 2).indices == (0,)
    assert essential_rank_test(NODE, [single, single], 2).indices == (0, 1)
    other = FiberTuple.over(NODE, [(0,)])
    with pytest.raises(DomainError):
        essential_rank_test(NODE, [single, other], 2)


def test_z_set_empty_diagram_only_at_open_points():
    from formaljets.jets import PolynomialMap

    I2 = PolynomialMap.identity(2)
    tup = FiberTuple.over(I2, [(0, 0)])
    assert z_set_membership(I2, tup, empty_diagram(2), "geq", 2, LPolicy(window=1))
    assert not z_set_membership(I2, tup, empty_diagram(2), "gt", 2, LPolicy(window=1))
