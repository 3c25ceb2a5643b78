from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from formaljets.errors import TruncationError
from formaljets.ideals import (
    IdealPresentation,
    diagram_of_ideal,
    diagram_of_subspace,
    hilbert_samuel_direct,
    ideal_jet_subspace,
    membership_jet,
    standard_basis_truncated,
)
from formaljets.jets import jet_vector, series_from_jet
from formaljets.linalg import Subspace
from formaljets.multiindex import diagram_from_vertices, diagram_truncate, exponents_up_to, hilbert_samuel_from_diagram
from formaljets.series import TruncatedSeries, hironaka_divide, initial_exponent

CUSP_REL = TruncatedSeries(2, {(0, 2): 1, (3, 0): -1})
SURF_REL = TruncatedSeries(3, {(0, 0, 2): 1, (2, 1, 0): -1, (1, 2, 0): -2, (0, 3, 0): -1})


def ideal(n, *gens):
    return IdealPresentation(n, tuple(g if isinstance(g, TruncatedSeries) else TruncatedSeries(n, g) for g in gens))


def mono(n, e):
    return TruncatedSeries(n, {e: 1})


def test_jet_subspace_examples():
    I = ideal(2, {(2, 0): 1}, {(1, 1): 1})
    V = ideal_jet_subspace(I, 2)
    assert V == Subspace.span([jet_vector(mono(2, (2, 0)), 2), jet_vector(mono(2, (1, 1)), 2)], 6)
    assert ideal_jet_subspace(ideal(2, {(0, 0): 1}), 3) == Subspace.full(10)
    assert ideal_jet_subspace(ideal(2, CUSP_REL), 2) == Subspace.span([jet_vector(mono(2, (0, 2)), 2)], 6)


def test_diagram_examples():
    N, how = diagram_of_ideal(ideal(2, CUSP_REL), 4)
    assert N.vertices == ((0, 2),) and how == "exact_to_k"
    assert diagram_of_ideal(ideal(2, {(2, 0): 1}, {(1, 1): 1}), 3).diagram.vertices == ((1, 1), (2, 0))
    assert diagram_of_ideal(ideal(3, SURF_REL.with_bound(None)), 3).diagram.vertices == ((0, 0, 2),)


def test_hs_examples():
    assert hilbert_samuel_direct(ideal(2, CUSP_REL), 3) == 7
    assert hilbert_samuel_direct(ideal(3, {}), 4) == comb(7, 3)
    assert hilbert_samuel_direct(ideal(2, {(2, 0): 1}, {(1, 1): 1}), 2) == 4
    assert hilbert_samuel_direct(ideal(2, {(0, 0): 1}), 5) == 0


def test_membership_examples():
    I = ideal(2, CUSP_REL)
    assert membership_jet(mono(2, (1, 0)) * CUSP_REL, I, 5)
    assert not membership_jet(mono(2, (1, 0)), I, 3)
    # y1^3 alone is y2^2 modulo I, and y2^2 is not in m^4
    assert not membership_jet(mono(2, (3, 0)), I, 3)
    assert membership_jet(mono(2, (0, 4)), I, 3)
    with pytest.raises(TruncationError):
        membership_jet(TruncatedSeries(2, {(1, 0): 1}, 2), I, 3)
    with pytest.raises(TruncationError):
        ideal_jet_subspace(ideal(2, TruncatedSeries(2, {(1, 0): 1}, 1)), 2)


def test_standard_basis_examples():
    I = ideal(2, CUSP_REL, mono(2, (1, 0)) * CUSP_REL)
    assert standard_basis_truncated(I, 5) == [CUSP_REL.with_bound(5)]
    M = ideal(2, {(3, 0): 2}, {(1, 1): 1, (2, 1): 1}, {(2, 0): 1})
    assert standard_basis_truncated(M, 4) == [mono(2, (1, 1)).with_bound(4), mono(2, (2, 0)).with_bound(4)]
    F = TruncatedSeries(2, {(2, 0): 1, (0, 3): -1})
    assert standard_basis_truncated(ideal(2, F), 4) == [F.with_bound(4)]


def test_zero_ideal_and_empty_generators():
    Z = ideal(2, {})
    assert Z.is_zero()
    assert diagram_of_ideal(Z, 3).diagram.is_empty
    with pytest.raises(ValueError):
        IdealPresentation(2, ())


def test_recentered_surface_generic_point():
    # b = (1,0,0): the relation is smooth there, initial exponent y2
    J = ideal(3, SURF_REL).recentered((1, 0, 0))
    assert diagram_of_ideal(J, 3).diagram.vertices == ((0, 1, 0),)
    assert [hilbert_samuel_direct(J, k) for k in range(4)] == [1, 3, 6, 10]


# ---- random ideals


def gens_st(n, maxdeg=4):
    exps = st.lists(st.integers(0, maxdeg), min_size=n, max_size=n).map(tuple).filter(lambda e: sum(e) <= maxdeg)
    poly = st.dictionaries(exps, st.integers(-2, 2).filter(bool), min_size=1, max_size=3)
    return st.lists(poly, min_size=1, max_size=3)


def random_ideal():
    return st.integers(1, 3).flatmap(lambda n: gens_st(n).map(lambda gs: ideal(n, *gs)))


def spanning_with_cap(I, k, cap):
    vecs = []
    for g in I.generators:
        for gamma in exponents_up_to(I.n, cap):
            vecs.append(jet_vector(g.shift(gamma).with_bound(k), k))
    return Subspace.span(vecs, comb(I.n + k, k))


@settings(max_examples=80, deadline=None)
@given(random_ideal(), st.integers(0, 5))
def test_hs_identity_random(I, k):
    V = ideal_jet_subspace(I, k)
    N = diagram_of_subspace(V, I.n, k)
    h = hilbert_samuel_direct(I, k)
    assert h == hilbert_samuel_from_diagram(N, k)
    assert V.dim + h == comb(I.n + k, k)


@settings(max_examples=40, deadline=None)
@given(random_ideal(), st.integers(0, 4))
def test_multiplier_cap_is_enough(I, k):
    assert ideal_jet_subspace(I, k) == spanning_with_cap(I, k, k + 2)


@settings(max_examples=50, deadline=None)
@given(random_ideal(), st.integers(0, 4), st.integers(0, 2))
def test_truncation_coherence(I, k, extra):
    N = diagram_of_ideal(I, k).diagram
    big = diagram_of_ideal(I, k + extra).diagram
    low = diagram_from_vertices([v for v in big.vertices if sum(v) <= k], I.n)
    assert low == N
    top = (k,) + (0,) * (I.n - 1)
    assert diagram_truncate(big, top) == diagram_truncate(N, top)


@settings(max_examples=50, deadline=None)
@given(random_ideal(), st.integers(0, 5))
def test_standard_basis_idempotent_and_divides(I, k):
    S = standard_basis_truncated(I, k)
    N = diagram_of_ideal(I, k).diagram
    assert sorted(initial_exponent(s) for s in S) == sorted(N.vertices)
    if not S:
        assert all(g.with_bound(k).is_zero() for g in I.generators)
        return
    assert standard_basis_truncated(IdealPresentation(I.n, tuple(S)), k) == S
    for g in I.generators:
        assert hironaka_divide(g.with_bound(k), S).remainder.is_zero()
    # an arbitrary element of the jet subspace also divides with zero remainder
    V = ideal_jet_subspace(I, k)
    v = [sum((Fraction(i + 1) * row[j] for i, row in enumerate(V.basis)), Fraction(0)) for j in range(V.ambient)]
    assert hironaka_divide(series_from_jet(v, I.n, k), S).remainder.is_zero()
