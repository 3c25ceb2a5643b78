import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from formaljets.errors import DimensionError, DomainError
from formaljets.jets import (
    FiberTuple,
    JetIndexing,
    PolynomialMap,
    e_lk,
    jet_matrix,
    jet_vector,
    series_from_jet,
    split_S_T,
    stacked_jet_matrix,
)
from formaljets.linalg import Subspace
from formaljets.series import TruncatedSeries
from oracles import sympy_jet_matrix, sympy_relation_jets, to_fraction


def sym_to_series(expr, syms):
    poly = sp.Poly(sp.expand(expr), *syms)
    return TruncatedSeries(len(syms), {m: to_fraction(c) for m, c in poly.terms()})


def make_map(exprs, xs):
    return PolynomialMap(len(xs), len(exprs), tuple(sym_to_series(e, xs) for e in exprs))


x1, x2 = sp.symbols("x1 x2")
CUSP_EXPRS = [x1 ** 2, x1 ** 3]
CUSP = make_map(CUSP_EXPRS, [x1])


def random_map(rng, m, n, deg=3):
    xs = sp.symbols(f"x1:{m + 1}")
    exprs = []
    for _ in range(n):
        e = sum(rng.randint(-2, 2) * sp.Mul(*[x ** rng.randint(0, deg) for x in xs]) for _ in range(3))
        exprs.append(sp.expand(e))
    return exprs, list(xs)


# ---- jet matrices


def test_cusp_jet_matrix_entries():
    L = jet_matrix(CUSP, (0,), 3)
    idx = JetIndexing(2, 3)
    # rows alpha = 0..3, columns in the order 1, y2, y1, y2^2, ...
    assert idx.exponents[:3] == ((0, 0), (0, 1), (1, 0))
    assert L.rows[2][idx.position[(1, 0)]] == 2
    assert L.rows[3][idx.position[(0, 1)]] == 6
    assert L.rows[0][0] == 1
    assert sum(1 for row in L.rows for x in row if x) == 3


@pytest.mark.parametrize("seed", range(12))
def test_jet_matrix_matches_sympy(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 2), rng.randint(1, 3)
    exprs, xs = random_map(rng, m, n)
    phi = make_map(exprs, xs)
    a = tuple(Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(m))
    l = rng.randint(0, 3)
    assert [list(r) for r in jet_matrix(phi, a, l).rows] == sympy_jet_matrix(exprs, xs, a, l)


def test_jet_matrix_identity_and_constant():
    I = PolynomialMap.identity(2)
    L = jet_matrix(I, (1, 2), 3)
    assert L == L.identity(len(JetIndexing(2, 3)))
    c = make_map([sp.Integer(5)], [x1])
    L = jet_matrix(c, (3,), 2)
    # a constant map only sees the value of G
    assert [row[0] for row in L.rows] == [1, 0, 0]
    assert all(x == 0 for row in L.rows for x in row[1:])


def poly_st(n, maxdeg=3):
    exps = st.lists(st.integers(0, maxdeg), min_size=n, max_size=n).map(tuple)
    return st.dictionaries(exps, st.integers(-3, 3), max_size=4)


@settings(max_examples=60, deadline=None)
@given(poly_st(2), st.integers(-2, 2), st.integers(0, 4))
def test_chain_rule(g, a, l):
    # L(a) . j^l_b G == j^l_a (G o phi), G a polynomial in y
    G = TruncatedSeries(2, g)
    b = CUSP((a,))
    lhs = jet_matrix(CUSP, (a,), l).apply(jet_vector(G, l, b))
    rhs = jet_vector(CUSP.compose(G), l, (a,))
    assert tuple(lhs) == rhs


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 4), st.data())
def test_jet_matrix_lower_triangular(m, l, data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    exprs, xs = random_map(rng, m, 2, 2)
    phi = make_map(exprs, xs)
    a = tuple(Fraction(rng.randint(-2, 2)) for _ in range(m))
    L = jet_matrix(phi, a, l)
    src, tgt = JetIndexing(m, l).exponents, JetIndexing(2, l).exponents
    for i, al in enumerate(src):
        for j, beta in enumerate(tgt):
            if sum(beta) > sum(al):
                assert L.rows[i][j] == 0


def test_jet_vector_roundtrip():
    G = TruncatedSeries(2, {(0, 0): 1, (2, 1): Fraction(3, 2), (0, 2): -1})
    v = jet_vector(G, 3)
    assert v[JetIndexing(2, 3).position[(2, 1)]] == 3
    assert series_from_jet(v, 2, 3) == G.truncate(3)
    with pytest.raises(DimensionError):
        jet_vector(TruncatedSeries(1, {(0,): 1}, 2), 3)


# ---- fiber tuples and stacking


def test_fiber_tuple_validation():
    node = make_map([x1 ** 2 - 1, x1 ** 3 - x1], [x1])
    tup = FiberTuple.over(node, [(1,), (-1,)])
    assert tup.image == (0, 0)
    assert stacked_jet_matrix(node, tup, 2).nrows == 6
    with pytest.raises(DomainError):
        FiberTuple.over(node, [(1,), (2,)])
    with pytest.raises(DomainError):
        FiberTuple.over(node, [])
    with pytest.raises(DimensionError):
        FiberTuple.over(node, [(1, 0)])


def test_split_S_T():
    M = jet_matrix(CUSP, (0,), 3)
    S, T = split_S_T(M, JetIndexing(2, 3), 1)
    assert (S.ncols, T.ncols) == (3, 7)
    assert S.hstack(T) == M
    with pytest.raises(ValueError):
        split_S_T(M, JetIndexing(2, 3), 4)


# ---- E^lk


def f0():
    return FiberTuple.over(CUSP, [(0,)])


def test_e_lk_cusp_examples():
    # at l=2 the only relation direction surviving in degree <= 1 is y2
    E = e_lk(CUSP, f0(), 2, 1)
    assert E == Subspace.span([[0, 1, 0]], 3)
    assert e_lk(CUSP, f0(), 3, 1).dim == 0
    # t^2 and t^3 both vanish to order 1, so y1 and y2 both survive at l=1
    assert e_lk(CUSP, f0(), 1, 1) == Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    with pytest.raises(ValueError):
        e_lk(CUSP, f0(), 1, 2)


@pytest.mark.parametrize("l,k", [(1, 1), (2, 1), (2, 2), (3, 2), (4, 2), (5, 3)])
def test_e_lk_cusp_matches_sympy(l, k):
    vecs, d = sympy_relation_jets(CUSP_EXPRS, [x1], [(0,)], l, k)
    expected = Subspace.span(vecs, d)
    assert e_lk(CUSP, f0(), l, k, cross_check=True) == expected


@pytest.mark.parametrize("seed", range(8))
def test_e_lk_random_matches_sympy(seed):
    rng = random.Random(100 + seed)
    exprs, xs = random_map(rng, rng.randint(1, 2), 2, 2)
    phi = make_map(exprs, xs)
    a = tuple(Fraction(rng.randint(-1, 1)) for _ in xs)
    l = rng.randint(1, 3)
    k = rng.randint(0, l)
    vecs, d = sympy_relation_jets(exprs, xs, [a], l, k)
    assert e_lk(phi, FiberTuple.over(phi, [a]), l, k, cross_check=True) == Subspace.span(vecs, d)


def test_e_lk_two_point_fiber_matches_sympy():
    exprs = [x1 ** 2 - 1, x1 ** 3 - x1]
    node = make_map(exprs, [x1])
    tup = FiberTuple.over(node, [(1,), (-1,)])
    for l, k in [(2, 1), (3, 2), (4, 2)]:
        vecs, d = sympy_relation_jets(exprs, [x1], [(1,), (-1,)], l, k)
        assert e_lk(node, tup, l, k, cross_check=True) == Subspace.span(vecs, d)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_e_lk_decreasing_in_l(k):
    prev = None
    for l in range(k, 3 * k + 4):
        E = e_lk(CUSP, f0(), l, k)
        if prev is not None:
            assert E <= prev
        prev = E
