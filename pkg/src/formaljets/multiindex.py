"""Multi-indices, the graded order on N^n, and diagrams of initial exponents.

A multi-index is a plain tuple of non-negative ints. The order used
throughout compares ``(|a|, a_1, ..., a_n)`` lexicographically; it is a
well-order compatible with addition.

A :class:`Diagram` is a subset of N^n stable under adding N^n, stored by its
(finite) vertex set.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .errors import DimensionError

MultiIndex = Tuple[int, ...]

LESS, EQUAL, GREATER = -1, 0, 1


def multiindex(entries: Iterable[int]) -> MultiIndex:
    alpha = tuple(int(e) for e in entries)
    if any(e < 0 for e in alpha):
        raise ValueError(f"negative entry in multi-index {alpha}")
    return alpha


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def order_key(alpha: MultiIndex) -> tuple:
    """Sort key realizing the graded order: length first, then lex."""
    return (sum(alpha),) + tuple(alpha)


def _check_dims(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")


def compare_multiindex(alpha: MultiIndex, beta: MultiIndex) -> int:
    """Return LESS, EQUAL or GREATER for alpha vs beta in the graded order."""
    _check_dims(alpha, beta)
    ka, kb = order_key(alpha), order_key(beta)
    return (ka > kb) - (ka < kb)


def mi_leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    return order_key(alpha) <= order_key(beta)


def mi_lt(alpha: MultiIndex, beta: MultiIndex) -> bool:
    return order_key(alpha) < order_key(beta)


def divides(v: MultiIndex, alpha: MultiIndex) -> bool:
    """Componentwise v <= alpha."""
    return all(x <= y for x, y in zip(v, alpha))


def add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    _check_dims(alpha, beta)
    return tuple(x + y for x, y in zip(alpha, beta))


def sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    _check_dims(alpha, beta)
    out = tuple(x - y for x, y in zip(alpha, beta))
    if any(e < 0 for e in out):
        raise ValueError(f"{beta} does not divide {alpha}")
    return out


def unit(n: int, i: int) -> MultiIndex:
    return tuple(1 if j == i else 0 for j in range(n))


@lru_cache(maxsize=None)
def _exponents_of_degree(n: int, d: int) -> Tuple[MultiIndex, ...]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=order_key)
    return tuple(out)


@lru_cache(maxsize=None)
def exponents_up_to(n: int, k: int) -> Tuple[MultiIndex, ...]:
    """All multi-indices of length <= k, increasing in the graded order."""
    if k < 0:
        return ()
    if n == 0:
        return ((),)
    out = []
    for d in range(k + 1):
        out.extend(_exponents_of_degree(n, d))
    return tuple(out)


def iter_exponents(n: int) -> Iterator[MultiIndex]:
    """Every multi-index of N^n in increasing order (infinite for n > 0)."""
    if n == 0:
        yield ()
        return
    d = 0
    while True:
        yield from _exponents_of_degree(n, d)
        d += 1


def jet_dimension(n: int, k: int) -> int:
    return comb(n + k, n) if k >= 0 else 0


# ---------------------------------------------------------------- diagrams


@dataclass(frozen=True)
class Diagram:
    """A diagram N = vertices + N^n.

    ``vertices`` is the minimal generating set, strictly increasing in the
    graded order. Use :func:`diagram_from_vertices` to build one from an
    arbitrary candidate list.
    """

    n: int
    vertices: Tuple[MultiIndex, ...] = ()

    def __post_init__(self):
        for v in self.vertices:
            if len(v) != self.n:
                raise DimensionError(f"vertex {v} not in N^{self.n}")
        keys = [order_key(v) for v in self.vertices]
        if keys != sorted(set(keys)):
            raise ValueError("vertices must be strictly increasing")
        for i, v in enumerate(self.vertices):
            for j, w in enumerate(self.vertices):
                if i != j and divides(w, v):
                    raise ValueError(f"vertex {v} is redundant (divisible by {w})")

    def __contains__(self, alpha) -> bool:
        return diagram_contains(self, tuple(alpha))

    def __len__(self):
        return len(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def max_vertex_degree(self) -> int:
        return max((sum(v) for v in self.vertices), default=0)

    def __str__(self):
        return "{" + ", ".join(str(v) for v in self.vertices) + "}"


def diagram_from_vertices(candidates: Iterable[Sequence[int]], n: Optional[int] = None) -> Diagram:
    """Minimal vertex set generating the diagram spanned by ``candidates``."""
    cands = sorted({multiindex(c) for c in candidates}, key=order_key)
    if n is None:
        if not cands:
            raise DimensionError("cannot infer the dimension of an empty diagram")
        n = len(cands[0])
    for c in cands:
        if len(c) != n:
            raise DimensionError(f"candidate {c} not in N^{n}")
    kept: list = []
    # increasing order: a divisor of c always precedes c
    for c in cands:
        if not any(divides(v, c) for v in kept):
            kept.append(c)
    return Diagram(n, tuple(kept))


def empty_diagram(n: int) -> Diagram:
    return Diagram(n, ())


def diagram_contains(N: Diagram, alpha: MultiIndex) -> bool:
    _check_dims(alpha, (0,) * N.n)
    return any(divides(v, alpha) for v in N.vertices)


def diagram_truncate(N: Diagram, alpha: MultiIndex, strict: bool = False) -> Diagram:
    """N(alpha) (or N^-(alpha) when ``strict``): generated by members <= alpha."""
    _check_dims(alpha, (0,) * N.n)
    key = order_key(alpha)
    if strict:
        kept = tuple(v for v in N.vertices if order_key(v) < key)
    else:
        kept = tuple(v for v in N.vertices if order_key(v) <= key)
    return Diagram(N.n, kept)


def compare_diagrams(N1: Diagram, N2: Diagram) -> int:
    """Total order on diagrams via sorted vertex sequences.

    At the first differing position the smaller vertex gives the smaller
    diagram; a proper prefix is the greater diagram. Refines reverse
    inclusion.
    """
    if N1.n != N2.n:
        raise DimensionError(f"dimension mismatch: {N1.n} vs {N2.n}")
    for v, w in zip(N1.vertices, N2.vertices):
        if v != w:
            return LESS if order_key(v) < order_key(w) else GREATER
    if len(N1.vertices) == len(N2.vertices):
        return EQUAL
    return GREATER if len(N1.vertices) < len(N2.vertices) else LESS


def _hs_count(vertices: Tuple[MultiIndex, ...], n: int, k: int) -> int:
    # monomials of degree <= k outside the diagram, split by the last exponent
    if k < 0:
        return 0
    if any(sum(v) == 0 for v in vertices):
        return 0
    if not vertices:
        return comb(n + k, n)
    if n == 1:
        return min(min(v[0] for v in vertices), k + 1)
    total = 0
    for j in range(k + 1):
        slice_vertices = tuple(v[:-1] for v in vertices if v[-1] <= j)
        total += _hs_count(_minimalize(slice_vertices), n - 1, k - j)
    return total


def _minimalize(vs: Tuple[MultiIndex, ...]) -> Tuple[MultiIndex, ...]:
    vs = sorted(set(vs), key=order_key)
    kept: list = []
    for c in vs:
        if not any(divides(v, c) for v in kept):
            kept.append(c)
    return tuple(kept)


def hilbert_samuel_from_diagram(N: Diagram, k: int) -> int:
    """Number of beta outside N with |beta| <= k."""
    if N.n == 0:
        return 0 if (N.vertices or k < 0) else 1
    return _hs_count(N.vertices, N.n, k)


def hilbert_samuel_table(N: Diagram, k: int) -> Tuple[int, ...]:
    return tuple(hilbert_samuel_from_diagram(N, j) for j in range(k + 1))


def lemma41_witness(N1: Diagram, N2: Diagram, alpha: MultiIndex) -> Optional[MultiIndex]:
    """Least theta <= alpha with N1^-(theta) = N2^-(theta), theta in N1, theta not in N2.

    Such a theta exists exactly when N1(alpha) < N2(alpha).
    """
    if N1.n != N2.n:
        raise DimensionError(f"dimension mismatch: {N1.n} vs {N2.n}")
    _check_dims(alpha, (0,) * N1.n)
    key = order_key(alpha)
    for theta in exponents_up_to(N1.n, sum(alpha)):
        if order_key(theta) > key:
            break
        if not diagram_contains(N1, theta) or diagram_contains(N2, theta):
            continue
        if diagram_truncate(N1, theta, strict=True) == diagram_truncate(N2, theta, strict=True):
            return theta
    return None


class DeltaPartition:
    """First-match partition of N^n by exponents alpha^1..alpha^s.

    ``classify(beta)`` returns the index i of the block Delta_i containing
    beta (the first i with alpha^i <= beta componentwise), or None for the
    complement Delta.
    """

    def __init__(self, exponents: Sequence[MultiIndex], n: Optional[int] = None):
        exps = [multiindex(e) for e in exponents]
        if n is None:
            if not exps:
                raise ValueError("need at least one exponent or an explicit dimension")
            n = len(exps[0])
        for e in exps:
            if len(e) != n:
                raise DimensionError(f"exponent {e} not in N^{n}")
        self.n = n
        self.exponents = tuple(exps)

    def classify(self, beta: MultiIndex) -> Optional[int]:
        _check_dims(beta, (0,) * self.n)
        for i, a in enumerate(self.exponents):
            if divides(a, beta):
                return i
        return None

    def in_block(self, beta: MultiIndex, i: int) -> bool:
        return self.classify(beta) == i

    def in_complement(self, beta: MultiIndex) -> bool:
        return self.classify(beta) is None

    def diagram(self) -> Diagram:
        """The union of the blocks, as a diagram."""
        return diagram_from_vertices(self.exponents, self.n)


def delta_decomposition(exponents: Sequence[MultiIndex], n: Optional[int] = None) -> DeltaPartition:
    return DeltaPartition(exponents, n)
