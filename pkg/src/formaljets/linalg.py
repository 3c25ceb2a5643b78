"""Exact rational linear algebra.

Matrices hold :class:`fractions.Fraction` entries; rank decisions are
exact. Subspaces are stored in reduced row-echelon form, which is unique,
so subspace equality is equality of the stored bases.

The exterior-algebra operator ad^r B (omega -> (eta_1..eta_r ->
omega ^ B eta_1 ^ ... ^ B eta_r)) is materialized through r x r minors of
B; :func:`ker_theta` computes {xi : S xi in Im T} both through it and
through the projection of Ker(S, T), and insists they agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import CrossCheckError, DimensionError

Vector = Tuple[Fraction, ...]

#: default cap on the number of entries of a materialized ad^r matrix
AD_BUDGET = 200_000


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted")
    return Fraction(x)


class RationalMatrix:
    """Dense matrix of Fractions. Immutable by convention."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: Optional[int] = None):
        self.rows: Tuple[Vector, ...] = tuple(tuple(_frac(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise DimensionError("column count of an empty matrix is ambiguous")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise DimensionError(f"ragged matrix: row of length {len(r)} in a {ncols}-column matrix")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"RationalMatrix({[[str(x) for x in r] for r in self.rows]})"

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[r[j] for j in idx] for r in self.rows], len(idx))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([self.column(j) for j in range(self.ncols)], self.nrows)

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for a {self.ncols}-column matrix")
        v = [_frac(x) for x in v]
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols] for r in self.rows],
            other.ncols,
        )

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.nrows != other.nrows:
            raise DimensionError("hstack needs equal row counts")
        return RationalMatrix([a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.ncols:
            raise DimensionError("vstack needs equal column counts")
        return RationalMatrix(self.rows + other.rows, self.ncols)

    def sparse_rows(self) -> List[Dict[int, Fraction]]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]


def vstack(mats: Sequence[RationalMatrix]) -> RationalMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    ncols = mats[0].ncols
    for M in mats:
        if M.ncols != ncols:
            raise DimensionError("vstack needs equal column counts")
    return RationalMatrix([r for M in mats for r in M.rows], ncols)


# ------------------------------------------------------------ elimination


def _echelon(rows: List[Dict[int, Fraction]], col_order: Sequence[int], reduced: bool):
    """Gaussian elimination on sparse rows, pivoting in ``col_order``.

    Returns (pivot_rows, pivot_cols); each pivot row has a 1 at its pivot.
    With ``reduced`` the pivot columns are cleared in every other row.
    """
    rank_of = {c: i for i, c in enumerate(col_order)}
    pending = [dict(r) for r in rows if r]
    pivots: List[Tuple[int, Dict[int, Fraction]]] = []
    # process columns in order; at each step pick a row with that leading col
    by_lead: Dict[int, List[Dict[int, Fraction]]] = {}

    def lead(r):
        return min(r, key=rank_of.__getitem__)

    for r in pending:
        by_lead.setdefault(rank_of[lead(r)], []).append(r)
    pos = 0
    ncols = len(col_order)
    while pos < ncols:
        bucket = by_lead.pop(pos, None)
        if not bucket:
            pos += 1
            continue
        c = col_order[pos]
        piv = bucket[0]
        inv = 1 / piv[c]
        piv = {j: v * inv for j, v in piv.items()}
        for r in bucket[1:]:
            f = r[c]
            for j, v in piv.items():
                nv = r.get(j, Fraction(0)) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
            if r:
                by_lead.setdefault(rank_of[lead(r)], []).append(r)
        pivots.append((c, piv))
        pos += 1
    if reduced:
        for i in range(len(pivots) - 1, -1, -1):
            c, piv = pivots[i]
            for k in range(i):
                ck, other = pivots[k]
                f = other.get(c)
                if f:
                    for j, v in piv.items():
                        nv = other.get(j, Fraction(0)) - f * v
                        if nv:
                            other[j] = nv
                        else:
                            other.pop(j, None)
    return [p for _, p in pivots], [c for c, _ in pivots]


def rref(M: RationalMatrix) -> Tuple[RationalMatrix, Tuple[int, ...]]:
    rows, piv = _echelon(M.sparse_rows(), range(M.ncols), reduced=True)
    dense = [[r.get(j, Fraction(0)) for j in range(M.ncols)] for r in rows]
    return RationalMatrix(dense, M.ncols), tuple(piv)


def rank(M: RationalMatrix) -> int:
    return len(_echelon(M.sparse_rows(), range(M.ncols), reduced=False)[1])


# ------------------------------------------------------------- subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient, stored as its reduced row-echelon basis."""

    ambient: int
    basis: Tuple[Vector, ...]
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient:
                raise DimensionError(f"vector of length {len(v)} in Q^{ambient}")
            rows.append({j: _frac(x) for j, x in enumerate(v) if x})
        return cls._from_sparse(rows, ambient)

    @classmethod
    def _from_sparse(cls, rows: List[Dict[int, Fraction]], ambient: int) -> "Subspace":
        prow, piv = _echelon(rows, range(ambient), reduced=True)
        order = sorted(range(len(piv)), key=piv.__getitem__)
        basis = tuple(tuple(prow[i].get(j, Fraction(0)) for j in range(ambient)) for i in order)
        return cls(ambient, basis, tuple(piv[i] for i in order))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls.span(
            [[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)], ambient
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise DimensionError(f"vector of length {len(v)} in Q^{self.ambient}")
        w = [_frac(x) for x in v]
        for p, row in zip(self.pivots, self.basis):
            f = w[p]
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        return not any(w)

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise DimensionError("subspaces of different spaces")
        return all(other.contains(v) for v in self.basis)

    def __le__(self, other):
        return self.is_subspace_of(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionError("subspaces of different spaces")
        return Subspace.span(self.basis + other.basis, self.ambient)

    def project(self, coords: Sequence[int]) -> "Subspace":
        """Image under the coordinate projection onto ``coords``."""
        return Subspace.span([[v[j] for j in coords] for v in self.basis], len(coords))

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.basis, self.ambient)


def kernel(M: RationalMatrix) -> Subspace:
    rows, piv = _echelon(M.sparse_rows(), range(M.ncols), reduced=True)
    pivset = set(piv)
    vecs = []
    for f in range(M.ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for p, r in zip(piv, rows):
            x = r.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace.span(vecs, M.ncols)


def image(M: RationalMatrix) -> Subspace:
    return Subspace.span([M.column(j) for j in range(M.ncols)], M.nrows)


def image_membership(M: RationalMatrix, w: Sequence) -> bool:
    if len(w) != M.nrows:
        raise DimensionError(f"vector of length {len(w)} vs {M.nrows} rows")
    return image(M).contains(w)


def projected_kernel(M: RationalMatrix, keep: Sequence[int]) -> Subspace:
    """pi(Ker M) for the coordinate projection pi onto ``keep``.

    Eliminates the discarded columns first; echelon rows whose leading
    entry falls among the kept columns are the constraints on the kept
    coordinates, and their kernel is the projection.
    """
    keep = list(keep)
    keepset = set(keep)
    drop = [j for j in range(M.ncols) if j not in keepset]
    rows, piv = _echelon(M.sparse_rows(), drop + keep, reduced=False)
    cons = []
    for c, r in zip(piv, rows):
        if c in keepset:
            cons.append([r.get(j, Fraction(0)) for j in keep])
    if not cons:
        return Subspace.full(len(keep))
    return kernel(RationalMatrix(cons, len(keep)))


# ------------------------------------------------------------ ad^r


def _det(rows: List[List[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


def determinant(M: RationalMatrix) -> Fraction:
    if M.nrows != M.ncols:
        raise DimensionError("determinant of a non-square matrix")
    return _det([list(r) for r in M.rows])


def ad_size(B: RationalMatrix, r: int) -> int:
    """Entries of the materialized ad^r B as a map out of the target space."""
    return comb(B.nrows, r + 1) * comb(B.ncols, r) * B.nrows


def ad_operator_matrix(B: RationalMatrix, r: int) -> RationalMatrix:
    """Matrix of omega -> ad^r B(omega).

    Rows are indexed by pairs (I, J): I an (r+1)-subset of target
    coordinates, J an r-subset of source coordinates (increasing). Entry
    (I, J), column c is the coefficient of omega_c in det [omega | B e_J]
    restricted to rows I, i.e. the signed minor det B[I - {c}, J].
    """
    p, q = B.nrows, B.ncols
    if r < 0:
        raise ValueError("r must be non-negative")
    rowsets = list(combinations(range(p), r + 1))
    colsets = list(combinations(range(q), r))
    minors: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction] = {}

    def minor(R, J):
        key = (R, J)
        if key not in minors:
            minors[key] = _det([[B.rows[i][j] for j in J] for i in R])
        return minors[key]

    out = []
    for I in rowsets:
        for J in colsets:
            row = [Fraction(0)] * p
            for pos, c in enumerate(I):
                m = minor(I[:pos] + I[pos + 1:], J)
                if m:
                    row[c] = m if pos % 2 == 0 else -m
            out.append(row)
    return RationalMatrix(out, p)


def ad_operator_apply(B: RationalMatrix, r: int, omega: Sequence) -> RationalMatrix:
    """The multilinear map eta_J -> omega ^ B eta_J1 ^ ... as a matrix.

    Rows: (r+1)-subsets of target coordinates; columns: r-subsets of source
    basis vectors. Entry = the (r+1)-minor of [omega | B e_J] on rows I.
    """
    if len(omega) != B.nrows:
        raise DimensionError(f"omega of length {len(omega)} for target of dimension {B.nrows}")
    if r > min(B.nrows, B.ncols):
        raise ValueError(f"r={r} exceeds the dimensions of B {B.shape}")
    om = [_frac(x) for x in omega]
    rowsets = list(combinations(range(B.nrows), r + 1))
    colsets = list(combinations(range(B.ncols), r))
    out = []
    for I in rowsets:
        out.append(
            [_det([[om[i]] + [B.rows[i][j] for j in J] for i in I]) for J in colsets]
        )
    return RationalMatrix(out, len(colsets))


def ker_ad(B: RationalMatrix, r: Optional[int] = None) -> Subspace:
    """Ker ad^r B inside the target space (r defaults to rank B)."""
    if r is None:
        r = rank(B)
    if r + 1 > B.nrows or r > B.ncols:
        # the exterior power vanishes: every omega is in the kernel
        return Subspace.full(B.nrows)
    return kernel(ad_operator_matrix(B, r))


@dataclass(frozen=True)
class ThetaKernel:
    subspace: Subspace
    path: str  # "both" or "projection"


def ker_theta(
    S: RationalMatrix,
    T: RationalMatrix,
    budget: int = AD_BUDGET,
    cross_check: bool = True,
) -> ThetaKernel:
    """{xi : S xi in Im T}.

    Computed as pi(Ker(S, T)) and, when the ad^r materialization fits in
    ``budget``, also as Ker(ad^(rank T) T . S); disagreement raises
    CrossCheckError.
    """
    if S.nrows != T.nrows:
        raise DimensionError(f"S has {S.nrows} rows, T has {T.nrows}")
    if T.ncols == 0:
        proj = kernel(S)
    else:
        proj = projected_kernel(S.hstack(T), range(S.ncols))
    r = rank(T) if T.ncols else 0
    if not cross_check or (T.ncols and ad_size(T, r) > budget):
        return ThetaKernel(proj, "projection")
    if T.ncols == 0 or r + 1 > T.nrows:
        via_ad = kernel(S) if r == 0 else Subspace.full(S.ncols)
    else:
        theta = ad_operator_matrix(T, r) @ S
        via_ad = kernel(theta)
    if via_ad != proj:
        raise CrossCheckError("Ker(ad^r T . S) differs from the projection of Ker(S, T)")
    return ThetaKernel(proj, "both")


def finite_subsystem(matrices: Sequence[RationalMatrix], pad: bool = False) -> List[int]:
    """Indices J whose stacked kernel equals the kernel of the whole family.

    Greedy: keep a matrix when its rows raise the rank of the accumulated
    row space. At most p indices are kept (p = column count). With ``pad``
    the selection is filled up to exactly p indices when the family has
    that many members.
    """
    if not matrices:
        raise ValueError("empty family")
    p = matrices[0].ncols
    for M in matrices:
        if M.ncols != p:
            raise DimensionError("all matrices must have the same number of columns")
    chosen: List[int] = []
    acc = Subspace.zero(p)
    for i, M in enumerate(matrices):
        if acc.dim == p:
            break
        new = acc + Subspace.span(M.rows, p)
        if new.dim > acc.dim:
            chosen.append(i)
            acc = new
    if pad:
        for i in range(len(matrices)):
            if len(chosen) >= p:
                break
            if i not in chosen:
                chosen.append(i)
        chosen.sort()
    return chosen
