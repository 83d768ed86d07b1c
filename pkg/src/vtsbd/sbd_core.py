"""Bidiagonal decomposition storage, expansion and reconstruction.

Two packings are supported:

* :class:`OrdinaryBD` -- the n x n matrix ``M`` of the classical factorization
  ``A = L(1) ... L(n-1) D U(n-1) ... U(1)`` with unit-diagonal bidiagonal factors.
* :class:`SingularityFreeBD` -- the pair ``(B, C)`` where ``B`` packs the
  offdiagonals and ``D`` exactly like ``M`` and the (n+1) x (n+1) matrix ``C``
  packs the (possibly non-unit) diagonals of the bidiagonal factors.

All public indices are 1-based, as in the usual matrix notation; the matrices
themselves are stored as tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, DistinctNodesRequired, NotRepresentable, SingularFormula
from .scalars import MPF

LOWER, UPPER, DIAGONAL = "lower", "upper", "diagonal"


def _freeze(rows) -> tuple[tuple, ...]:
    return tuple(tuple(r) for r in rows)


def unit_like(x):
    """Return ``(zero, one)`` of the same scalar type as ``x``."""
    if isinstance(x, Fraction):
        return Fraction(0), Fraction(1)
    if isinstance(x, float):
        return 0.0, 1.0
    if isinstance(x, MPF):
        return x.context.mpf(0), x.context.mpf(1)
    if hasattr(x, "counter"):
        return type(x)(0, x.counter), type(x)(1, x.counter)
    return 0, 1


@dataclass(frozen=True)
class OrdinaryBD:
    M: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "M", _freeze(self.M))
        if any(len(r) != len(self.M) for r in self.M):
            raise DimensionMismatch("M must be square")

    @property
    def n(self) -> int:
        return len(self.M)

    def m(self, i: int, j: int):
        return self.M[i - 1][j - 1]


@dataclass(frozen=True)
class SingularityFreeBD:
    B: tuple[tuple, ...]
    C: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "B", _freeze(self.B))
        object.__setattr__(self, "C", _freeze(self.C))
        n = len(self.B)
        if any(len(r) != n for r in self.B):
            raise DimensionMismatch("B must be square")
        if len(self.C) != n + 1 or any(len(r) != n + 1 for r in self.C):
            raise DimensionMismatch(f"C must be {n + 1}x{n + 1} for n={n}")

    @property
    def n(self) -> int:
        return len(self.B)

    def b(self, i: int, j: int):
        return self.B[i - 1][j - 1]

    def c(self, i: int, j: int):
        return self.C[i - 1][j - 1]


@dataclass(frozen=True)
class BidiagonalFactor:
    """An n x n lower, upper or diagonal factor.

    For a lower factor ``offdiag[r]`` is the entry (r+2, r+1) (1-based); for an
    upper factor it is (r+1, r+2).  ``band`` is the index k of L_k / U_k, if any.
    """

    orientation: str
    diag: tuple
    offdiag: tuple
    band: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "diag", tuple(self.diag))
        object.__setattr__(self, "offdiag", tuple(self.offdiag))
        if self.orientation not in (LOWER, UPPER, DIAGONAL):
            raise ValueError(f"bad orientation {self.orientation!r}")
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise DimensionMismatch("offdiag must have n-1 entries")

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> list[list]:
        n = self.n
        zero, _ = unit_like(self.diag[0])
        A = [[zero] * n for _ in range(n)]
        for r in range(n):
            A[r][r] = self.diag[r]
        for r, v in enumerate(self.offdiag):
            if self.orientation == LOWER:
                A[r + 1][r] = v
            elif self.orientation == UPPER:
                A[r][r + 1] = v
        return A


@dataclass(frozen=True)
class FactorSequence:
    """Factors L_1..L_{n-1}, D, U_{n-1}..U_1 in multiplication order."""

    factors: tuple[BidiagonalFactor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise DimensionMismatch("empty factor sequence")
        n = self.factors[0].n
        if any(f.n != n for f in self.factors):
            raise DimensionMismatch("factor dimensions disagree")

    @property
    def n(self) -> int:
        return self.factors[0].n

    @property
    def lower(self) -> list[BidiagonalFactor]:
        return [f for f in self.factors if f.orientation == LOWER]

    @property
    def upper(self) -> list[BidiagonalFactor]:
        return [f for f in self.factors if f.orientation == UPPER]

    @property
    def diagonal(self) -> BidiagonalFactor:
        (d,) = [f for f in self.factors if f.orientation == DIAGONAL]
        return d


# --- Vandermonde BD parameters ------------------------------------------------


def v_entry(nodes: Sequence, i: int, j: int):
    """Entry (i, j) of the ordinary BD of the Vandermonde matrix on ``nodes``."""
    x = (None, *nodes)
    _, one = unit_like(x[1])
    if i < j:
        return x[i]
    if i == j:
        p = one
        for k in range(1, i):
            p = p * (x[i] - x[k])
        return p
    p = one
    for k in range(i - j, i - 1):
        den = x[i - 1] - x[k]
        if den == 0:
            raise SingularFormula(f"v_{i}{j}: x_{i - 1} - x_{k} vanishes")
        p = p * ((x[i] - x[k + 1]) / den)
    return p


def v_matrix(nodes: Sequence) -> list[list]:
    n = len(nodes)
    return [[v_entry(nodes, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def c_matrix(nodes: Sequence) -> list[list]:
    """The (n+1) x (n+1) diagonal store: c_ij = x_{i-1} - x_{i-j} for 2 <= j < i, else 1."""
    n = len(nodes)
    x = (None, *nodes)
    _, one = unit_like(nodes[0])
    C = [[one] * (n + 1) for _ in range(n + 1)]
    for i in range(3, n + 2):
        for j in range(2, i):
            C[i - 1][j - 1] = x[i - 1] - x[i - j]
    return C


# --- expansion ----------------------------------------------------------------


def bd_expand(bd: OrdinaryBD) -> FactorSequence:
    n = bd.n
    zero, one = unit_like(bd.M[0][0])
    lower, upper = [], []
    for k in range(1, n):
        lo = [zero] * (n - 1)
        up = [zero] * (n - 1)
        for i in range(n - k + 1, n + 1):
            lo[i - 2] = bd.m(i, i - (n - k))
            up[i - 2] = bd.m(i - (n - k), i)
        lower.append(BidiagonalFactor(LOWER, [one] * n, lo, band=k))
        upper.append(BidiagonalFactor(UPPER, [one] * n, up, band=k))
    D = BidiagonalFactor(DIAGONAL, [bd.m(i, i) for i in range(1, n + 1)], [zero] * (n - 1))
    return FactorSequence((*lower, D, *reversed(upper)))


def sbd_expand(sbd: SingularityFreeBD) -> FactorSequence:
    n = sbd.n
    zero, one = unit_like(sbd.B[0][0])
    lower, upper = [], []
    for k in range(1, n):
        s = n - k
        ld, ud = [one] * n, [one] * n
        lo, up = [zero] * (n - 1), [zero] * (n - 1)
        for m in range(max(s, 1), n + 1):
            ld[m - 1] = sbd.c(m + 1, m + 1 - s)
            ud[m - 1] = sbd.c(m + 1 - s, m + 1)
        for i in range(s + 1, n + 1):
            lo[i - 2] = sbd.b(i, i - s)
            up[i - 2] = sbd.b(i - s, i)
        lower.append(BidiagonalFactor(LOWER, ld, lo, band=k))
        upper.append(BidiagonalFactor(UPPER, ud, up, band=k))
    D = BidiagonalFactor(DIAGONAL, [sbd.b(i, i) for i in range(1, n + 1)], [zero] * (n - 1))
    return FactorSequence((*lower, D, *reversed(upper)))


def sbd_from_factors(fs: FactorSequence) -> SingularityFreeBD:
    """Inverse of :func:`sbd_expand`: pack L_1..L_{n-1}, D, U_{n-1}..U_1 into (B, C)."""
    n = fs.n
    lower, upper = fs.lower, list(reversed(fs.upper))
    if len(lower) != n - 1 or len(upper) != n - 1:
        raise NotRepresentable("expected n-1 lower and n-1 upper factors")
    D = fs.diagonal
    zero, one = unit_like(D.diag[0])
    B = [[zero] * n for _ in range(n)]
    C = [[one] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        B[i][i] = D.diag[i]
    for k in range(1, n):
        s = n - k
        L, U = lower[k - 1], upper[k - 1]
        for m in range(1, n + 1):
            in_band = m >= s
            if not in_band and (L.diag[m - 1] != 1 or U.diag[m - 1] != 1):
                raise NotRepresentable(f"factor {k} has a non-unit diagonal above its band")
            if in_band:
                C[m][m - s] = L.diag[m - 1]
                C[m - s][m] = U.diag[m - 1]
        for i in range(2, n + 1):
            if i >= s + 1:
                B[i - 1][i - s - 1] = L.offdiag[i - 2]
                B[i - s - 1][i - 1] = U.offdiag[i - 2]
            elif L.offdiag[i - 2] != 0 or U.offdiag[i - 2] != 0:
                raise NotRepresentable(f"factor {k} has an offdiagonal outside its band")
    return SingularityFreeBD(B, C)


# --- products -----------------------------------------------------------------


def _right_multiply(A: list[list], f: BidiagonalFactor) -> list[list]:
    n = f.n
    out = [row[:] for row in A]
    for r in range(n):
        row = A[r]
        for c in range(n):
            v = row[c] * f.diag[c]
            if f.orientation == LOWER and c + 1 < n:
                v = v + row[c + 1] * f.offdiag[c]
            elif f.orientation == UPPER and c > 0:
                v = v + row[c - 1] * f.offdiag[c - 1]
            out[r][c] = v
    return out


def reconstruct(fs: FactorSequence) -> list[list]:
    """Multiply the factors left to right in a fixed order."""
    A = fs.factors[0].to_dense()
    for f in fs.factors[1:]:
        A = _right_multiply(A, f)
    return A


def reconstruct_sbd(sbd: SingularityFreeBD) -> list[list]:
    return reconstruct(sbd_expand(sbd))


def reconstruct_bd(bd: OrdinaryBD) -> list[list]:
    return reconstruct(bd_expand(bd))


# --- BD <-> SBD ----------------------------------------------------------------


def split_bd(bd: OrdinaryBD, nodes: Sequence) -> SingularityFreeBD:
    """Turn the ordinary BD of a Vandermonde-type matrix into its SBD.

    Lower entries and the diagonal are divided by the Vandermonde BD entries
    v_ij; upper entries are kept; C comes from node differences.
    """
    n = bd.n
    if len(nodes) != n:
        raise DimensionMismatch(f"{len(nodes)} nodes for n={n}")
    for a in range(n):
        for b in range(a + 1, n):
            if nodes[a] == nodes[b]:
                raise DistinctNodesRequired(f"nodes {a + 1} and {b + 1} coincide")
    V = v_matrix(nodes)
    B = [
        [bd.M[i][j] / V[i][j] if i >= j else bd.M[i][j] for j in range(n)]
        for i in range(n)
    ]
    return SingularityFreeBD(B, c_matrix(nodes))


def fix_bottom_right(fs: FactorSequence) -> FactorSequence:
    """Push the (n, n) entries of all bidiagonal factors into D.

    Uses ``(Lbar_i)_{n,n-1} = (L_i)_{n,n-1} prod_{k<i} (L_k)_{n,n}`` (and the
    mirrored rule for U_i, walking from U_1), with
    ``Dbar_nn = D_nn prod_k (L_k)_{n,n} prod_k (U_k)_{n,n}``.
    """
    n = fs.n
    if n == 1:
        return fs
    _, one = unit_like(fs.diagonal.diag[0])

    def walk(factors):
        fixed, acc = [], None
        for f in factors:
            off = list(f.offdiag)
            if acc is not None:
                off[-1] = off[-1] * acc
            diag = list(f.diag)
            corner = diag[-1]
            diag[-1] = one
            acc = corner if acc is None else acc * corner
            fixed.append(BidiagonalFactor(f.orientation, diag, off, f.band))
        return fixed, acc

    lower, lacc = walk(fs.lower)
    upper, uacc = walk(list(reversed(fs.upper)))
    D = fs.diagonal
    d = list(D.diag)
    for acc in (lacc, uacc):
        if acc is not None:
            d[-1] = d[-1] * acc
    Dbar = BidiagonalFactor(DIAGONAL, d, D.offdiag, D.band)
    return FactorSequence((*lower, Dbar, *reversed(upper)))
