"""Exact ground truth: Neville elimination, rank, minors and TN spot checks.

Everything here works on ``Fraction`` matrices only and never shares code
with the closed-form constructions it is used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, SingularPivot
from .sbd_core import OrdinaryBD, SingularityFreeBD
from .scalars import format_relerr, relative_error


def _as_fractions(A) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in A]


def _neville_lower(W: list[list[Fraction]], transposed: bool = False) -> list[list[Fraction]]:
    """Eliminate below the diagonal column by column, bottom-up, in place.

    Returns the multiplier matrix (entries below the diagonal).
    """
    n = len(W)
    mult = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n - 1):
        for i in range(n - 1, j, -1):
            a, piv = W[i][j], W[i - 1][j]
            if a == 0:
                continue
            if piv == 0:
                loc = (i + 1, j + 1)
                raise SingularPivot(*(loc[::-1] if transposed else loc))
            m = a / piv
            mult[i][j] = m
            prev = W[i - 1]
            W[i] = [w - m * p for w, p in zip(W[i], prev)]
    return mult


def neville_bd(A) -> OrdinaryBD:
    """Ordinary BD of ``A`` by complete Neville elimination with adjacent rows/columns.

    Columns are processed left to right, rows bottom-up against the adjacent row
    above; the upper multipliers come from the same pass on the transpose of the
    resulting upper triangular matrix.  A zero multiplier is used when the entry
    to annihilate is already zero.
    """
    W = _as_fractions(A)
    n = len(W)
    if any(len(r) != n for r in W):
        raise DimensionMismatch("neville_bd needs a square matrix")
    lower = _neville_lower(W)
    Wt = [list(col) for col in zip(*W)]
    upper = _neville_lower(Wt, transposed=True)
    M = [
        [lower[i][j] if i > j else upper[j][i] if i < j else W[i][i] for j in range(n)]
        for i in range(n)
    ]
    return OrdinaryBD(M)


def _integer_rows(A) -> list[list[int]]:
    out = []
    for row in _as_fractions(A):
        den = math.lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * den) for v in row])
    return out


def exact_rank(A) -> int:
    """Rank over Q by Bareiss fraction-free elimination with row pivoting."""
    rows = _integer_rows(A)
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((r for r in range(rank, m) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for r in range(rank + 1, m):
            row = rows[r]
            for cc in range(c + 1, ncols):
                q, rem = divmod(row[cc] * p[c] - row[c] * p[cc], prev)
                assert rem == 0, "Bareiss division must be exact"
                row[cc] = q
            row[c] = 0
        prev = p[c]
        rank += 1
        if rank == m:
            break
    return rank


def determinant(A) -> Fraction:
    W = _as_fractions(A)
    n = len(W)
    if any(len(r) != n for r in W):
        raise DimensionMismatch("determinant needs a square matrix")
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if W[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            W[c], W[piv] = W[piv], W[c]
            det = -det
        p = W[c][c]
        det *= p
        for r in range(c + 1, n):
            f = W[r][c] / p
            if f:
                W[r] = [a - f * b for a, b in zip(W[r], W[c])]
    return det


def minor(A, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """Exact determinant of the submatrix on 1-based ``rows`` x ``cols``."""
    if len(rows) != len(cols):
        raise DimensionMismatch(f"{len(rows)} rows vs {len(cols)} columns")
    if len(rows) > min(len(A), len(A[0])):
        raise DimensionMismatch("minor order exceeds matrix size")
    return determinant([[A[i - 1][j - 1] for j in cols] for i in rows])


@dataclass
class TNReport:
    trials: int
    seed: int
    negatives: list = field(default_factory=list)
    min_value: Fraction | None = None

    @property
    def ok(self) -> bool:
        return not self.negatives


def sample_minor_indices(m: int, n: int, trials: int, seed: int) -> list[tuple[tuple, tuple]]:
    """Pre-generate ``trials`` random (rows, cols) index sets, orders 1..min(m, n)."""
    rng = np.random.default_rng(seed)
    kmax = min(m, n)
    out = []
    for _ in range(trials):
        k = int(rng.integers(1, kmax + 1))
        rows = tuple(sorted(int(r) + 1 for r in rng.choice(m, size=k, replace=False)))
        cols = tuple(sorted(int(c) + 1 for c in rng.choice(n, size=k, replace=False)))
        out.append((rows, cols))
    return out


def tn_sample_check(A, trials: int, seed: int) -> TNReport:
    A = _as_fractions(A)
    report = TNReport(trials=trials, seed=seed)
    for rows, cols in sample_minor_indices(len(A), len(A[0]), trials, seed):
        v = minor(A, rows, cols)
        if report.min_value is None or v < report.min_value:
            report.min_value = v
        if v < 0:
            report.negatives.append((rows, cols, v))
    return report


@dataclass
class VerificationReport:
    max_rel_error_B: object
    max_rel_error_C: object
    worst_entry: tuple[int, int, str]
    n: int
    seed: int | None = None

    @property
    def max_rel_error(self):
        return max(self.max_rel_error_B, self.max_rel_error_C)

    def to_dict(self) -> dict:
        i, j, which = self.worst_entry
        d = {
            "max_rel_error_B": format_relerr(self.max_rel_error_B),
            "max_rel_error_C": format_relerr(self.max_rel_error_C),
            "worst": {"i": i, "j": j, "in": which},
            "n": self.n,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        return d


def compare_sbd(computed: SingularityFreeBD, exact: SingularityFreeBD, seed=None) -> VerificationReport:
    """Componentwise relative errors of ``computed`` against ``exact`` over B and C."""
    if computed.n != exact.n:
        raise DimensionMismatch(f"n={computed.n} vs n={exact.n}")
    worst, worst_err = (1, 1, "B"), -1
    maxima = {}
    for which in ("B", "C"):
        got, ref = getattr(computed, which), getattr(exact, which)
        best = Fraction(0)
        for i, (grow, rrow) in enumerate(zip(got, ref), start=1):
            for j, (g, r) in enumerate(zip(grow, rrow), start=1):
                e = relative_error(g, r)
                if e > best:
                    best = e
                if e > worst_err:
                    worst, worst_err = (i, j, which), e
        maxima[which] = best
    return VerificationReport(maxima["B"], maxima["C"], worst, computed.n, seed)
