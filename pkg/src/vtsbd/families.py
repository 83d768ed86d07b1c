"""Vandermonde-type matrix families: dense entries and direct SBD construction.

Each family supplies the basis functions that generate its dense matrix and
the closed forms for the singularity-free parameters ``s_ij`` (i >= j) and the
upper BD entries ``m_ij`` (i < j).  The SBD is then assembled uniformly:
``B`` holds ``s_ij`` on and below the diagonal and ``m_ij`` above it, and ``C``
holds node differences.

Construction only subtracts input data from input data (node minus node or
one minus node), which keeps every entry accurate to a few ulps in binary64.
All constructions cost O(n^2) scalar operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import wraps
from math import comb

from .errors import DomainError, SingularFormula
from .sbd_core import (
    BidiagonalFactor,
    FactorSequence,
    SingularityFreeBD,
    c_matrix,
    sbd_expand,
    unit_like,
)
from .scalars import RATIONAL, format_scalar, parse_scalar

VANDERMONDE = "vandermonde"
QBV = "q_bernstein_vandermonde"
HBV = "h_bernstein_vandermonde"
LUPAS = "lupas"
RBV = "rational_bernstein_vandermonde"
CAUCHY = "cauchy_vandermonde_1pole"
FAMILIES = (VANDERMONDE, QBV, HBV, LUPAS, RBV, CAUCHY)

_REQUIRED = {
    VANDERMONDE: (),
    QBV: ("q",),
    HBV: ("h",),
    LUPAS: ("q",),
    RBV: ("weights",),
    CAUCHY: ("d", "s"),
}


def _frac(v) -> Fraction:
    return parse_scalar(v) if isinstance(v, str) else Fraction(v)


@dataclass(frozen=True)
class NodeConfig:
    """A family tag, its nodes x_1..x_n and the family parameters.

    Nodes and parameters are held as exact rationals.  ``strict`` turns on the
    total-nonnegativity domain checks (sorted nodes inside the family interval).
    """

    family: str
    nodes: tuple
    q: Fraction | None = None
    h: Fraction | None = None
    weights: tuple | None = None
    d: Fraction | None = None
    s: int | None = None
    strict: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "nodes", tuple(_frac(x) for x in self.nodes))
        if not self.nodes:
            raise ValueError("at least one node is required")
        for name in ("q", "h", "d"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _frac(v))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(_frac(w) for w in self.weights))
            if len(self.weights) != self.n:
                raise ValueError(f"{len(self.weights)} weights for n={self.n}")
        if self.s is not None:
            if int(self.s) != self.s:
                raise ValueError("pole multiplicity s must be an integer")
            object.__setattr__(self, "s", int(self.s))
        for name in _REQUIRED[self.family]:
            if getattr(self, name) is None:
                raise ValueError(f"family {self.family} needs parameter {name!r}")
        if self.family == CAUCHY and not 1 <= self.s <= self.n:
            raise ValueError(f"pole multiplicity must satisfy 1 <= s <= n, got s={self.s}")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def params(self) -> dict:
        out = {}
        for name in _REQUIRED[self.family]:
            v = getattr(self, name)
            if name == "weights":
                out[name] = [format_scalar(w) for w in v]
            elif name == "s":
                out[name] = v
            else:
                out[name] = format_scalar(v)
        return out

    def replace(self, **changes) -> NodeConfig:
        fields = dict(
            family=self.family, nodes=self.nodes, q=self.q, h=self.h,
            weights=self.weights, d=self.d, s=self.s, strict=self.strict,
        )
        fields.update(changes)
        return NodeConfig(**fields)

    def validate(self) -> None:
        """Raise :class:`DomainError` if strict mode is on and the config leaves the TN domain."""
        if not self.strict:
            return
        x = self.nodes
        for i in range(1, self.n):
            if x[i] < x[i - 1]:
                raise DomainError(f"strict mode needs sorted nodes: x_{i + 1} < x_{i}", index=i + 1)
        lo, lo_open, hi = _DOMAINS[self.family]
        dom = f"{'(' if lo_open else '['}{lo}, {'inf)' if hi is None else f'{hi})'}"
        for i, v in enumerate(x, start=1):
            if v < lo or (lo_open and v == lo) or (hi is not None and v >= hi):
                raise DomainError(f"node x_{i} = {format_scalar(v)} outside the domain {dom}", index=i)
        if self.family in (QBV, LUPAS) and not 0 < self.q <= 1:
            raise DomainError(f"q = {format_scalar(self.q)} outside (0, 1]")
        if self.family == HBV and self.h < 0:
            raise DomainError(f"h = {format_scalar(self.h)} must be >= 0")
        if self.family == RBV and any(w <= 0 for w in self.weights):
            raise DomainError("rational Bernstein weights must be positive")
        if self.family == CAUCHY and self.d <= 0:
            raise DomainError(f"pole d = {format_scalar(self.d)} must be > 0")


# (lower bound, lower bound open?, exclusive upper bound or None)
_DOMAINS = {
    VANDERMONDE: (0, False, None),
    QBV: (0, False, 1),
    HBV: (0, False, 1),
    LUPAS: (0, False, 1),
    RBV: (0, True, 1),
    CAUCHY: (0, False, None),
}


@dataclass(frozen=True)
class SplitParams:
    """``s_lower[i][j]`` for i >= j and ``m_upper[i][j]`` for i < j (0-based storage)."""

    s_lower: tuple
    m_upper: tuple


def _guard(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SingularFormula:
            raise
        except ZeroDivisionError as exc:
            raise SingularFormula(f"vanishing denominator in {fn.__name__}: {exc}") from None

    return wrapper


# --- q-calculus ---------------------------------------------------------------


def q_integer(r: int, q):
    """[r] = 1 + q + ... + q^(r-1), i.e. (1 - q^r)/(1 - q), or r when q = 1."""
    zero, one = unit_like(q)
    total, p = zero, one
    for _ in range(r):
        total = total + p
        p = p * q
    return total


def q_binomial(n: int, r: int, q):
    """Gaussian binomial [n][n-1]...[n-r+1] / [r]!, zero outside n >= r >= 0."""
    zero, one = unit_like(q)
    if not n >= r >= 0:
        return zero
    num, den = one, one
    for t in range(r):
        num = num * q_integer(n - t, q)
        den = den * q_integer(t + 1, q)
    return num / den


def _q_tables(q, one, n):
    """Powers q^0..q^n, q-integers [0]..[n] and q-factorials [0]!..[n]!."""
    qp = [one]
    for _ in range(n):
        qp.append(qp[-1] * q)
    qi = [one - one]
    for r in range(1, n + 1):
        qi.append(qi[-1] + qp[r - 1])
    qf = [one]
    for r in range(1, n + 1):
        qf.append(qf[-1] * qi[r])
    return qp, qi, qf


# --- scalar context -------------------------------------------------------------


class _Ctx:
    """Config lifted into a scalar kind, with 1-based node access ``x[i]``."""

    def __init__(self, config: NodeConfig, kind):
        cv = kind.convert
        self.config = config
        self.n = config.n
        self.one = cv(1)
        self.x = (None, *(cv(v) for v in config.nodes))
        self.q = cv(config.q) if config.q is not None else None
        self.h = cv(config.h) if config.h is not None else None
        self.d = cv(config.d) if config.d is not None else None
        self.w = (None, *(cv(v) for v in config.weights)) if config.weights is not None else None
        self.s = config.s
        self.kind = kind


def _pow(x, e: int, one):
    p = one
    for _ in range(e):
        p = p * x
    return p


def _bernstein(n: int, j: int, x, one):
    """Bernstein polynomial b^{n}_{j}(x) = C(n, j) x^j (1-x)^(n-j)."""
    return one * comb(n, j) * _pow(x, j, one) * _pow(one - x, n - j, one)


def _weight_sum(c: _Ctx, x):
    """W(x) = sum_j w_j b^{n-1}_{j-1}(x) with incremental powers."""
    n, one = c.n, c.one
    y = one - x
    xp, yp = [one], [one]
    for _ in range(n - 1):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    total = one - one
    for j in range(1, n + 1):
        total = total + c.w[j] * comb(n - 1, j - 1) * xp[j - 1] * yp[n - j]
    return total


def _lupas_weight(c: _Ctx, x, qp):
    """w(x) = prod_{k=1}^{n-2} (1 - x + q^k x)."""
    y = c.one - x
    p = c.one
    for k in range(1, c.n - 1):
        p = p * (y + qp[k] * x)
    return p


# --- basis functions ------------------------------------------------------------


def _basis(c: _Ctx, j: int, x):
    n, one, fam = c.n, c.one, c.config.family
    if fam == VANDERMONDE:
        return _pow(x, j - 1, one)
    if fam == QBV:
        p = q_binomial(n - 1, j - 1, c.q) * _pow(x, j - 1, one)
        qs = one
        for _ in range(n - j):
            p = p * (one - qs * x)
            qs = qs * c.q
        return p
    if fam == HBV:
        h = c.h
        num = one * comb(n - 1, j - 1)
        for k in range(j - 1):
            num = num * (x + k * h)
        for k in range(n - j):
            num = num * (one - x + k * h)
        den = one
        for k in range(n - 1):
            den = den * (one + k * h)
        return num / den
    if fam == LUPAS:
        q = c.q
        qp, _, _ = _q_tables(q, one, n)
        a = (q_binomial(n - 1, j - 1, q) * _pow(q, (j - 1) * (j - 2) // 2, one)
             * _pow(x, j - 1, one) * _pow(one - x, n - j, one))
        return a / _lupas_weight(c, x, qp)
    if fam == RBV:
        return c.w[j] * _bernstein(n - 1, j - 1, x, one) / _weight_sum(c, x)
    if fam == CAUCHY:
        if j <= c.s:
            return one / _pow(x + c.d, c.s - j + 1, one)
        return _pow(x, j - c.s - 1, one)
    raise AssertionError(fam)


@_guard
def basis_eval(config: NodeConfig, j: int, x, kind=RATIONAL):
    """f_j(x): the generator of column j (1-based) of the family's dense matrix."""
    if not 1 <= j <= config.n:
        raise IndexError(f"column {j} out of range 1..{config.n}")
    c = _Ctx(config, kind)
    return _basis(c, j, kind.convert(x))


@_guard
def weight_sum(config: NodeConfig, x, kind=RATIONAL):
    if config.family != RBV:
        raise ValueError("weight_sum applies to the rational Bernstein-Vandermonde family")
    c = _Ctx(config, kind)
    return _weight_sum(c, kind.convert(x))


@_guard
def dense_matrix(config: NodeConfig, kind=RATIONAL) -> list[list]:
    config.validate()
    c = _Ctx(config, kind)
    n = c.n
    return [[_basis(c, j, c.x[i]) for j in range(1, n + 1)] for i in range(1, n + 1)]


# --- singularity-free parameters -------------------------------------------------
#
# Each routine fills S (i >= j) and M (i < j) as 1-based (n+1) x (n+1) tables.


def _tables(c: _Ctx):
    n = c.n
    zero = c.one - c.one
    S = [[zero] * (n + 1) for _ in range(n + 1)]
    M = [[zero] * (n + 1) for _ in range(n + 1)]
    return S, M


def _split_vandermonde(c: _Ctx):
    n, x = c.n, c.x
    S, M = _tables(c)
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            S[i][j] = c.one
        for k in range(i + 1, n + 1):
            M[i][k] = x[i]
    return S, M


def _split_qbv(c: _Ctx):
    n, x, one, q = c.n, c.x, c.one, c.q
    qp, qi, qf = _q_tables(q, one, n)
    # t[i][s] = 1 - q^s x_i, s = 0..n-1
    t = [None] + [[one - x[i]] + [one - qp[s] * x[i] for s in range(1, n)] for i in range(1, n + 1)]
    S, M = _tables(c)
    for i in range(1, n + 1):
        # s_ij, j < i: one prefix product of ratios per row
        if i > 1:
            P, acc = [], one
            for s in range(n - 1):
                acc = acc * (t[i][s] / t[i - 1][s])
                P.append(acc)
            for j in range(1, i):
                S[i][j] = t[i - j][n - j] / t[i - 1][n - j] * P[n - 1 - j]
        num = one
        for s in range(n - i):
            num = num * t[i][s]
        den = one
        for k in range(1, i):
            den = den * t[k][n - i]
        S[i][i] = qf[n - 1] / (qf[i - 1] * qf[n - i]) * num / den
        # m_ji, j < i
        if i > 1:
            ratio = qi[n - i + 1] / qi[i - 1]
            G = one
            for j in range(1, i):
                M[j][i] = ratio * x[j] / t[j][n - i] * G
                G = G * (t[j][n - i + 1] / t[j][n - i])
    return S, M


def _split_hbv(c: _Ctx):
    n, x, one, h = c.n, c.x, c.one, c.h
    kh = [one - one]
    for _ in range(n):
        kh.append(kh[-1] + h)
    # u[i][k] = 1 - x_i + k h, k = 0..n-1
    u = [None]
    for i in range(1, n + 1):
        y = one - x[i]
        u.append([y] + [y + kh[k] for k in range(1, n)])
    denom = [one]  # denom[r] = prod_{k=1}^{r} (1 + k h)
    for k in range(1, n):
        denom.append(denom[-1] * (one + kh[k]))
    S, M = _tables(c)
    zero = one - one
    # x_1 = 0 makes the first row e_1 and the generic upper formula a valid but
    # non-canonical factoring of U; this branch yields the canonical one (zero
    # row 1, the rest from the trailing block)
    pinned = x[1] == 0 and h != 0
    for i in range(1, n + 1):
        if i > 1:
            P, acc = [], one
            for k in range(n - 1):
                acc = acc * (u[i][k] / u[i - 1][k])
                P.append(acc)
            for j in range(1, i):
                S[i][j] = u[i - j][n - j] / u[i - 1][n - j] * P[n - j - 1]
        num = one * comb(n - 1, i - 1)
        for k in range(n - i):
            num = num * u[i][k]
        den = denom[max(n - i - 1, 0)]
        for k in range(1, i):
            den = den * u[k][n - i]
        S[i][i] = num / den
        if i > 1:
            ratio = one * (n - i + 1) / (i - 1)
            G = one  # prod_{k<j} u[k][n-i+1] / prod_{k<j} u[k][n-i]
            for j in range(1, i):
                if pinned:
                    M[j][i] = ratio * (x[j] + kh[i - j]) * G / u[j][n - i] if j > 1 else zero
                    if j > 1:
                        G = G * (u[j][n - i + 1] / u[j][n - i])
                else:
                    M[j][i] = ratio * (x[j] + kh[i - j - 1]) * G / u[j][n - i]
                    G = G * (u[j][n - i + 1] / u[j][n - i])
    return S, M


def _split_lupas(c: _Ctx):
    n, x, one, q = c.n, c.x, c.one, c.q
    qp, qi, qf = _q_tables(q, one, n)
    y = [one] + [one - x[i] for i in range(1, n + 1)]  # y[0] = 1 - x_0 with x_0 := 0
    wq = [None] + [_lupas_weight(c, x[i], qp) for i in range(1, n + 1)]
    S, M = _tables(c)
    qtri = one  # q^{(i-1)(i-2)/2}
    left = one  # prod_{k=0}^{i-1} (1 - x_k)
    for i in range(1, n + 1):
        if i > 2:
            qtri = qtri * qp[i - 2]
        if i > 1:
            left = left * y[i - 1]
            rho = y[i] / y[i - 1]
            pw = [one]
            for _ in range(n - 1):
                pw.append(pw[-1] * rho)
            wr = wq[i - 1] / wq[i]
            for j in range(1, i):
                S[i][j] = pw[n - j] * y[i - j] / y[i - 1] * wr
        num = qf[n - 1] / (qf[i - 1] * qf[n - i]) * qtri
        for _ in range(n - i):
            num = num * y[i]
        S[i][i] = num / (wq[i] * left)
        if i > 1:
            ratio = qi[n - i + 1] * qp[i - 2] / qi[i - 1]
            for j in range(1, i):
                M[j][i] = ratio * x[j] / y[j]
    return S, M


def _split_rbv(c: _Ctx):
    n, x, one, w = c.n, c.x, c.one, c.w
    y = [None] + [one - x[i] for i in range(1, n + 1)]
    W = [None] + [_weight_sum(c, x[i]) for i in range(1, n + 1)]
    S, M = _tables(c)
    left = one  # prod_{k<i} (1 - x_k)
    for i in range(1, n + 1):
        if i > 1:
            left = left * y[i - 1]
            rho = y[i] / y[i - 1]
            pw = [one]
            for _ in range(n - 1):
                pw.append(pw[-1] * rho)
            wr = W[i - 1] / W[i]
            for j in range(1, i):
                S[i][j] = wr * pw[n - j] * y[i - j] / y[i - 1]
        num = one * comb(n - 1, i - 1) * w[i]
        for _ in range(n - i):
            num = num * y[i]
        S[i][i] = num / (W[i] * left)
        if i > 1:
            ratio = w[i] / w[i - 1] * (n - i + 1) / (i - 1)
            for j in range(1, i):
                M[j][i] = ratio * x[j] / y[j]
    return S, M


def _split_cauchy(c: _Ctx):
    n, x, one, d, s = c.n, c.x, c.one, c.d, c.s
    xd = [None] + [x[i] + d for i in range(1, n + 1)]
    S, M = _tables(c)
    for i in range(1, n + 1):
        S[i][i] = one / _pow(xd[i], s, one)
        if i > 1:
            r = _pow(xd[i - 1] / xd[i], s, one)
            for j in range(1, i):
                S[i][j] = r
                M[j][i] = xd[j] if i - j <= s else x[j]
    return S, M


_SPLITS = {
    VANDERMONDE: _split_vandermonde,
    QBV: _split_qbv,
    HBV: _split_hbv,
    LUPAS: _split_lupas,
    RBV: _split_rbv,
    CAUCHY: _split_cauchy,
}


@_guard
def split_params(config: NodeConfig, kind=RATIONAL) -> SplitParams:
    config.validate()
    c = _Ctx(config, kind)
    S, M = _SPLITS[config.family](c)
    n = c.n
    zero = c.one - c.one
    s_lower = tuple(tuple(S[i][j] if i >= j else zero for j in range(1, n + 1)) for i in range(1, n + 1))
    m_upper = tuple(tuple(M[i][j] if i < j else zero for j in range(1, n + 1)) for i in range(1, n + 1))
    return SplitParams(s_lower, m_upper)


def assemble(params: SplitParams, nodes) -> SingularityFreeBD:
    n = len(nodes)
    B = [
        [params.s_lower[i][j] if i >= j else params.m_upper[i][j] for j in range(n)]
        for i in range(n)
    ]
    return SingularityFreeBD(B, c_matrix(nodes))


def sbd(config: NodeConfig, kind=RATIONAL) -> SingularityFreeBD:
    """Singularity-free BD of the family matrix, valid for any (also repeated) nodes."""
    params = split_params(config, kind)
    return assemble(params, [kind.convert(v) for v in config.nodes])


@_guard
def sbd_rbv_scaled(config: NodeConfig, kind=RATIONAL) -> FactorSequence:
    """Alternative rational Bernstein-Vandermonde SBD via diagonal scaling.

    Uses the q = 1 Bernstein-Vandermonde factors with the first lower factor
    premultiplied by diag(1/W(x_i)) and the last upper factor postmultiplied by
    diag(w_i).  The first factor has non-unit diagonal on every row, so the
    result is only available as a factor sequence.
    """
    if config.family != RBV:
        raise ValueError("sbd_rbv_scaled applies to the rational Bernstein-Vandermonde family")
    config.validate()
    base = config.replace(family=QBV, q=Fraction(1), weights=None)
    fs = sbd_expand(sbd(base, kind))
    c = _Ctx(config, kind)
    n = c.n
    inv_w = [c.one / _weight_sum(c, c.x[i]) for i in range(1, n + 1)]
    factors = list(fs.factors)
    first, last = factors[0], factors[-1]
    if n == 1:
        D = first
        factors[0] = BidiagonalFactor(D.orientation, [D.diag[0] * inv_w[0] * c.w[1]], D.offdiag, D.band)
        return FactorSequence(factors)
    factors[0] = BidiagonalFactor(
        first.orientation,
        [inv_w[r] * first.diag[r] for r in range(n)],
        [inv_w[r + 1] * first.offdiag[r] for r in range(n - 1)],
        first.band,
    )
    # U_1 W_2 scales column r of U_1 by w_r; offdiag[r] sits in column r+2 (1-based)
    factors[-1] = BidiagonalFactor(
        last.orientation,
        [last.diag[r] * c.w[r + 1] for r in range(n)],
        [last.offdiag[r] * c.w[r + 2] for r in range(n - 1)],
        last.band,
    )
    return FactorSequence(factors)
