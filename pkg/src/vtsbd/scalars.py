"""Scalar kinds the decompositions are generic over.

Three kinds are supported: IEEE binary64 (Python ``float``), exact rationals
(``fractions.Fraction``) and big floats (``mpmath`` with a private context per
precision, so no global precision state is touched).  Every algorithm in the
package only ever uses ``kind.convert`` to bring constants and inputs into the
kind and then relies on the ordinary arithmetic operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

import mpmath
from mpmath.ctx_mp_python import _mpf as MPF

from .errors import ParseError, ZeroDenominator

EPS = 2.0**-52
DEFAULT_BIGFLOAT_BITS = 212

Scalar = Any


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class ScalarKind:
    """One of ``binary64``, ``rational`` or ``bigfloat`` (with ``precision_bits``)."""

    name: str
    precision_bits: int | None = None

    def __post_init__(self):
        if self.name not in ("binary64", "rational", "bigfloat"):
            raise ValueError(f"unknown scalar kind {self.name!r}")
        if self.name == "bigfloat":
            if self.precision_bits is None:
                object.__setattr__(self, "precision_bits", DEFAULT_BIGFLOAT_BITS)
            if self.precision_bits <= 0:
                raise ValueError("precision_bits must be positive")
        elif self.precision_bits is not None:
            raise ValueError(f"{self.name} takes no precision")

    @property
    def exact(self) -> bool:
        return self.name == "rational"

    def convert(self, value) -> Scalar:
        """Round an int, Fraction, float or scalar string into this kind."""
        if isinstance(value, str):
            return parse_scalar(value, self)
        if self.name == "rational":
            return Fraction(value)
        if self.name == "binary64":
            return float(value)
        ctx = _mp_context(self.precision_bits)
        if isinstance(value, Fraction):
            return ctx.mpf(value.numerator) / value.denominator
        return ctx.mpf(value)

    def zero(self) -> Scalar:
        return self.convert(0)

    def one(self) -> Scalar:
        return self.convert(1)

    def __str__(self):
        if self.name == "bigfloat":
            return f"bigfloat({self.precision_bits})"
        return self.name


BINARY64 = ScalarKind("binary64")
RATIONAL = ScalarKind("rational")


def bigfloat(bits: int = DEFAULT_BIGFLOAT_BITS) -> ScalarKind:
    return ScalarKind("bigfloat", bits)


def kind_from_name(name: str) -> ScalarKind:
    """Accept the CLI spellings ``f64``/``binary64``, ``rational`` and ``bigfloat[:bits]``."""
    if name in ("f64", "binary64", "float"):
        return BINARY64
    if name == "rational":
        return RATIONAL
    if name.startswith("bigfloat"):
        _, _, bits = name.partition(":")
        return bigfloat(int(bits) if bits else DEFAULT_BIGFLOAT_BITS)
    raise ValueError(f"unknown scalar kind {name!r}")


def parse_scalar(text: str, kind: ScalarKind = RATIONAL) -> Scalar:
    """Parse a decimal literal or a ``p/q`` fraction.

    Rationals are parsed exactly (``"0.1"`` is 1/10); the other kinds round the
    exact value to nearest.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty scalar literal")
    if s.count("/") > 1:
        raise ParseError(f"malformed scalar {text!r}")
    if "/" in s:
        num, den = s.split("/")
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise ParseError(f"malformed fraction {text!r}") from None
        if q == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}")
        value = Fraction(p, q)
    else:
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed scalar {text!r}") from None
    return kind.convert(value)


def to_fraction(x) -> Fraction:
    """Lift a scalar of any supported kind to the exact rational it represents."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot lift non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, MPF):
        man, exp = x.man_exp
        return Fraction(man) * Fraction(2) ** exp
    if isinstance(x, CountingScalar):
        return Fraction(x.value)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def format_scalar(x) -> str:
    """Canonical text: ``p/q`` or ``p`` for rationals, shortest round-trip for floats."""
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, MPF):
        digits = int(math.ceil(x.context.prec * math.log10(2))) + 1
        return x.context.nstr(x, digits, strip_zeros=False, min_fixed=-5, max_fixed=5)
    if isinstance(x, CountingScalar):
        return format_scalar(x.value)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def relative_error(computed, exact):
    """|computed - exact| / |exact| evaluated exactly.

    Returns a Fraction, or ``math.inf`` when ``exact`` is 0 and ``computed`` is not.
    """
    c = to_fraction(computed)
    e = to_fraction(exact)
    if e == 0:
        return Fraction(0) if c == 0 else math.inf
    return abs(c - e) / abs(e)


def format_relerr(err) -> str:
    if err == math.inf:
        return "inf"
    if err == 0:
        return "0"
    return f"{float(err):.6e}"


# --- operation counting -----------------------------------------------------


@dataclass
class OpCounter:
    count: int = 0


class CountingScalar:
    """Exact rational that counts every arithmetic operation it takes part in."""

    __slots__ = ("value", "counter")

    def __init__(self, value, counter: OpCounter):
        self.value = Fraction(value)
        self.counter = counter

    def _wrap(self, value):
        self.counter.count += 1
        return CountingScalar(value, self.counter)

    @staticmethod
    def _v(other):
        if isinstance(other, CountingScalar):
            return other.value
        if isinstance(other, (int, Fraction)):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    def __radd__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(o + self.value)

    def __sub__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    def __rmul__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(o * self.value)

    def __truediv__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value / o)

    def __rtruediv__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self._wrap(o / self.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __eq__(self, other):
        o = self._v(other)
        return NotImplemented if o is NotImplemented else self.value == o

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"CountingScalar({self.value})"


@dataclass(frozen=True)
class InstrumentedKind:
    """Duck-typed stand-in for :class:`ScalarKind` producing counting rationals."""

    counter: OpCounter = field(default_factory=OpCounter)
    name: str = "instrumented"
    exact = True

    def convert(self, value):
        if isinstance(value, CountingScalar):
            return value
        if isinstance(value, str):
            value = parse_scalar(value, RATIONAL)
        return CountingScalar(value, self.counter)

    def zero(self):
        return self.convert(0)

    def one(self):
        return self.convert(1)
