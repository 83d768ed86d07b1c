from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from vtsbd.families import CAUCHY, HBV, LUPAS, QBV, RBV, VANDERMONDE, NodeConfig

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def rationals(lo=-3, hi=3, max_den=40):
    """Rationals in [lo, hi] with denominators up to max_den."""
    return st.integers(1, max_den).flatmap(
        lambda q: st.integers(lo * q, hi * q).map(lambda p: Fraction(p, q))
    )


def unit_interval(max_den=50, open_left=False):
    """Rationals in [0, 1), or (0, 1) with open_left."""
    return st.integers(2, max_den).flatmap(
        lambda q: st.integers(1 if open_left else 0, q - 1).map(lambda p: Fraction(p, q))
    )


@st.composite
def strict_configs(draw, family=None, min_n=1, max_n=6):
    """Sorted in-domain configs; ties are allowed (strict mode accepts them)."""
    family = family or draw(st.sampled_from([VANDERMONDE, QBV, HBV, LUPAS, RBV, CAUCHY]))
    n = draw(st.integers(min_n, max_n))
    if family in (VANDERMONDE, CAUCHY):
        pts = st.integers(0, 60).map(lambda k: Fraction(k, 20))
    else:
        pts = unit_interval(open_left=family == RBV)
    nodes = sorted(draw(st.lists(pts, min_size=n, max_size=n)))
    return NodeConfig(family, nodes, **draw(_params(family, n)))


def _params(family, n):
    q = st.integers(1, 10).map(lambda k: Fraction(k, 10))
    if family in (QBV, LUPAS):
        return st.fixed_dictionaries({"q": q})
    if family == HBV:
        return st.fixed_dictionaries({"h": st.integers(0, 10).map(lambda k: Fraction(k, 10))})
    if family == RBV:
        w = st.integers(1, 12).map(lambda k: Fraction(k, 4))
        return st.fixed_dictionaries({"weights": st.lists(w, min_size=n, max_size=n)})
    if family == CAUCHY:
        return st.fixed_dictionaries(
            {"d": st.integers(1, 24).map(lambda k: Fraction(k, 8)), "s": st.integers(1, n)}
        )
    return st.just({})


@pytest.fixture
def vandermonde_124():
    return NodeConfig(VANDERMONDE, [1, 2, 4])
