"""Seeded random node configurations for experiments and tests.

Nodes are drawn on a grid of ``1/denominator`` so every config is an exact
rational and every run is reproducible from ``(family, n, seed)``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .families import CAUCHY, HBV, LUPAS, QBV, RBV, VANDERMONDE, NodeConfig

# grid of admissible numerators per family: nodes are k / denominator
_NODE_RANGE = {
    VANDERMONDE: (0, 3),
    QBV: (0, 1),
    HBV: (0, 1),
    LUPAS: (0, 1),
    RBV: (0, 1),
    CAUCHY: (0, 3),
}


def _grid(family: str, denominator: int) -> tuple[int, int]:
    lo, hi = _NODE_RANGE[family]
    first = 1 if family == RBV else lo * denominator
    return first, hi * denominator  # numerators in [first, last)


def _params(family: str, n: int, rng: np.random.Generator) -> dict:
    if family in (QBV, LUPAS):
        return {"q": Fraction(int(rng.integers(1, 11)), 10)}
    if family == HBV:
        return {"h": Fraction(int(rng.integers(0, 11)), 20)}
    if family == RBV:
        return {"weights": [Fraction(int(rng.integers(1, 20)), 4) for _ in range(n)]}
    if family == CAUCHY:
        return {"d": Fraction(int(rng.integers(1, 40)), 8), "s": int(rng.integers(1, n + 1))}
    return {}


def random_config(
    family: str,
    n: int,
    seed: int,
    *,
    repeats: bool = False,
    denominator: int = 1000,
) -> NodeConfig:
    """A random config for ``family`` with n nodes.

    By default the nodes are distinct, sorted and inside the family's
    total-nonnegativity domain (strict mode).  With ``repeats=True`` the nodes
    are drawn from fewer than n distinct values (so at least one repeats),
    shuffled, and the config is permissive.
    """
    rng = np.random.default_rng([seed, n, _family_key(family)])
    first, last = _grid(family, denominator)
    if repeats:
        k = int(rng.integers(1, max(n, 2)))  # fewer distinct values than nodes
        pool = rng.choice(np.arange(first, last), size=k, replace=False)
        picks = np.concatenate([pool, rng.choice(pool, size=n - k, replace=True)])
        rng.shuffle(picks)
        nums = [int(v) for v in picks]
    else:
        nums = sorted(int(v) for v in rng.choice(np.arange(first, last), size=n, replace=False))
    nodes = [Fraction(v, denominator) for v in nums]
    return NodeConfig(family, nodes, strict=not repeats, **_params(family, n, rng))


def _family_key(family: str) -> int:
    # stable across processes, unlike hash()
    return sum((i + 1) * ord(ch) for i, ch in enumerate(family))
