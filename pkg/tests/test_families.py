from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import assume, given, strategies as st

from conftest import rationals, strict_configs, unit_interval
from vtsbd.errors import DomainError, SingularFormula
from vtsbd.families import (
    CAUCHY,
    FAMILIES,
    HBV,
    LUPAS,
    QBV,
    RBV,
    VANDERMONDE,
    NodeConfig,
    basis_eval,
    dense_matrix,
    q_binomial,
    q_integer,
    sbd,
    sbd_rbv_scaled,
    split_params,
    weight_sum,
)
from vtsbd.oracle import exact_rank, neville_bd
from vtsbd.sbd_core import reconstruct, reconstruct_sbd, sbd_expand, split_bd
from vtsbd.scalars import BINARY64

F = Fraction


def gaussian_binomial_by_subsets(n, r, q):
    # sum over r-subsets of {1..n} of q^(sum - r(r+1)/2)
    if not 0 <= r <= n:
        return F(0)
    base = r * (r + 1) // 2
    return sum((q ** (sum(S) - base) for S in combinations(range(1, n + 1), r)), F(0))


# --- q-calculus ---------------------------------------------------------------------


@pytest.mark.parametrize("r, q, expected", [(0, F(1, 3), 0), (5, F(1), 5), (3, F(1, 2), F(7, 4)), (1, F(2), 1)])
def test_q_integer(r, q, expected):
    assert q_integer(r, q) == expected


@given(st.integers(0, 12), rationals(-2, 2, 10).filter(lambda v: v != 1))
def test_q_integer_matches_geometric_quotient(r, q):
    assert q_integer(r, q) == (1 - q**r) / (1 - q)


@pytest.mark.parametrize(
    "n, r, q, expected",
    [(4, 0, F(1, 3), 1), (4, 2, F(1), 6), (4, 2, F(1, 2), F(35, 16)), (3, 5, F(1, 2), 0), (3, -1, F(1, 2), 0)],
)
def test_q_binomial(n, r, q, expected):
    assert q_binomial(n, r, q) == expected


@given(st.integers(0, 8), st.integers(-1, 9), rationals(0, 2, 10))
def test_q_binomial_matches_subset_expansion(n, r, q):
    assert q_binomial(n, r, q) == gaussian_binomial_by_subsets(n, r, q)


# --- basis and dense matrices ----------------------------------------------------------


def test_qbv_basis_n2():
    config = NodeConfig(QBV, [F(1, 5), F(1, 2)], q=F(1, 3))
    for x in (F(0), F(1, 7), F(3, 4)):
        assert basis_eval(config, 1, x) == 1 - x
        assert basis_eval(config, 2, x) == x


@given(st.integers(1, 6), st.data())
def test_hbv_at_zero_is_qbv_at_one(n, data):
    nodes = [data.draw(unit_interval()) for _ in range(n)]
    h = NodeConfig(HBV, nodes, h=0, strict=False)
    q = NodeConfig(QBV, nodes, q=1, strict=False)
    for j in range(1, n + 1):
        for x in nodes:
            assert basis_eval(h, j, x) == basis_eval(q, j, x)


def test_cauchy_basis_single_pole():
    d = F(3, 2)
    config = NodeConfig(CAUCHY, [F(0), F(1)], d=d, s=1)
    for x in (F(0), F(2, 3), F(5)):
        assert basis_eval(config, 1, x) == 1 / (x + d)
        assert basis_eval(config, 2, x) == 1


def test_cauchy_columns_poles_first_then_monomials():
    config = NodeConfig(CAUCHY, [F(1), F(2), F(3), F(4)], d=1, s=2)
    x = F(1)
    assert [basis_eval(config, j, x) for j in range(1, 5)] == [F(1, 4), F(1, 2), 1, 1]
    x = F(3)
    assert [basis_eval(config, j, x) for j in range(1, 5)] == [F(1, 16), F(1, 4), 1, 3]


def test_basis_singular_denominator():
    config = NodeConfig(CAUCHY, [F(-1), F(0)], d=1, s=1, strict=False)
    with pytest.raises(SingularFormula):
        dense_matrix(config)


def test_dense_vandermonde_124(vandermonde_124):
    assert dense_matrix(vandermonde_124) == [[1, 1, 1], [1, 2, 4], [1, 4, 16]]


def test_dense_qbv_n2():
    x1, x2 = F(1, 4), F(2, 3)
    assert dense_matrix(NodeConfig(QBV, [x1, x2], q=F(1, 2))) == [[1 - x1, x1], [1 - x2, x2]]


@pytest.mark.parametrize("family", FAMILIES)
def test_equal_nodes_give_equal_rows(family):
    config = _example(family, [F(1, 5), F(1, 5), F(1, 2)])
    A = dense_matrix(config)
    assert A[0] == A[1]
    assert exact_rank(A) == 2


@pytest.mark.parametrize("family", [QBV, HBV, LUPAS, RBV])
@given(data=st.data())
def test_row_sums_are_one(family, data):
    config = data.draw(strict_configs(family))
    for row in dense_matrix(config):
        assert sum(row) == 1


@given(st.integers(1, 6), st.data())
def test_family_coincidences(n, data):
    nodes = sorted(data.draw(unit_interval(open_left=True)) for _ in range(n))
    ref = dense_matrix(NodeConfig(QBV, nodes, q=1))
    others = [
        NodeConfig(HBV, nodes, h=0),
        NodeConfig(LUPAS, nodes, q=1),
        NodeConfig(RBV, nodes, weights=[1] * n),
    ]
    for config in others:
        assert dense_matrix(config) == ref
        assert reconstruct_sbd(sbd(config)) == ref


# --- splitting parameters --------------------------------------------------------------


def test_vandermonde_split_params():
    nodes = [F(1, 2), F(2), F(7, 3), F(4)]
    p = split_params(NodeConfig(VANDERMONDE, nodes))
    n = len(nodes)
    for i in range(n):
        for j in range(n):
            if i >= j:
                assert p.s_lower[i][j] == 1
            else:
                assert p.m_upper[i][j] == nodes[i]


def test_qbv_split_params_n2():
    x1, x2 = F(1, 5), F(3, 5)
    p = split_params(NodeConfig(QBV, [x1, x2], q=F(1, 2)))
    assert p.s_lower[0][0] == 1 - x1
    assert p.s_lower[1][0] == (1 - x2) / (1 - x1)
    assert p.s_lower[1][1] == 1 / (1 - x1)
    assert p.m_upper[0][1] == x1 / (1 - x1)


def test_cauchy_split_params_n2():
    x1, x2, d = F(1, 3), F(2), F(5, 4)
    p = split_params(NodeConfig(CAUCHY, [x1, x2], d=d, s=1))
    assert p.s_lower[0][0] == 1 / (x1 + d)
    assert p.s_lower[1][0] == (x1 + d) / (x2 + d)
    assert p.s_lower[1][1] == 1 / (x2 + d)
    assert p.m_upper[0][1] == x1 + d


@given(strict_configs())
def test_split_params_nonnegative_in_strict_mode(config):
    p = split_params(config)
    assert all(v >= 0 for row in p.s_lower + p.m_upper for v in row)


# --- direct SBD ------------------------------------------------------------------------


def test_sbd_vandermonde_symbolic_layout():
    x, y, z = F(1, 3), F(1, 2), F(5)
    store = sbd(NodeConfig(VANDERMONDE, [x, y, z]))
    assert store.B == ((1, x, x), (1, 1, y), (1, 1, 1))
    assert store.C == ((1, 1, 1, 1), (1, 1, 1, 1), (1, y - x, 1, 1), (1, z - y, z - x, 1))


def test_sbd_repeated_nodes_rank_one():
    store = sbd(NodeConfig(QBV, [F(1, 2), F(1, 2)], q=F(1, 2)))
    assert reconstruct_sbd(store) == [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]


@pytest.mark.parametrize("family", FAMILIES)
def test_sbd_n1(family):
    config = _example(family, [F(1, 3)])
    store = sbd(config)
    assert store.B == ((basis_eval(config, 1, F(1, 3)),),)
    assert store.C == ((1, 1), (1, 1))


@given(strict_configs(min_n=2))
def test_sbd_nonnegative_in_strict_mode(config):
    store = sbd(config)
    assert all(v >= 0 for row in store.B + store.C for v in row)


@given(strict_configs(min_n=2, max_n=6))
def test_sbd_matches_neville_oracle(config):
    assume(len(set(config.nodes)) == config.n)
    assert sbd(config) == split_bd(neville_bd(dense_matrix(config)), config.nodes)


@given(strict_configs(HBV, min_n=2, max_n=7), st.integers(1, 20))
def test_hbv_canonical_when_first_node_is_zero(config, hk):
    # x_1 = 0 makes the first dense row e_1; the SBD must still be the canonical one
    config = config.replace(nodes=(F(0),) + config.nodes[1:], h=F(hk, 10))
    assume(len(set(config.nodes)) == config.n)
    assert sbd(config) == split_bd(neville_bd(dense_matrix(config)), config.nodes)


@st.composite
def permissive_configs(draw):
    family = draw(st.sampled_from(FAMILIES))
    n = draw(st.integers(1, 6))
    pool = draw(st.lists(rationals(-1, 2, 12), min_size=1, max_size=n))
    nodes = [draw(st.sampled_from(pool)) for _ in range(n)]
    params = {
        QBV: lambda: {"q": draw(rationals(-2, 2, 6))},
        LUPAS: lambda: {"q": draw(rationals(-2, 2, 6))},
        HBV: lambda: {"h": draw(rationals(-1, 1, 6))},
        RBV: lambda: {"weights": [draw(rationals(-2, 3, 4)) for _ in range(n)]},
        CAUCHY: lambda: {"d": draw(rationals(-2, 3, 6)), "s": draw(st.integers(1, n))},
        VANDERMONDE: lambda: {},
    }[family]()
    return NodeConfig(family, nodes, strict=False, **params)


@given(permissive_configs())
def test_reconstruction_for_arbitrary_nodes(config):
    try:
        A = dense_matrix(config)
        store = sbd(config)
    except SingularFormula:
        assume(False)
    assert reconstruct_sbd(store) == A


@pytest.mark.parametrize("family", FAMILIES)
def test_sbd_binary64_tracks_rational(family):
    config = _example(family, [F(1, 8), F(1, 4), F(1, 2), F(5, 8)])
    exact, approx = sbd(config), sbd(config, BINARY64)
    for a, e in zip(approx.B + approx.C, exact.B + exact.C):
        for u, v in zip(a, e):
            assert isinstance(u, float)
            assert abs(F(u) - v) <= abs(v) * F(1, 10**12)


# --- validation -----------------------------------------------------------------------


def test_strict_mode_rejects_node_at_one():
    config = NodeConfig(QBV, [F(1, 2), F(1)], q=F(1, 2))
    with pytest.raises(DomainError, match=r"\[0, 1\)") as info:
        sbd(config)
    assert info.value.index == 2


def test_strict_mode_rejects_unsorted_nodes():
    with pytest.raises(DomainError):
        sbd(NodeConfig(VANDERMONDE, [F(2), F(1)]))


@pytest.mark.parametrize(
    "config",
    [
        NodeConfig(RBV, [F(0), F(1, 2)], weights=[1, 1]),
        NodeConfig(QBV, [F(0), F(1, 2)], q=F(3, 2)),
        NodeConfig(HBV, [F(0), F(1, 2)], h=F(-1, 4)),
        NodeConfig(RBV, [F(1, 4), F(1, 2)], weights=[1, 0]),
        NodeConfig(CAUCHY, [F(0), F(1, 2)], d=0, s=1),
        NodeConfig(LUPAS, [F(-1, 4), F(1, 2)], q=F(1, 2)),
    ],
)
def test_strict_mode_domains(config):
    with pytest.raises(DomainError):
        config.validate()
    config.replace(strict=False).validate()


def test_ties_accepted_in_strict_mode():
    NodeConfig(QBV, [F(1, 5), F(1, 5)], q=F(1, 2)).validate()


def test_config_parameter_checks():
    with pytest.raises(ValueError):
        NodeConfig(QBV, [F(1, 2)])
    with pytest.raises(ValueError):
        NodeConfig(CAUCHY, [F(1), F(2)], d=1, s=3)
    with pytest.raises(ValueError):
        NodeConfig(RBV, [F(1, 2)], weights=[1, 2])
    with pytest.raises(ValueError):
        NodeConfig("said_ball", [F(1, 2)])


# --- rational Bernstein weights ------------------------------------------------------------


def test_weight_sum_examples():
    ones = NodeConfig(RBV, [F(1, 3), F(1, 2), F(2, 3)], weights=[1, 1, 1])
    for x in (F(0), F(1, 7), F(1, 2), F(1)):
        assert weight_sum(ones, x) == 1
    w1, w2 = F(3), F(5, 2)
    two = NodeConfig(RBV, [F(1, 3), F(1, 2)], weights=[w1, w2])
    for x in (F(0), F(1, 7), F(2, 3)):
        assert weight_sum(two, x) == w1 * (1 - x) + w2 * x
    assert weight_sum(NodeConfig(RBV, [F(1, 4)] * 4, weights=[7, 1, 2, 3]), F(0)) == 7


def test_weight_sum_is_bernstein_combination():
    w = [F(1), F(3), F(1, 2), F(2)]
    config = NodeConfig(RBV, [F(1, 5), F(2, 5), F(3, 5), F(4, 5)], weights=w)
    x = F(2, 7)
    expected = sum(w[j] * comb(3, j) * x**j * (1 - x) ** (3 - j) for j in range(4))
    assert weight_sum(config, x) == expected


def test_rbv_scaled_unit_weights_is_bernstein_sequence():
    nodes = [F(1, 5), F(1, 3), F(3, 4)]
    scaled = sbd_rbv_scaled(NodeConfig(RBV, nodes, weights=[1, 1, 1]))
    assert scaled == sbd_expand(sbd(NodeConfig(QBV, nodes, q=1)))


def test_rbv_scaled_small_case():
    config = NodeConfig(RBV, [F(1, 4), F(1, 2)], weights=[1, 2])
    assert reconstruct(sbd_rbv_scaled(config)) == dense_matrix(config)


@given(strict_configs(RBV, max_n=6))
def test_rbv_scaled_reconstructs_and_scales_every_row(config):
    fs = sbd_rbv_scaled(config)
    assert reconstruct(fs) == dense_matrix(config)
    if config.n > 1:
        first = fs.factors[0]
        plain = sbd_expand(sbd(NodeConfig(QBV, config.nodes, q=1))).factors[0]
        for i, x in enumerate(config.nodes):
            assert first.diag[i] == plain.diag[i] / weight_sum(config, x)


def _example(family, nodes):
    n = len(nodes)
    params = {
        VANDERMONDE: {},
        QBV: {"q": F(1, 2)},
        HBV: {"h": F(1, 10)},
        LUPAS: {"q": F(2, 3)},
        RBV: {"weights": [F(k + 1, 2) for k in range(n)]},
        CAUCHY: {"d": F(3, 2), "s": 1},
    }[family]
    return NodeConfig(family, nodes, **params)
