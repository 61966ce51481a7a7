import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphschro.campaigns import FOUR_CYCLE_B, TWO_HUB_B, four_cycle_graph, path_graph, two_hub_graph, random_connected_matrix
from graphschro.errors import NotMaximal
from graphschro.extension import decompose, extend_once, maximal_extension
from graphschro.graph_model import validate_finite_graph


def path(n):
    return validate_finite_graph(2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1))


def random_graph(seed, n_max=10):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, n_max + 1))
    g = validate_finite_graph(random_connected_matrix(rng, n, p_extra=float(rng.uniform(0, 0.5))))
    B = frozenset(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist())
    return g, B, rng


def test_extend_once_path():
    assert extend_once(path(3), {0}) == (0, 1)


def test_extend_once_four_cycle_is_maximal():
    assert extend_once(four_cycle_graph(1.0, 2.0), FOUR_CYCLE_B) is None


def test_extend_once_everything():
    assert extend_once(path(4), range(4)) is None


def test_path_endpoint_fills_path():
    res = maximal_extension(path(4), {0})
    assert res.closure == frozenset(range(4))
    assert res.chain == (1, 2, 3)


def test_path_fills_graph():
    g, B = path_graph()
    assert maximal_extension(g, B).closure == frozenset(range(g.n))


def test_two_hub_hubs_are_maximal():
    assert maximal_extension(two_hub_graph(), TWO_HUB_B).closure == TWO_HUB_B


def test_chain_replays_to_closure():
    g, B, _ = random_graph(5)
    res = maximal_extension(g, B)
    current = set(B)
    for beta, alpha in res.steps:
        assert beta in current and alpha not in current
        outside = [v for v in g.neighbors(beta) if v not in current]
        assert outside == [alpha]
        current.add(alpha)
    assert frozenset(current) == res.closure
    assert extend_once(g, current) is None


def test_decompose_two_hub():
    dec = decompose(two_hub_graph(), TWO_HUB_B)
    assert len(dec.branches) == 7 and len(dec.clusters) == 2
    orders = dict(zip((min(b) for b in dec.branches), dec.orders))
    assert orders.pop(2) == 1  # alpha
    assert set(orders.values()) == {0}


def test_decompose_four_cycle():
    dec = decompose(four_cycle_graph(1.0, 2.0), FOUR_CYCLE_B)
    assert dec.branches == (frozenset({1}), frozenset({3}))
    assert dec.clusters == {0: frozenset({1, 3}), 2: frozenset({1, 3})}
    assert dec.orders == (1, 1)


def test_decompose_everything():
    dec = decompose(path(3), range(3))
    assert dec.branches == () and dec.clusters == {}


def test_decompose_requires_maximal():
    with pytest.raises(NotMaximal):
        decompose(path(3), {0})


def test_disconnected_graph_accepted():
    g = validate_finite_graph(np.diag([1.0, 2.0, 3.0]))
    assert maximal_extension(g, {0}).closure == {0}
    dec = decompose(g, {0})
    assert len(dec.branches) == 2 and dec.clusters == {}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_confluence_under_random_orders(seed):
    g, B, rng = random_graph(seed)
    closures = {maximal_extension(g, B, order_seed=int(rng.integers(2**31))).closure for _ in range(20)}
    assert closures == {maximal_extension(g, B).closure}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_idempotent_and_monotone(seed):
    g, B, rng = random_graph(seed)
    closure = maximal_extension(g, B).closure
    assert B <= closure
    assert maximal_extension(g, closure).closure == closure
    extra = frozenset(rng.choice(g.n, size=int(rng.integers(0, g.n + 1)), replace=False).tolist())
    assert closure <= maximal_extension(g, B | extra).closure


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_branch_cluster_consistency(seed):
    g, B, _ = random_graph(seed)
    closure = maximal_extension(g, B).closure
    dec = decompose(g, closure)
    outside = set(range(g.n)) - closure
    assert set().union(*dec.branches) == outside if dec.branches else not outside
    assert sum(len(b) for b in dec.branches) == len(outside)
    for beta, members in dec.clusters.items():
        touching = [b for b in dec.branches if any(g.L[beta, v] != 0 for v in b)]
        assert members == frozenset().union(*touching)
    if not closure:
        return  # no roots, hence no clusters
    counted = sum(len(c) for c in dec.clusters.values())
    assert counted >= len(outside)
    assert (counted == len(outside)) == all(o == 0 for o in dec.orders)
