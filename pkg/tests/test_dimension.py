import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import unobservable_dimension
from graphschro.campaigns import (
    FOUR_CYCLE_B,
    TWO_HUB_B,
    four_cycle_graph,
    two_hub_graph,
    forced_zero_web,
    random_instance,
)
from graphschro.dimension import (
    RankDeficiencyWarning,
    cluster_constraint_matrix,
    dimension_bounds,
    dimension_report,
    exact_dimension,
    exact_solution_basis,
    forced_zero_set,
    oracle_dimension,
    oracle_solution_basis,
)
from graphschro.errors import EmptyCluster, InvalidSeed
from graphschro.evolution import Propagator
from graphschro.extension import maximal_extension
from graphschro.graph_model import validate_finite_graph
from graphschro.spectral import symmetric_eig, with_basis

GRID = np.linspace(0.0, 1.0, 11)


def degenerate_instance(seed):
    """Small integer-weighted graph: repeated eigenvalues and rank-deficient clusters are common."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    L = np.diag(rng.integers(0, 3, n).astype(float))
    order = rng.permutation(n)
    for idx in range(1, n):
        i, j = order[idx], order[rng.integers(idx)]
        L[i, j] = L[j, i] = -1.0
    for i in range(n):
        for j in range(i + 1, n):
            if L[i, j] == 0 and rng.random() < 0.3:
                L[i, j] = L[j, i] = -1.0
    B = frozenset(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist())
    return validate_finite_graph(L), B


# --- cluster constraint matrices ------------------------------------------------


def test_constraint_matrix_single_vertex():
    g = validate_finite_graph([[1.0, 0.7], [0.7, 4.0]])
    A = cluster_constraint_matrix(g, 0, [1])
    np.testing.assert_allclose(A, [[0.7]])


def test_constraint_matrix_four_cycle_equal_diagonals():
    g = four_cycle_graph(1.0, 1.0, (2.0, 3.0, 5.0, 7.0))
    A = cluster_constraint_matrix(g, 0, [1, 3])
    np.testing.assert_allclose(A, [[2.0, 3.0]])


def test_constraint_matrix_four_cycle_distinct_diagonals():
    g = four_cycle_graph(1.0, 2.0, (2.0, 3.0, 5.0, 7.0))
    A = cluster_constraint_matrix(g, 0, [1, 3])
    np.testing.assert_allclose(A, [[2.0, 0.0], [0.0, 3.0]], atol=1e-14)


def test_constraint_matrix_empty_cluster():
    with pytest.raises(EmptyCluster):
        cluster_constraint_matrix(four_cycle_graph(1.0, 2.0), 0, [])


def test_constraint_matrix_basis_independent():
    # cluster restriction diag(1, 1): any rotation is an eigenbasis
    g = four_cycle_graph(1.0, 1.0, (2.0, 3.0, 5.0, 7.0))
    spec = symmetric_eig(g.restrict([1, 3]))
    c, s = np.cos(0.3), np.sin(0.3)
    rotated = with_basis(spec, np.array([[c, -s], [s, c]]))
    np.testing.assert_allclose(
        cluster_constraint_matrix(g, 0, [1, 3], spec=rotated), cluster_constraint_matrix(g, 0, [1, 3], spec=spec)
    )


# --- worked examples ---------------------------------------------------------------


def test_bounds_two_hub():
    lower, upper, census = dimension_bounds(two_hub_graph(), TWO_HUB_B)
    assert (lower, upper) == (-1, 0)
    assert census.K == (5, 3)


@pytest.mark.parametrize(
    "d2, couplings, bounds, dim",
    [
        (2.0, (1.0, 2.0, 3.0, 4.0), (-2, 0), 0),
        (1.0, (1.0, 2.0, 3.0, 5.0), (0, 2), 0),
        (1.0, (1.0, 1.0, 1.0, 1.0), (0, 2), 1),
    ],
)
def test_four_cycle(d2, couplings, bounds, dim):
    g = four_cycle_graph(1.0, d2, couplings)
    lower, upper, _ = dimension_bounds(g, FOUR_CYCLE_B)
    assert (lower, upper) == bounds
    assert exact_dimension(g, FOUR_CYCLE_B) == dim
    assert oracle_dimension(g, FOUR_CYCLE_B) == dim


def test_empty_seed_gives_full_space():
    g = two_hub_graph()
    assert exact_dimension(g, set()) == g.n
    assert oracle_dimension(g, set()) == g.n


def test_all_vertices_distinct_spectrum():
    g = two_hub_graph()
    assert symmetric_eig(g.L).n_distinct == g.n
    assert oracle_dimension(g, range(g.n)) == 0


def test_report_fields():
    rep = dimension_report(four_cycle_graph(1.0, 1.0, (1.0, 1.0, 1.0, 1.0)), FOUR_CYCLE_B)
    assert rep.match and rep.sandwiched
    d = rep.to_dict()
    assert d["exact"] == d["oracle"] == 1 and d["tol_group"] == 1e-8


def test_upper_bound_needs_generic_couplings():
    # beta=0 touches y=1 and w=4; branch x=2 - y=1 - z=3 has equal diagonals, so the
    # eigenvector (1, 0, -1) on (x, y, z) never reaches beta and the cluster matrix loses rank
    L = np.diag([5.0, 1.0, 1.0, 1.0, 3.0])
    for i, j in [(0, 1), (0, 4), (1, 2), (1, 3)]:
        L[i, j] = L[j, i] = -1.0
    g = validate_finite_graph(L)
    lower, upper, _ = dimension_bounds(g, {0})
    with pytest.warns(RankDeficiencyWarning):
        cluster_constraint_matrix(g, 0, [1, 2, 3, 4])
    assert (lower, upper) == (0, 0)
    assert exact_dimension(g, {0}) == oracle_dimension(g, {0}) == unobservable_dimension(L, {0}) == 1


# --- properties ---------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_routes_agree_with_kalman_oracle_generic(seed):
    g, B = random_instance(np.random.default_rng(seed))
    rep = dimension_report(g, B)
    assert rep.exact == rep.oracle == unobservable_dimension(g.L, B)
    assert rep.lower <= rep.oracle <= rep.upper
    assert 0 <= rep.oracle <= g.n - len(rep.closure)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_routes_agree_with_kalman_oracle_degenerate(seed):
    g, B = degenerate_instance(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        exact = exact_dimension(g, B)
    assert exact == oracle_dimension(g, B) == unobservable_dimension(g.L, B)
    lower, _, _ = dimension_bounds(g, B)
    assert lower <= exact


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closure_insensitive_and_monotone(seed):
    rng = np.random.default_rng(seed)
    g, B = random_instance(rng)
    closure = maximal_extension(g, B).closure
    assert oracle_dimension(g, B) == oracle_dimension(g, closure)
    bigger = B | frozenset(rng.choice(g.n, size=int(rng.integers(0, g.n + 1)), replace=False).tolist())
    assert oracle_dimension(g, B) >= oracle_dimension(g, bigger)


def test_basis_independence_on_degenerate_spectrum():
    g = four_cycle_graph(1.0, 1.0, (1.0, 1.0, 1.0, 1.0))
    spec = symmetric_eig(g.L)
    rng = np.random.default_rng(0)
    P = spec.eigenvectors.copy()
    for grp in spec.groups:
        idx = list(grp)
        Q, _ = np.linalg.qr(rng.normal(size=(len(idx), len(idx))))
        P[:, idx] = P[:, idx] @ Q
    from graphschro.spectral import spectral_projector

    rotated = with_basis(spec, P)
    for m in range(spec.n_distinct):
        np.testing.assert_allclose(spectral_projector(rotated, m), spectral_projector(spec, m), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_solution_bases_vanish_on_closure(seed):
    g, B = degenerate_instance(seed)
    closure = sorted(maximal_extension(g, B).closure)
    prop = Propagator(g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        bases = [oracle_solution_basis(g, B), exact_solution_basis(g, B)]
    for basis in bases:
        for t in GRID:
            if basis.shape[1] and closure:
                assert np.max(np.abs(prop(basis, t)[closure])) <= 1e-8


# --- forced zeros -------------------------------------------------------------------


def test_forced_zero_from_two_channel_sites():
    web = forced_zero_web()
    fz = forced_zero_set(web, {0, web.M + 0})
    assert fz.everything


def test_forced_zero_from_vanishing_channels():
    fz = forced_zero_set(forced_zero_web(), set(), channel_zeros={1})
    assert fz.everything and fz.channels == {0, 1}


def test_forced_zero_empty():
    fz = forced_zero_set(forced_zero_web(), set())
    assert fz.finite == frozenset() and fz.channels == frozenset()


def test_forced_zero_prunes_lonely_first_site():
    # nu(1) alone says nothing about nu(0): it also couples to nu(2)
    web = forced_zero_web()
    fz = forced_zero_set(web, {web.M + 0})
    assert fz.finite == frozenset() and not fz.everything


def test_forced_zero_finite_graph():
    g = four_cycle_graph(1.0, 2.0)
    assert forced_zero_set(g, FOUR_CYCLE_B).finite == FOUR_CYCLE_B


def test_forced_zero_invalid_seed():
    with pytest.raises(InvalidSeed):
        forced_zero_set(forced_zero_web(), {99})
