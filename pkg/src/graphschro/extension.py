"""Subgraph extension ``B -> [B]`` and the branch/cluster decomposition.

A vertex ``beta`` in ``B`` with exactly one neighbour ``alpha`` outside ``B``
lets us add ``alpha``.  Repeating until no such ``beta`` exists gives the
maximal extension ``[B]``, which does not depend on the order of the steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import NotMaximal
from .graph_model import FiniteGraph


@dataclass(frozen=True)
class ExtensionResult:
    closure: frozenset
    chain: tuple  # vertices in the order they were added
    steps: tuple  # (beta, alpha) pairs that produced ``chain``


@dataclass(frozen=True)
class ClusterDecomposition:
    """Branches of ``F \\ [B]`` and the clusters ``(beta)`` they form.

    ``clusters`` maps each ``beta`` in ``[B]`` with a nonempty cluster to the
    set of vertices of the branches touching ``beta``.  ``cluster_branches``
    gives the same information as indices into ``branches``.  ``orders[i]``
    is the number of clusters containing ``branches[i]`` minus one.
    """

    branches: tuple
    clusters: dict
    cluster_branches: dict
    orders: tuple

    @property
    def outside(self) -> frozenset:
        return frozenset().union(*self.branches) if self.branches else frozenset()


def _check_subset(g: FiniteGraph, B) -> frozenset:
    B = frozenset(int(b) for b in B)
    bad = [b for b in B if not 0 <= b < g.n]
    if bad:
        raise ValueError(f"vertices {sorted(bad)} not in graph of size {g.n}")
    return B


def _eligible(adj: np.ndarray, inside: np.ndarray, beta: int) -> Optional[int]:
    outside_nbrs = np.flatnonzero(adj[beta] & ~inside)
    if len(outside_nbrs) == 1:
        return int(outside_nbrs[0])
    return None


def extend_once(g: FiniteGraph, B: Iterable[int]) -> Optional[tuple[int, int]]:
    """One extension step: smallest ``beta`` in ``B`` with a unique outside neighbour.

    Returns ``(beta, alpha)`` or ``None`` when ``B`` is maximal.
    """
    B = _check_subset(g, B)
    adj = g.adjacency
    inside = np.zeros(g.n, dtype=bool)
    inside[list(B)] = True
    for beta in sorted(B):
        alpha = _eligible(adj, inside, beta)
        if alpha is not None:
            return beta, alpha
    return None


def maximal_extension(g: FiniteGraph, B: Iterable[int], order_seed: Optional[int] = None) -> ExtensionResult:
    """Iterate single extension steps until none applies.

    Without ``order_seed`` the smallest eligible ``beta`` is used at every
    step.  With a seed, vertices are ranked by a random permutation and the
    highest ranked eligible ``beta`` goes first; eligibility is recomputed
    after every addition either way.
    """
    B = _check_subset(g, B)
    adj = g.adjacency
    inside = np.zeros(g.n, dtype=bool)
    inside[list(B)] = True
    if order_seed is None:
        priority = np.arange(g.n)
    else:
        priority = np.random.default_rng(order_seed).permutation(g.n)
    rank = np.argsort(priority)  # rank[v] = position of v in the permutation

    chain, steps = [], []
    while True:
        members = sorted(np.flatnonzero(inside), key=lambda v: rank[v])
        for beta in members:
            alpha = _eligible(adj, inside, beta)
            if alpha is not None:
                break
        else:
            break
        inside[alpha] = True
        chain.append(alpha)
        steps.append((int(beta), alpha))
    return ExtensionResult(frozenset(np.flatnonzero(inside).tolist()), tuple(chain), tuple(steps))


def is_maximal(g: FiniteGraph, B: Iterable[int]) -> bool:
    return extend_once(g, B) is None


def decompose(g: FiniteGraph, closure: Iterable[int]) -> ClusterDecomposition:
    closure = _check_subset(g, closure)
    if not is_maximal(g, closure):
        raise NotMaximal("decompose needs a maximal set; call maximal_extension first")
    outside = np.array(sorted(set(range(g.n)) - closure), dtype=int)
    if len(outside) == 0:
        return ClusterDecomposition((), {}, {}, ())

    adj = g.adjacency
    _, labels = connected_components(adj[np.ix_(outside, outside)], directed=False)
    groups: dict[int, list[int]] = {}
    for v, lab in zip(outside.tolist(), labels.tolist()):
        groups.setdefault(lab, []).append(v)
    branches = sorted((frozenset(vs) for vs in groups.values()), key=min)
    branch_of = {v: i for i, br in enumerate(branches) for v in br}

    clusters, cluster_branches = {}, {}
    membership = [0] * len(branches)
    for beta in sorted(closure):
        touched = sorted({branch_of[int(a)] for a in np.flatnonzero(adj[beta]) if int(a) in branch_of})
        if not touched:
            continue
        cluster_branches[beta] = tuple(touched)
        clusters[beta] = frozenset().union(*(branches[i] for i in touched))
        for i in touched:
            membership[i] += 1
    # a branch in no cluster only occurs on disconnected graphs; its order is taken as 0
    orders = tuple(max(m - 1, 0) for m in membership)
    return ClusterDecomposition(tuple(branches), clusters, cluster_branches, orders)
