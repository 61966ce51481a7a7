"""Dimension of the space of solutions vanishing on a vertex subset.

For a finite graph with interaction matrix ``L`` and a subset ``B``, ``V_B``
is the space of solutions ``u(t) = exp(itL) u(0)`` with ``u(t, beta) = 0`` for
``beta`` in ``B`` and all ``t`` in ``[0, 1]``.  Two independent routes compute
its dimension:

* :func:`exact_dimension` extends ``B`` to ``[B]``, splits the rest of the
  graph into clusters and intersects the kernels of the per-cluster
  constraint matrices;
* :func:`oracle_dimension` uses the full spectrum of ``L`` and ``B`` itself:
  ``u(t, beta)`` vanishes on an interval iff every frequency component
  ``(P_m u(0))(beta)`` does.

:func:`dimension_bounds` gives the lower/upper estimates in terms of the
numbers of distinct eigenvalues on clusters and branches.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .errors import EmptyCluster, InvalidSeed
from .extension import ClusterDecomposition, decompose, maximal_extension
from .graph_model import FiniteGraph, WebGraph
from .spectral import (
    DEFAULT_GROUP_TOL,
    DEFAULT_KERNEL_TOL,
    SpectralData,
    kernel,
    numerical_rank,
    spectral_projector,
    symmetric_eig,
)

log = logging.getLogger(__name__)


class RankDeficiencyWarning(UserWarning):
    """A cluster constraint matrix has rank below its number of distinct eigenvalues."""


@dataclass(frozen=True)
class Census:
    cluster_roots: tuple
    cluster_vertices: tuple
    K: tuple  # distinct eigenvalues of L restricted to each cluster
    branches: tuple
    N: tuple  # distinct eigenvalues of L restricted to each branch
    orders: tuple

    def to_dict(self) -> dict:
        return {
            "clusters": [
                {"root": int(r), "vertices": sorted(int(v) for v in vs), "K": int(k)}
                for r, vs, k in zip(self.cluster_roots, self.cluster_vertices, self.K)
            ],
            "branches": [
                {"vertices": sorted(int(v) for v in br), "N": int(n), "order": int(o)}
                for br, n, o in zip(self.branches, self.N, self.orders)
            ],
        }


@dataclass(frozen=True)
class DimensionReport:
    closure: frozenset
    lower: int
    upper: int
    exact: int
    oracle: int
    census: Census
    tol: float
    kernel_tol: float

    @property
    def match(self) -> bool:
        return self.exact == self.oracle

    @property
    def sandwiched(self) -> bool:
        return self.lower <= self.oracle <= self.upper

    def to_dict(self) -> dict:
        return {
            "closure": sorted(int(v) for v in self.closure),
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "oracle": self.oracle,
            "match": self.match,
            "sandwiched": self.sandwiched,
            "census": self.census.to_dict(),
            "tol_group": self.tol,
            "tol_kernel": self.kernel_tol,
        }


def _restricted_spectrum(g: FiniteGraph, vertices, tol: float) -> SpectralData:
    return symmetric_eig(g.restrict(vertices), tol)


def cluster_constraint_matrix(
    g: FiniteGraph,
    beta: int,
    cluster: Iterable[int],
    spec: Optional[SpectralData] = None,
    tol: float = DEFAULT_GROUP_TOL,
    kernel_tol: float = DEFAULT_KERNEL_TOL,
) -> np.ndarray:
    """Constraint matrix ``A_beta`` of one cluster, shape ``(K, len(cluster))``.

    Columns follow ``sorted(cluster)``.  Row ``m`` maps ``u(0)`` to the
    coefficient of ``exp(i t mu_m)`` in ``sum_j L(beta, j) u(t, j)``, i.e.
    ``sum_{s in group m} (sum_j L(beta, j) p_s(j)) p_s^T``.  ``spec`` is the
    eigen-decomposition of ``L`` restricted to the cluster; any orthonormal
    eigenbasis gives the same matrix.
    """
    verts = sorted(int(v) for v in cluster)
    if not verts:
        raise EmptyCluster(f"cluster of {beta} is empty")
    if spec is None:
        spec = _restricted_spectrum(g, verts, tol)
    coupling = g.L[beta, verts]
    P = spec.eigenvectors
    A = np.zeros((spec.n_distinct, len(verts)))
    for m, grp in enumerate(spec.groups):
        for s in grp:
            A[m] += (coupling @ P[:, s]) * P[:, s]
    if numerical_rank(A, kernel_tol) < spec.n_distinct:
        warnings.warn(
            f"A_beta for beta={beta} has rank {numerical_rank(A, kernel_tol)} < K={spec.n_distinct}",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    return A


def _census(g: FiniteGraph, dec: ClusterDecomposition, tol: float) -> Census:
    roots = tuple(sorted(dec.clusters))
    K = tuple(_restricted_spectrum(g, dec.clusters[r], tol).n_distinct for r in roots)
    N = tuple(_restricted_spectrum(g, br, tol).n_distinct for br in dec.branches)
    return Census(roots, tuple(dec.clusters[r] for r in roots), K, dec.branches, N, dec.orders)


def dimension_bounds(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL) -> tuple[int, int, Census]:
    """Lower and upper bounds on ``dim V_B`` from cluster/branch eigenvalue counts.

    ``lower = #(F \\ [B]) - sum K_i`` and
    ``upper = #(F \\ [B]) + sum ord(gamma_i) N_i - sum K_i``.
    """
    closure = maximal_extension(g, B).closure
    dec = decompose(g, closure)
    census = _census(g, dec, tol)
    n_out = g.n - len(closure)
    lower = n_out - sum(census.K)
    upper = n_out + sum(o * n for o, n in zip(census.orders, census.N)) - sum(census.K)
    return lower, upper, census


def constraint_stack(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL):
    """Stacked cluster constraints over the coordinates of ``F \\ [B]``.

    Returns ``(stack, outside)`` where ``outside`` lists the column vertices.
    Vertices outside every cluster get no rows and stay unconstrained.
    """
    closure = maximal_extension(g, B).closure
    dec = decompose(g, closure)
    outside = sorted(set(range(g.n)) - closure)
    col = {v: i for i, v in enumerate(outside)}
    blocks = []
    with warnings.catch_warnings():
        # rank deficiency is legitimate on degenerate inputs; the stack handles it
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        for beta in sorted(dec.clusters):
            verts = sorted(dec.clusters[beta])
            A = cluster_constraint_matrix(g, beta, verts, tol=tol, kernel_tol=kernel_tol)
            block = np.zeros((A.shape[0], len(outside)))
            block[:, [col[v] for v in verts]] = A
            blocks.append(block)
    stack = np.vstack(blocks) if blocks else np.zeros((0, len(outside)))
    return stack, outside


def exact_dimension(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL) -> int:
    stack, _ = constraint_stack(g, B, tol, kernel_tol)
    return kernel(stack, kernel_tol)[0]


def exact_solution_basis(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL) -> np.ndarray:
    """Initial data spanning ``V_B`` from the cluster route, shape ``(n, dim)``; zero on ``[B]``."""
    stack, outside = constraint_stack(g, B, tol, kernel_tol)
    _, basis = kernel(stack, kernel_tol)
    full = np.zeros((g.n, basis.shape[1]))
    full[outside] = basis
    return full


def oracle_stack(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL) -> np.ndarray:
    """Rows ``e_beta^T P_m`` for ``beta`` in ``B`` and every distinct eigenvalue group ``m`` of ``L``."""
    B = sorted(int(b) for b in B)
    spec = symmetric_eig(g.L, tol)
    if not B:
        return np.zeros((0, g.n))
    projs = [spectral_projector(spec, m) for m in range(spec.n_distinct)]
    return np.vstack([P[B] for P in projs])


def oracle_dimension(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL) -> int:
    return kernel(oracle_stack(g, B, tol), kernel_tol)[0]


def oracle_solution_basis(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL) -> np.ndarray:
    return kernel(oracle_stack(g, B, tol), kernel_tol)[1]


def dimension_report(g: FiniteGraph, B: Iterable[int], tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL) -> DimensionReport:
    B = frozenset(int(b) for b in B)
    lower, upper, census = dimension_bounds(g, B, tol)
    closure = maximal_extension(g, B).closure
    exact = exact_dimension(g, B, tol, kernel_tol)
    oracle = oracle_dimension(g, B, tol, kernel_tol)
    report = DimensionReport(closure, lower, upper, exact, oracle, census, tol, kernel_tol)
    if not report.match:
        log.error("cluster route gives %d but oracle gives %d for B=%s", exact, oracle, sorted(B))
    return report


# --- zero propagation on web graphs -------------------------------------------------


@dataclass(frozen=True)
class ForcedZero:
    """Vertices on which every solution vanishing on the seed must vanish.

    For a web graph ``finite`` indexes the finite part: core vertices
    ``0..M-1`` followed by ``nu(1)`` of channel ``c`` at ``M + c``.
    ``channels`` holds the channels forced to vanish entirely.
    """

    finite: frozenset
    channels: frozenset = frozenset()
    n_finite: int = 0
    n_channels: int = 0

    @property
    def everything(self) -> bool:
        return len(self.finite) == self.n_finite and len(self.channels) == self.n_channels


def forced_zero_set(
    graph: Union[FiniteGraph, WebGraph],
    B: Iterable[int],
    channel_zeros: Iterable[int] = (),
) -> ForcedZero:
    """Propagate known zeros through extension and channel recursion.

    On a web graph the seed is ``B`` plus ``{nu(0), nu(1)}`` for each channel
    in ``channel_zeros``.  A seed vertex ``nu(1)`` whose ``nu(0)`` is not in
    the seed is dropped, since ``nu(1)`` also couples to ``nu(2)`` outside the
    finite part.  After extending, a channel with both ``nu(0)`` and ``nu(1)``
    forced to zero vanishes entirely (forward recursion along the channel).
    """
    B = {int(b) for b in B}
    if isinstance(graph, FiniteGraph):
        if channel_zeros:
            raise InvalidSeed("a finite graph has no channels")
        if any(not 0 <= b < graph.n for b in B):
            raise InvalidSeed(f"seed {sorted(B)} outside 0..{graph.n - 1}")
        closure = maximal_extension(graph, B).closure
        return ForcedZero(closure, frozenset(), graph.n, 0)

    F, first = graph.finite_part()
    bad = [b for b in B if not 0 <= b < F.n]
    if bad:
        raise InvalidSeed(f"seed vertices {sorted(bad)} are not in the finite part (size {F.n})")
    zeros = {int(c) for c in channel_zeros}
    if any(not 0 <= c < len(graph.channels) for c in zeros):
        raise InvalidSeed(f"unknown channel in {sorted(zeros)}")

    seed = set(B)
    for c in zeros:
        seed |= {graph.channels[c].attach, first[c]}
    for c, ch in enumerate(graph.channels):
        if first[c] in seed and ch.attach not in seed:
            seed.discard(first[c])

    closure = maximal_extension(F, seed).closure
    dead = frozenset(
        c for c, ch in enumerate(graph.channels) if ch.attach in closure and first[c] in closure
    ) | frozenset(zeros)
    return ForcedZero(closure, dead, F.n, len(graph.channels))
