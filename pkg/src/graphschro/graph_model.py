"""Finite graphs, channel specifications and web graphs.

A finite graph is a real symmetric interaction matrix ``L``; two distinct
vertices are adjacent when their entry is nonzero.  A web graph is a finite
core with semi-infinite channels hanging off core vertices.  Channels are
described by their on-site values ``a(1..K0)`` and link weights
``b(0..K0-1)``; past ``K0`` they are free (``a = 2``, ``b = 1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import NonSquare, NonSymmetric, TruncationTooShort, ZeroCoefficient


@dataclass(frozen=True)
class FiniteGraph:
    """Validated symmetric real interaction matrix.

    Use :func:`validate_finite_graph` to build one; the constructor assumes
    its input has already been checked.
    """

    L: np.ndarray
    labels: Optional[tuple] = None

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        A = self.L != 0
        np.fill_diagonal(A, False)
        return A

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[v])

    @property
    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def n_components(self) -> int:
        if self.n == 0:
            return 0
        return connected_components(self.adjacency, directed=False)[0]

    @property
    def is_connected(self) -> bool:
        return self.n_components <= 1

    def is_positive(self, tol: float = 0.0) -> bool:
        """Diagnostic only: whether ``L`` is positive definite."""
        if self.n == 0:
            return True
        return bool(np.linalg.eigvalsh(self.L)[0] > tol)

    def restrict(self, vertices) -> np.ndarray:
        idx = np.asarray(sorted(vertices), dtype=int)
        return self.L[np.ix_(idx, idx)]


def validate_finite_graph(matrix, labels=None, symmetrize: bool = False) -> FiniteGraph:
    """Check ``matrix`` and wrap it as a :class:`FiniteGraph`.

    Symmetry is required exactly; pass ``symmetrize=True`` to replace the
    input by ``(L + L.T) / 2`` instead of raising.
    """
    L = np.array(matrix, dtype=float)
    if L.ndim == 0:
        L = L.reshape(1, 1)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise NonSquare(f"interaction matrix must be square, got shape {L.shape}")
    if symmetrize:
        L = 0.5 * (L + L.T)
    defect = float(np.max(np.abs(L - L.T))) if L.size else 0.0
    if defect > 0:
        raise NonSymmetric(f"max |L(a,b) - L(b,a)| = {defect:g}")
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != L.shape[0]:
            raise ValueError("labels must match the number of vertices")
    L.setflags(write=False)
    return FiniteGraph(L, labels)


def _as_exact(x):
    # keep ints/Fractions exact for the Jost recurrence
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, Real):
        return float(x)
    raise TypeError(f"channel coefficients must be real, got {x!r}")


@dataclass(frozen=True)
class ChannelSpec:
    """One semi-infinite channel ``nu(0), nu(1), ...`` attached at core vertex ``attach``.

    ``a[k-1]`` holds ``a(k)`` for ``1 <= k <= K0`` and ``b[k]`` holds ``b(k)``
    for ``0 <= k < K0``.  Shorter sequences are padded with the free values.
    """

    attach: int
    K0: int = 0
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        if self.K0 < 0:
            raise ValueError("K0 must be >= 0")
        a = [_as_exact(x) for x in self.a]
        b = [_as_exact(x) for x in self.b]
        if len(a) > self.K0 or len(b) > self.K0:
            raise ValueError(
                f"channel at {self.attach}: got {len(a)} a-values and {len(b)} b-values for K0={self.K0}"
            )
        a += [Fraction(2)] * (self.K0 - len(a))
        b += [Fraction(1)] * (self.K0 - len(b))
        if any(x == 0 for x in b):
            raise ZeroCoefficient(f"channel at {self.attach} has a zero link weight b")
        object.__setattr__(self, "a", tuple(a))
        object.__setattr__(self, "b", tuple(b))

    @classmethod
    def from_sequences(cls, attach: int, a: Sequence = (), b: Sequence = (), K0: Optional[int] = None):
        if K0 is None:
            K0 = max(len(a), len(b))
        return cls(attach=attach, K0=K0, a=tuple(a), b=tuple(b))

    def a_at(self, k: int):
        if k < 1:
            raise IndexError("a(k) is defined for k >= 1")
        return self.a[k - 1] if k <= self.K0 else Fraction(2)

    def b_at(self, k: int):
        if k < 0:
            raise IndexError("b(k) is defined for k >= 0")
        return self.b[k] if k < self.K0 else Fraction(1)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.a + self.b)


@dataclass(frozen=True)
class WebGraph:
    core: FiniteGraph
    channels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        for ch in self.channels:
            if not 0 <= ch.attach < self.core.n:
                raise ValueError(f"channel attach vertex {ch.attach} outside core of size {self.core.n}")

    @property
    def M(self) -> int:
        return self.core.n

    @property
    def K0(self) -> int:
        return max((ch.K0 for ch in self.channels), default=0)

    def finite_part(self) -> tuple[FiniteGraph, dict]:
        """Core plus the first vertex ``nu(1)`` of every channel.

        Returns the graph and a map ``channel index -> row of nu(1)``.
        """
        return truncate(self, 1, _check=False)[0], {
            c: self.M + c for c in range(len(self.channels))
        }


@dataclass(frozen=True)
class IndexMap:
    """Row bookkeeping of a truncated web graph."""

    M: int
    N: int
    n_channels: int

    def row(self, channel: int, k: int) -> int:
        """Row index of ``nu(k)``, ``1 <= k <= N`` (``k = 0`` is the attach vertex)."""
        if not 1 <= k <= self.N:
            raise IndexError(f"channel index k={k} outside 1..{self.N}")
        return self.M + channel * self.N + (k - 1)

    def channel_rows(self, channel: int) -> np.ndarray:
        start = self.M + channel * self.N
        return np.arange(start, start + self.N)

    def locate(self, row: int):
        """Inverse of :meth:`row`: ``('core', i)`` or ``('channel', c, k)``."""
        if row < self.M:
            return ("core", row)
        c, r = divmod(row - self.M, self.N)
        if c >= self.n_channels:
            raise IndexError(row)
        return ("channel", c, r + 1)

    @property
    def size(self) -> int:
        return self.M + self.n_channels * self.N


def truncate(web: WebGraph, N: int, _check: bool = True) -> tuple[FiniteGraph, IndexMap]:
    """Finite realization keeping channel vertices ``nu(1..N)``."""
    if _check:
        for c, ch in enumerate(web.channels):
            if N < ch.K0 + 1:
                raise TruncationTooShort(f"channel {c}: N={N} < K0+1={ch.K0 + 1}")
    if N < 1:
        raise TruncationTooShort("N must be >= 1")
    imap = IndexMap(web.M, N, len(web.channels))
    L = np.zeros((imap.size, imap.size))
    L[: web.M, : web.M] = web.core.L
    for c, ch in enumerate(web.channels):
        rows = imap.channel_rows(c)
        L[ch.attach, rows[0]] = L[rows[0], ch.attach] = -float(ch.b_at(0))
        for k in range(1, N + 1):
            r = rows[k - 1]
            L[r, r] = float(ch.a_at(k))
            if k < N:
                L[r, r + 1] = L[r + 1, r] = -float(ch.b_at(k))
    return validate_finite_graph(L), imap
