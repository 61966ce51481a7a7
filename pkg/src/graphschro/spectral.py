"""Dense symmetric eigendecomposition, eigenvalue grouping, resolvents, projectors and kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AtPole, NonSymmetric, ToleranceOutOfRange

DEFAULT_GROUP_TOL = 1e-8
DEFAULT_KERNEL_TOL = 1e-9
POLE_DISTANCE = 1e-12


def check_tol(tol: float, name: str = "tol") -> float:
    if not 0 < tol <= 1e-2:
        raise ToleranceOutOfRange(f"{name}={tol!r} must lie in (0, 1e-2]")
    return float(tol)


@dataclass(frozen=True)
class SpectralData:
    """Eigen-decomposition of a real symmetric matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
        Ascending.
    eigenvectors : ndarray, shape (n, n)
        Orthonormal columns, ``eigenvectors[:, l]`` belongs to ``eigenvalues[l]``.
    groups : tuple of tuple of int
        Indices of numerically equal eigenvalues, in ascending order.
    tol : float
        Relative grouping tolerance that produced ``groups``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple
    tol: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def n_distinct(self) -> int:
        return len(self.groups)

    @property
    def representatives(self) -> np.ndarray:
        return np.array([self.eigenvalues[list(g)].mean() for g in self.groups])

    def min_gap(self) -> float:
        """Smallest gap between consecutive eigenvalues (``inf`` for n < 2)."""
        if self.n < 2:
            return np.inf
        return float(np.min(np.diff(self.eigenvalues)))


def group_eigenvalues(eigenvalues: np.ndarray, tol: float) -> tuple:
    """Single-linkage grouping of sorted eigenvalues at ``tol * (1 + max|lambda|)``."""
    if len(eigenvalues) == 0:
        return ()
    thresh = tol * (1.0 + np.max(np.abs(eigenvalues)))
    groups, current = [], [0]
    for l in range(1, len(eigenvalues)):
        if eigenvalues[l] - eigenvalues[l - 1] <= thresh:
            current.append(l)
        else:
            groups.append(tuple(current))
            current = [l]
    groups.append(tuple(current))
    return tuple(groups)


def symmetric_eig(L, tol: float = DEFAULT_GROUP_TOL) -> SpectralData:
    L = np.asarray(L, dtype=float)
    check_tol(tol)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise NonSymmetric(f"expected a square matrix, got shape {L.shape}")
    if L.size and np.max(np.abs(L - L.T)) > 0:
        raise NonSymmetric("matrix is not exactly symmetric")
    if L.shape[0] == 0:
        return SpectralData(np.zeros(0), np.zeros((0, 0)), (), tol)
    w, P = np.linalg.eigh(L)
    return SpectralData(w, P, group_eigenvalues(w, tol), tol)


def with_basis(spec: SpectralData, eigenvectors: np.ndarray) -> SpectralData:
    """Same spectrum with another orthonormal eigenbasis (e.g. rotated inside a degenerate group)."""
    return SpectralData(spec.eigenvalues, np.asarray(eigenvectors, dtype=float), spec.groups, spec.tol)


def resolvent_entry(spec: SpectralData, alpha: int, beta: int, lam: complex) -> complex:
    """``r(alpha, beta; lam) = sum_l p_l(alpha) p_l(beta) / (lambda_l - lam)``."""
    diff = spec.eigenvalues - lam
    if np.any(np.abs(diff) <= POLE_DISTANCE):
        raise AtPole(f"lambda={lam} is an eigenvalue")
    P = spec.eigenvectors
    return complex(np.sum(P[alpha] * P[beta] / diff))


def resolvent_matrix(spec: SpectralData, lam: complex, rows=None, cols=None) -> np.ndarray:
    """Block of the resolvent ``(L - lam I)^{-1}`` built from the spectral sum."""
    diff = spec.eigenvalues - lam
    if np.any(np.abs(diff) <= POLE_DISTANCE):
        raise AtPole(f"lambda={lam} is an eigenvalue")
    P = spec.eigenvectors
    Pr = P if rows is None else P[np.asarray(rows, dtype=int)]
    Pc = P if cols is None else P[np.asarray(cols, dtype=int)]
    return (Pr / diff) @ Pc.T


def spectral_projector(spec: SpectralData, m: int) -> np.ndarray:
    """Orthogonal projector onto the eigenspace of distinct-eigenvalue group ``m``."""
    Pm = spec.eigenvectors[:, list(spec.groups[m])]
    return Pm @ Pm.T


def kernel(Mx, tol: float = DEFAULT_KERNEL_TOL) -> tuple[int, np.ndarray]:
    """Numerical null space of ``Mx`` via SVD.

    Singular values ``<= tol * sigma_max`` count as zero.  Returns the
    dimension and a ``(q, dim)`` array whose columns are an orthonormal basis.
    """
    check_tol(tol)
    Mx = np.asarray(Mx)
    if Mx.ndim != 2:
        raise ValueError("kernel expects a 2-d array")
    p, q = Mx.shape
    if p == 0 or q == 0:
        return q, np.eye(q, dtype=Mx.dtype if q else float)
    _, s, Vh = np.linalg.svd(Mx, full_matrices=True)
    smax = s[0] if len(s) else 0.0
    if smax == 0:
        return q, np.eye(q, dtype=Vh.dtype)
    rank = int(np.sum(s > tol * smax))
    basis = Vh[rank:].conj().T
    return q - rank, basis


def numerical_rank(Mx, tol: float = DEFAULT_KERNEL_TOL) -> int:
    Mx = np.asarray(Mx)
    return Mx.shape[1] - kernel(Mx, tol)[0]
