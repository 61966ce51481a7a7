"""Jost solutions, the matrices T(theta) and S(theta), and generalized eigenfunctions.

Spectral parameter: ``lambda(theta) = 2 - theta - 1/theta``.  On a channel
with data ``a, b`` the Jost solution ``e(k, theta)`` equals ``theta**k`` past
the stabilization index and is obtained below it by running the three-term
recurrence backwards, which keeps every ``e(k, .)`` a Laurent polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import OnSingularSet, TNotInvertible, ZeroCoefficient, ZeroTheta
from .graph_model import ChannelSpec, WebGraph, truncate
from .laurent import LaurentPoly
from .spectral import DEFAULT_GROUP_TOL, resolvent_matrix, symmetric_eig

DEFAULT_GUARD = 1e-6
# T(theta) counts as singular past this condition number
COND_LIMIT = 1e12


def lambda_of_theta(theta: complex) -> complex:
    if theta == 0:
        raise ZeroTheta("lambda(theta) is undefined at theta = 0")
    return 2 - theta - 1 / theta


# lambda(theta) as a Laurent polynomial: 2 - theta - theta^{-1}
LAMBDA_POLY = LaurentPoly({-1: -1, 0: 2, 1: -1})


@dataclass(frozen=True)
class JostSolution:
    """``polys[k]`` is ``e(k, .)`` for ``0 <= k <= K0 + 1``; beyond that ``e(k, theta) = theta**k``.

    Exponents of ``e(k, .)`` lie in ``[k, max(K0 + 1, 2 K0 - k)]``.
    """

    channel: ChannelSpec
    polys: tuple

    @property
    def K0(self) -> int:
        return self.channel.K0

    def poly(self, k: int) -> LaurentPoly:
        if k < 0:
            raise IndexError("k must be >= 0")
        if k <= self.K0 + 1:
            return self.polys[k]
        return LaurentPoly.monomial(k, self.polys[-1][self.K0 + 1])

    def __call__(self, k: int, theta: complex) -> complex:
        if k > self.K0:
            return complex(theta) ** k
        return complex(self.polys[k](complex(theta)))

    def residual(self, k: int) -> LaurentPoly:
        """Laurent residual of the channel equation at site ``k >= 1``.

        ``-b(k-1) e(k-1) + (a(k) - lambda) e(k) - b(k) e(k+1)``; identically
        zero for a correct Jost solution.
        """
        ch = self.channel
        return (
            self.poly(k - 1) * (-ch.b_at(k - 1))
            + self.poly(k) * ch.a_at(k)
            - LAMBDA_POLY * self.poly(k)
            - self.poly(k + 1) * ch.b_at(k)
        )


def jost_solution(ch: ChannelSpec) -> JostSolution:
    """Backward recursion ``e(k-1) = [(a(k) - lambda) e(k) - b(k) e(k+1)] / b(k-1)``.

    Uses exact Fractions when every channel coefficient is rational.
    """
    one = Fraction(1) if ch.is_rational else 1.0
    if any(b == 0 for b in ch.b):
        raise ZeroCoefficient("channel has a zero link weight")
    top = ch.K0 + 1
    e = {top: LaurentPoly.monomial(top, one), top + 1: LaurentPoly.monomial(top + 1, one)}
    for k in range(top, 0, -1):
        # a(k) - lambda(theta) = (a(k) - 2) + theta + 1/theta
        shift = LaurentPoly({-1: one, 0: (ch.a_at(k) - 2) * one, 1: one})
        e[k - 1] = (shift * e[k] - e[k + 1] * ch.b_at(k)) / ch.b_at(k - 1)
    return JostSolution(ch, tuple(e[k] for k in range(top + 1)))


def _dedupe(points, tol):
    out = []
    for z in points:
        if all(abs(z - w) > tol for w in out):
            out.append(z)
    return out


@dataclass(frozen=True)
class SingularSet:
    thetas: tuple

    def distance(self, theta: complex) -> float:
        return min(abs(theta - z) for z in self.thetas)

    def __contains__(self, theta) -> bool:
        return self.distance(complex(theta)) == 0


def _quadratic_roots(lam: float) -> tuple[complex, complex]:
    # theta^2 + (lam - 2) theta + 1 = 0
    r = np.roots([1.0, lam - 2.0, 1.0]).astype(complex)
    return complex(r[0]), complex(r[1])


def singular_set(web: WebGraph, tol: float = DEFAULT_GUARD, group_tol: float = DEFAULT_GROUP_TOL) -> SingularSet:
    """Base points ``{-1, 0, 1}`` plus every ``theta`` in the closed disk with ``lambda(theta)`` a core eigenvalue."""
    spec = symmetric_eig(web.core.L, group_tol)
    pts = [-1 + 0j, 0j, 1 + 0j]
    for lam in spec.eigenvalues:
        pts += [z for z in _quadratic_roots(lam) if abs(z) <= 1 + tol]
    return SingularSet(tuple(_dedupe(pts, 1e-14)))


def _guard(web: WebGraph, theta: complex, tol: float, group_tol: float) -> None:
    if theta == 0:
        raise ZeroTheta("theta = 0")
    O = singular_set(web, tol, group_tol)
    # lambda(theta) = lambda(1/theta): points outside the disk are screened via their reflection
    probe = theta if abs(theta) <= 1 else 1 / theta
    if O.distance(probe) <= tol:
        raise OnSingularSet(f"theta={theta} lies within {tol:g} of the singular set")


@dataclass(frozen=True)
class ScatteringAtTheta:
    theta: complex
    E0: np.ndarray
    E1: np.ndarray
    B0: np.ndarray
    R: np.ndarray
    R1: np.ndarray
    T: np.ndarray
    Tinv: np.ndarray
    T_reflected: np.ndarray  # T(1/theta)
    S: np.ndarray
    cond: float

    def unitarity_defect(self) -> float:
        """``||S^* S - I||``; a diagnostic, not a guaranteed property."""
        n = self.S.shape[0]
        return float(np.linalg.norm(self.S.conj().T @ self.S - np.eye(n), 2)) if n else 0.0


def _T(joss, B0, R, theta):
    E0 = np.diag([j(0, theta) for j in joss])
    E1 = np.diag([j(1, theta) for j in joss])
    return E0, E1, E0 - R @ B0 @ E1


def scattering_at(
    web: WebGraph,
    theta: complex,
    tol: float = DEFAULT_GUARD,
    group_tol: float = DEFAULT_GROUP_TOL,
) -> ScatteringAtTheta:
    """Evaluate ``T(theta) = E(0,theta) - R(theta) B(0) E(1,theta)`` and ``S(theta) = -T(theta)^{-1} T(1/theta)``."""
    theta = complex(theta)
    _guard(web, theta, tol, group_tol)
    spec = symmetric_eig(web.core.L, group_tol)
    lam = lambda_of_theta(theta)
    attach = [ch.attach for ch in web.channels]
    R = resolvent_matrix(spec, lam, attach, attach)
    R1 = resolvent_matrix(spec, lam, None, attach)
    B0 = np.diag([float(ch.b_at(0)) for ch in web.channels])
    joss = [jost_solution(ch) for ch in web.channels]
    E0, E1, T = _T(joss, B0, R, theta)
    _, _, T_ref = _T(joss, B0, R, 1 / theta)
    cond = float(np.linalg.cond(T)) if T.size else 1.0
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise TNotInvertible(f"T({theta}) is numerically singular (cond={cond:.3g})")
    Tinv = np.linalg.inv(T)
    S = -Tinv @ T_ref
    return ScatteringAtTheta(theta, E0, E1, B0, R, R1, T, Tinv, T_ref, S, cond)


@dataclass(frozen=True)
class Eigenfunction:
    """Values of a generalized eigenfunction.

    ``core[alpha]`` on the core; ``channels[c, k]`` at ``nu_c(k)`` for
    ``0 <= k <= depth`` (``k = 0`` repeats the attach vertex).
    """

    theta: complex
    core: np.ndarray
    channels: np.ndarray

    @property
    def depth(self) -> int:
        return self.channels.shape[1] - 1


def eigenfunction(
    web: WebGraph,
    theta: complex,
    n_vec,
    depth: int,
    tol: float = DEFAULT_GUARD,
    group_tol: float = DEFAULT_GROUP_TOL,
    scat: ScatteringAtTheta | None = None,
) -> Eigenfunction:
    """``phi = U(k) n`` on channels and ``R1 B(0) U(1) n`` on the core, with ``U(k) = E(k,1/theta) + E(k,theta) S``."""
    theta = complex(theta)
    if depth < web.K0 + 1:
        raise ValueError(f"depth must be >= K0+1 = {web.K0 + 1}")
    if scat is None:
        scat = scattering_at(web, theta, tol, group_tol)
    n_vec = np.asarray(n_vec, dtype=complex).reshape(-1)
    if n_vec.shape != (len(web.channels),):
        raise ValueError(f"n must have one entry per channel ({len(web.channels)})")
    joss = [jost_solution(ch) for ch in web.channels]
    Sn = scat.S @ n_vec
    chan = np.empty((len(joss), depth + 1), dtype=complex)
    for c, j in enumerate(joss):
        for k in range(depth + 1):
            chan[c, k] = j(k, 1 / theta) * n_vec[c] + j(k, theta) * Sn[c]
    core = scat.R1 @ scat.B0 @ chan[:, 1]
    return Eigenfunction(theta, core, chan)


def eigenfunction_residual(web: WebGraph, phi: Eigenfunction) -> dict:
    """Relative residuals of ``lambda(theta) x = L x`` on the core and channel sites ``1..depth-1``.

    ``boundary`` measures how well the channel value at ``k = 0`` agrees with
    the core value at the attach vertex.
    """
    g, imap = truncate(web, phi.depth, _check=False)
    x = np.concatenate([phi.core, phi.channels[:, 1:].reshape(-1)])
    lam = lambda_of_theta(phi.theta)
    r = g.L @ x - lam * x
    keep = np.ones(len(x), dtype=bool)
    for c in range(len(web.channels)):
        keep[imap.row(c, phi.depth)] = False
    scale = (np.linalg.norm(g.L, 2) + abs(lam)) * max(np.max(np.abs(x)), 1e-300)
    attach = [ch.attach for ch in web.channels]
    bdry = np.abs(phi.channels[:, 0] - phi.core[attach]) if attach else np.zeros(0)
    return {
        "equation": float(np.max(np.abs(r[keep])) / scale) if keep.any() else 0.0,
        "boundary": float(np.max(bdry) / max(np.max(np.abs(x)), 1e-300)) if len(bdry) else 0.0,
    }
