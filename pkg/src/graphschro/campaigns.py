"""Randomized verification campaigns and the worked examples they are anchored on.

Every campaign takes an integer seed; instance ``i`` draws from
``np.random.default_rng([seed, i])`` so results do not depend on worker
count or scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .dimension import (
    dimension_report,
    exact_solution_basis,
    forced_zero_set,
    oracle_dimension,
    oracle_solution_basis,
)
from .errors import OnSingularSet
from .evolution import (
    Propagator,
    canonical_channel_data,
    decay_bound_log,
    exponential_type_estimate,
    uncertainty_experiment,
)
from .extension import decompose, maximal_extension
from .graph_model import ChannelSpec, FiniteGraph, WebGraph, truncate, validate_finite_graph
from .scattering import (
    eigenfunction,
    eigenfunction_residual,
    jost_solution,
    scattering_at,
    singular_set,
)
from .spectral import DEFAULT_GROUP_TOL, DEFAULT_KERNEL_TOL, symmetric_eig

THREADS_ENV = "GRAPH_SCHRO_THREADS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Iterable, workers: int | None = None) -> list:
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map keeps input order


# --- worked examples --------------------------------------------------------------


def four_cycle_graph(d1: float, d2: float, couplings=(1.0, 2.0, 3.0, 4.0), d_beta=(5.0, 7.0)) -> FiniteGraph:
    """Four-cycle ``beta1 - alpha1 - beta2 - alpha2 - beta1``.

    Vertex order: ``beta1=0, alpha1=1, beta2=2, alpha2=3``.  ``couplings``
    are ``L(beta1,alpha1), L(beta1,alpha2), L(beta2,alpha1), L(beta2,alpha2)``;
    ``d1, d2`` are the diagonal entries at ``alpha1, alpha2``.
    """
    L = np.zeros((4, 4))
    L[0, 0], L[2, 2] = d_beta
    L[1, 1], L[3, 3] = d1, d2
    for (b, a), w in zip([(0, 1), (0, 3), (2, 1), (2, 3)], couplings):
        L[b, a] = L[a, b] = w
    return validate_finite_graph(L)


FOUR_CYCLE_B = frozenset({0, 2})


def two_hub_graph(diagonal=None, weights=None) -> FiniteGraph:
    """Two hubs joined through a shared vertex ``alpha``.

    Vertex order: left hub 0, right hub 1, ``alpha`` 2, left leaves 3-6,
    right leaves 7-8.  The default diagonal makes all seven non-hub values
    distinct.
    """
    if diagonal is None:
        diagonal = [10.0, 11.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
    if weights is None:
        weights = [1.0, 1.5, 0.7, 1.2, 0.9, 1.1, 0.8, 1.3]
    edges = [(0, 2), (1, 2), (0, 3), (0, 4), (0, 5), (0, 6), (1, 7), (1, 8)]
    L = np.diag(np.asarray(diagonal, dtype=float))
    for (i, j), w in zip(edges, weights):
        L[i, j] = L[j, i] = -w
    return validate_finite_graph(L)


TWO_HUB_B = frozenset({0, 1})


def path_graph() -> tuple[FiniteGraph, frozenset]:
    """Path ``0 - 1 - 2`` with ``B = {0}``; extension swallows the whole path."""
    L = np.array([[2.0, -1, 0], [-1, 2, -1], [0, -1, 2]])
    return validate_finite_graph(L), frozenset({0})


def free_web(core_value: float = 2.0) -> WebGraph:
    return WebGraph(validate_finite_graph([[core_value]]), (ChannelSpec(0),))


def forced_zero_web() -> WebGraph:
    """Core path ``0 - 1 - 2`` with a channel at each end."""
    core = validate_finite_graph([[3.0, -1.0, 0.0], [-1.0, 2.5, -0.5], [0.0, -0.5, 3.5]])
    return WebGraph(core, (ChannelSpec(0, 1, (2.5,), (0.8,)), ChannelSpec(2, 0)))


# --- random instances -------------------------------------------------------------


def random_connected_matrix(rng: np.random.Generator, n: int, p_extra: float = 0.35) -> np.ndarray:
    L = np.diag(rng.uniform(0.0, 4.0, n))
    order = rng.permutation(n)
    for idx in range(1, n):
        i, j = order[idx], order[rng.integers(idx)]
        L[i, j] = L[j, i] = rng.choice([-1, 1]) * rng.uniform(0.3, 2.0)
    for i in range(n):
        for j in range(i + 1, n):
            if L[i, j] == 0 and rng.random() < p_extra:
                L[i, j] = L[j, i] = rng.choice([-1, 1]) * rng.uniform(0.3, 2.0)
    return L


def _well_separated(g: FiniteGraph, B, tol: float) -> bool:
    """All spectra feeding eigenvalue counts have gaps above ``10 * tol`` (relative)."""

    def ok(M):
        spec = symmetric_eig(M, tol)
        w = spec.eigenvalues
        return spec.min_gap() > 10 * tol * (1 + (np.max(np.abs(w)) if len(w) else 0))

    if not ok(g.L):
        return False
    dec = decompose(g, maximal_extension(g, B).closure)
    return all(ok(g.restrict(c)) for c in dec.clusters.values()) and all(ok(g.restrict(b)) for b in dec.branches)


def random_instance(rng: np.random.Generator, tol: float = DEFAULT_GROUP_TOL, n_max: int = 8):
    while True:
        n = int(rng.integers(2, n_max + 1))
        g = validate_finite_graph(random_connected_matrix(rng, n))
        size = int(rng.integers(0, n + 1))
        B = frozenset(rng.choice(n, size=size, replace=False).tolist())
        if _well_separated(g, B, tol):
            return g, B


def random_channel(rng: np.random.Generator, attach: int, K0_max: int = 3, rational: bool = False) -> ChannelSpec:
    K0 = int(rng.integers(0, K0_max + 1))
    if rational:
        a = [Fraction(int(rng.integers(-20, 41)), int(rng.integers(1, 10))) for _ in range(K0)]
        b = []
        for _ in range(K0):
            num = int(rng.integers(1, 20)) * int(rng.choice([-1, 1]))
            b.append(Fraction(num, int(rng.integers(1, 10))))
    else:
        a = rng.uniform(0.5, 3.5, K0).tolist()
        b = (rng.choice([-1, 1], K0) * rng.uniform(0.4, 1.6, K0)).tolist()
    return ChannelSpec(attach, K0, tuple(a), tuple(b))


def random_web(rng: np.random.Generator, core_max: int = 4, channels_max: int = 3, K0_max: int = 3) -> WebGraph:
    M = int(rng.integers(1, core_max + 1))
    core = validate_finite_graph(random_connected_matrix(rng, M) if M > 1 else [[rng.uniform(0, 4)]])
    n_ch = int(rng.integers(1, channels_max + 1))
    chans = tuple(random_channel(rng, int(rng.integers(M)), K0_max) for _ in range(n_ch))
    return WebGraph(core, chans)


# --- campaign records -------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    instance_id: int
    n: int
    B_size: int
    lower: int
    upper: int
    exact: int
    oracle: int
    match: bool
    tol: float
    oracle_closure: int  # oracle dimension recomputed on [B]

    @property
    def sandwiched(self) -> bool:
        return self.lower <= self.oracle <= self.upper

    @property
    def closure_insensitive(self) -> bool:
        return self.oracle == self.oracle_closure

    def csv_fields(self) -> list:
        return [self.instance_id, self.n, self.B_size, self.lower, self.upper, self.exact, self.oracle, self.match, self.tol]


SWEEP_COLUMNS = ["instance_id", "n", "|B|", "lower", "upper", "exact", "oracle", "match", "tol"]


def sweep(seed: int, count: int = 500, tol: float = DEFAULT_GROUP_TOL, kernel_tol: float = DEFAULT_KERNEL_TOL, n_max: int = 8, workers: int | None = None) -> list[SweepRow]:
    """Random graphs with random ``B``: bounds, both dimension routes and ``dim V_B = dim V_[B]``."""

    def one(i):
        g, B = random_instance(np.random.default_rng([seed, i]), tol, n_max)
        rep = dimension_report(g, B, tol, kernel_tol)
        closed = oracle_dimension(g, rep.closure, tol, kernel_tol)
        return SweepRow(i, g.n, len(B), rep.lower, rep.upper, rep.exact, rep.oracle, rep.match, tol, closed)

    return _map(one, range(count), workers)


def confluence_campaign(seed: int, graphs: int = 100, orders: int = 20, n_max: int = 10) -> list[bool]:
    """For each random graph and subset, whether all seeded extension orders reach the same closure."""
    out = []
    for i in range(graphs):
        rng = np.random.default_rng([seed, 10_000 + i])
        n = int(rng.integers(2, n_max + 1))
        L = random_connected_matrix(rng, n, p_extra=float(rng.uniform(0.0, 0.4)))
        g = validate_finite_graph(L)
        B = rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist()
        closures = {maximal_extension(g, B, order_seed=int(rng.integers(2**31))).closure for _ in range(orders)}
        closures.add(maximal_extension(g, B).closure)
        out.append(len(closures) == 1)
    return out


def jost_campaign(seed: int, count: int = 50, K0_max: int = 6) -> list[bool]:
    """Exact Laurent recurrence identities on random rational channels."""
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, 20_000 + i])
        ch = random_channel(rng, 0, K0_max, rational=True)
        js = jost_solution(ch)
        exact = all(isinstance(c, Fraction) for p in js.polys for c in p.coefficients.values())
        zero = all(js.residual(k).is_zero() for k in range(1, ch.K0 + 3))
        out.append(exact and zero)
    return out


def sample_thetas(rng: np.random.Generator, web: WebGraph, count: int, radii=(0.9, 1.0), min_dist: float = 1e-3) -> list[complex]:
    O = singular_set(web)
    out = []
    while len(out) < count:
        r = radii[len(out) % len(radii)]
        phi = rng.uniform(0.05, np.pi - 0.05) * rng.choice([-1, 1])
        th = r * np.exp(1j * phi)
        if O.distance(th) > min_dist:
            out.append(complex(th))
    return out


@dataclass(frozen=True)
class ScatterSample:
    web_id: int
    theta: complex
    ss_defect: float
    residual: float
    boundary: float
    cond: float
    invertible: bool


def scattering_campaign(seed: int, webs: int = 20, samples: int = 64) -> list[ScatterSample]:
    out = []
    for w in range(webs):
        rng = np.random.default_rng([seed, 30_000 + w])
        web = random_web(rng)
        depth = web.K0 + 3
        for th in sample_thetas(rng, web, samples):
            try:
                sc = scattering_at(web, th)
            except (OnSingularSet, ArithmeticError):
                out.append(ScatterSample(w, th, np.inf, np.inf, np.inf, np.inf, False))
                continue
            sc_ref = scattering_at(web, 1 / th)
            nch = len(web.channels)
            ss = float(np.max(np.abs(sc.S @ sc_ref.S - np.eye(nch))))
            nv = rng.normal(size=nch) + 1j * rng.normal(size=nch)
            phi = eigenfunction(web, th, nv, depth, scat=sc)
            res = eigenfunction_residual(web, phi)
            out.append(ScatterSample(w, th, ss, res["equation"], res["boundary"], sc.cond, True))
    return out


def random_admissible_data(rng: np.random.Generator, web: WebGraph, channel: int, eps: float, N: int, guard: int, C: float = 1.0) -> np.ndarray:
    """Random initial data obeying the decay bound on ``channel`` (strictly, with random phases)."""
    g, imap = truncate(web, N)
    u0 = np.zeros(g.n, dtype=complex)
    support = N - guard
    k = np.arange(1, support + 1)
    rho = rng.uniform(0.0, 0.95, support) * np.exp(2j * np.pi * rng.random(support))
    u0[imap.channel_rows(channel)[:support]] = C * rho * np.exp(decay_bound_log(k, eps))
    u0[: web.M] = rng.normal(size=web.M) + 1j * rng.normal(size=web.M)
    for c in range(len(web.channels)):
        if c != channel:
            depth = int(rng.integers(0, 6))
            u0[imap.channel_rows(c)[:depth]] = rng.normal(size=depth)
    # a share of zero data: the trivial solution must also come out consistent
    if rng.random() < 0.1:
        u0[:] = 0
    return u0


def experiment_campaign(seed: int, runs: int = 100, N: int = 128, guard: int = 64):
    reports = []
    for i in range(runs):
        rng = np.random.default_rng([seed, 40_000 + i])
        web = random_web(rng, core_max=3, channels_max=2, K0_max=2)
        channel = int(rng.integers(len(web.channels)))
        eps = float(rng.uniform(0.1, 2.0))
        u0 = random_admissible_data(rng, web, channel, eps, N, guard)
        reports.append(uncertainty_experiment(web, channel, eps, u0, N, guard))
    return reports


def canonical_experiment(N: int = 128, guard: int = 64, eps: float = 1.0):
    web = free_web()
    u0 = canonical_channel_data(web, 0, eps, N, N - guard)
    return uncertainty_experiment(web, 0, eps, u0, N, guard)


# --- acceptance -------------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def criterion_four_cycle(tol: float = DEFAULT_GROUP_TOL) -> Criterion:
    cases = [
        ("distinct", four_cycle_graph(1.0, 2.0), 0, (-2, 0)),
        ("equal/rank2", four_cycle_graph(1.0, 1.0, (1.0, 2.0, 3.0, 5.0)), 0, (0, 2)),
        ("equal/rank1", four_cycle_graph(1.0, 1.0, (1.0, 1.0, 1.0, 1.0)), 1, (0, 2)),
    ]
    ok, parts = True, []
    for name, g, dim, bounds in cases:
        rep = dimension_report(g, FOUR_CYCLE_B, tol)
        good = rep.exact == dim and rep.oracle == dim and (rep.lower, rep.upper) == bounds
        ok &= good
        parts.append(f"{name}: dim={rep.exact} bounds=({rep.lower},{rep.upper})")
    return Criterion(1, "four-cycle example", ok, "; ".join(parts))


def criterion_two_hub(tol: float = DEFAULT_GROUP_TOL) -> Criterion:
    rep = dimension_report(two_hub_graph(), TWO_HUB_B, tol)
    ok = (rep.lower, rep.upper) == (-1, 0) and rep.exact == 0 and rep.oracle == 0
    return Criterion(2, "two-hub example", ok, f"bounds=({rep.lower},{rep.upper}) dim={rep.exact}")


def criterion_sweep(rows: list[SweepRow]) -> Criterion:
    bad = [r.instance_id for r in rows if not (r.sandwiched and r.match)]
    dims = sum(r.oracle > 0 for r in rows)
    return Criterion(
        3,
        "sandwich + agreement",
        len(rows) >= 500 and not bad,
        f"{len(rows) - len(bad)}/{len(rows)} ok, {dims} with dim>0" + (f", failures {bad[:10]}" if bad else ""),
    )


def criterion_confluence(results: list[bool]) -> Criterion:
    return Criterion(4, "extension confluence", len(results) >= 100 and all(results), f"{sum(results)}/{len(results)} graphs confluent over 20 orders")


def criterion_closure(rows: list[SweepRow]) -> Criterion:
    bad = [r.instance_id for r in rows if not r.closure_insensitive]
    return Criterion(5, "closure insensitivity", not bad, f"{len(rows) - len(bad)}/{len(rows)} instances")


def criterion_jost(results: list[bool]) -> Criterion:
    free = jost_solution(ChannelSpec(0))
    free_ok = all(free.poly(k) == free.poly(k).monomial(k, 1) for k in range(0, 12))
    return Criterion(6, "jost exactness", len(results) >= 50 and all(results) and free_ok, f"{sum(results)}/{len(results)} rational channels exact, free channel theta^k: {free_ok}")


def criterion_scattering(samples: list[ScatterSample], tol: float = 1e-8) -> Criterion:
    inv = all(s.invertible for s in samples)
    ss = max(s.ss_defect for s in samples)
    res = max(max(s.residual, s.boundary) for s in samples)
    ok = inv and ss <= tol and res <= tol and len(samples) >= 20 * 64
    return Criterion(7, "scattering identities", ok, f"{len(samples)} samples, max|SS'-I|={ss:.2e}, max residual={res:.2e}, all T invertible: {inv}")


def unitarity_errors(seed: int, graphs: int = 30) -> dict:
    errs = {"norm": 0.0, "group": 0.0, "reverse": 0.0}
    for i in range(graphs):
        rng = np.random.default_rng([seed, 50_000 + i])
        n = int(rng.integers(1, 30))
        g = validate_finite_graph(random_connected_matrix(rng, n) if n > 1 else [[rng.uniform(0, 4)]])
        prop = Propagator(g)
        u0 = rng.normal(size=n) + 1j * rng.normal(size=n)
        u0 /= np.linalg.norm(u0)
        s, t = rng.uniform(-3, 3, 2)
        us = prop(u0, s)
        errs["norm"] = max(errs["norm"], abs(np.linalg.norm(us) - 1.0))
        errs["group"] = max(errs["group"], float(np.max(np.abs(prop(us, t) - prop(u0, s + t)))))
        errs["reverse"] = max(errs["reverse"], float(np.max(np.abs(prop(us, -s) - u0))))
    return errs


def criterion_unitarity(seed: int, tol: float = 1e-10) -> Criterion:
    errs = unitarity_errors(seed)
    ok = all(v <= tol for v in errs.values())
    return Criterion(8, "unitarity and group law", ok, ", ".join(f"{k}={v:.1e}" for k, v in errs.items()))


def criterion_type() -> Criterion:
    K = 200
    k = np.arange(K + 1)
    logc = np.concatenate([[0.0], k[1:] * (1.0 - np.log(3.0 * k[1:]))])
    s1 = exponential_type_estimate(logc, log_abs=True).sigma
    from scipy.special import gammaln

    s2 = exponential_type_estimate(-gammaln(k + 1.0), log_abs=True).sigma
    ok = 0.95 / 3 <= s1 <= 1.05 / 3 and 0.95 <= s2 <= 1.05
    return Criterion(9, "type estimator", ok, f"(e/3k)^k -> {s1:.4f} (target 1/3), 1/k! -> {s2:.4f} (target 1)")


def criterion_uncertainty(reports, canonical) -> Criterion:
    violations = sum(r.verdict == "VIOLATION" for r in reports)
    early = canonical.check1.margin[:40]
    crossed = bool(np.any(early > 0))
    ok = len(reports) >= 100 and violations == 0 and crossed and canonical.verdict == "consistent"
    nontrivial = [r for r in reports if r.nontrivial]
    resolved = sum(r.resolved_break for r in nontrivial)
    return Criterion(
        10,
        "uncertainty consistency",
        ok,
        f"{len(reports)} runs, {violations} violations, {resolved}/{len(nontrivial)} nontrivial runs break the bound above roundoff; "
        f"canonical t=1 max margin (k<=40) = {float(np.max(early)):.3g}",
    )


def criterion_forced_zero(N: int = 48) -> Criterion:
    web = forced_zero_web()
    M = web.M
    seeded = forced_zero_set(web, {0, M + 0})  # nu_0(0), nu_0(1)
    zeroed = forced_zero_set(web, set(), channel_zeros={1})  # every channel except nu_0 vanishes
    g, imap = truncate(web, N)
    B = {0, imap.row(0, 1)}
    worst = 0.0
    dims = []
    for basis in (oracle_solution_basis(g, B), exact_solution_basis(g, B)):
        dims.append(basis.shape[1])
        prop = Propagator(g)
        for t in np.linspace(0, 1, 11):
            if basis.shape[1]:
                worst = max(worst, float(np.max(np.abs(prop(basis, t)))))
    ok = seeded.everything and zeroed.everything and worst <= 1e-8
    return Criterion(11, "forced-zero corollaries", ok, f"seeded channel all={seeded.everything}, zero channels all={zeroed.everything}, V_B dims={dims}, max|u|={worst:.1e}")


def run_acceptance(seed: int = 7, workers: int | None = None) -> list[Criterion]:
    rows = sweep(seed, 500, workers=workers)
    return [
        criterion_four_cycle(),
        criterion_two_hub(),
        criterion_sweep(rows),
        criterion_confluence(confluence_campaign(seed)),
        criterion_closure(rows),
        criterion_jost(jost_campaign(seed)),
        criterion_scattering(scattering_campaign(seed)),
        criterion_unitarity(seed),
        criterion_type(),
        criterion_uncertainty(experiment_campaign(seed), canonical_experiment()),
        criterion_forced_zero(),
    ]
