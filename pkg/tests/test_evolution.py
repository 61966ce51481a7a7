import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from scipy.special import gammaln

from graphschro.campaigns import canonical_experiment, free_web, random_admissible_data, random_connected_matrix, random_web
from graphschro.errors import DimensionMismatch, PreconditionFailed, SupportTooDeep
from graphschro.evolution import (
    Propagator,
    canonical_channel_data,
    decay_bound_check,
    evolve,
    evolve_web,
    exponential_type_estimate,
    uncertainty_experiment,
)
from graphschro.graph_model import truncate, validate_finite_graph


def test_scalar_phase():
    g = validate_finite_graph([[2.5]])
    st_ = evolve(g, [1.0 + 1j], 0.7)
    assert st_.u[0] == pytest.approx(np.exp(1j * 2.5 * 0.7) * (1 + 1j))


def test_time_zero_is_identity(laplacian2):
    u0 = np.array([0.3, -1.2j])
    assert np.array_equal(evolve(laplacian2, u0, 0.0).u, u0)


def test_single_mode_phase(laplacian2):
    u0 = np.array([1.0, 1.0]) / np.sqrt(2)
    np.testing.assert_allclose(evolve(laplacian2, u0, np.pi).u, -u0, atol=1e-14)


def test_dimension_mismatch(laplacian2):
    with pytest.raises(DimensionMismatch):
        evolve(laplacian2, [1.0, 2.0, 3.0], 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_matrix_exponential(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    g = validate_finite_graph(random_connected_matrix(rng, n))
    u0 = rng.normal(size=n) + 1j * rng.normal(size=n)
    t = rng.uniform(-2, 2)
    np.testing.assert_allclose(evolve(g, u0, t).u, expm(1j * t * g.L) @ u0, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_unitarity_group_law_reversibility(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 25))
    prop = Propagator(validate_finite_graph(random_connected_matrix(rng, n)))
    u0 = rng.normal(size=n) + 1j * rng.normal(size=n)
    s, t = rng.uniform(-3, 3, 2)
    us = prop(u0, s)
    assert abs(np.linalg.norm(us) - np.linalg.norm(u0)) <= 1e-10 * np.linalg.norm(u0)
    np.testing.assert_allclose(prop(us, t), prop(u0, s + t), atol=1e-10)
    np.testing.assert_allclose(prop(us, -s), u0, atol=1e-10)


def delta_web(N):
    web = free_web()
    g, imap = truncate(web, N)
    u0 = np.zeros(g.n, dtype=complex)
    u0[imap.row(0, 1)] = 1.0
    return web, u0, imap


def test_web_truncation_doubling():
    web, u0, imap = delta_web(64)
    a = evolve_web(web, u0, 1.0, 64, 32)
    web2, u02, imap2 = delta_web(128)
    b = evolve_web(web2, u02, 1.0, 128, 32)
    assert a.leakage <= 1e-8
    keep = np.arange(1 + 32)  # core and the first 32 channel sites
    np.testing.assert_allclose(a.u[keep], b.u[keep], atol=1e-10)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_truncation_stability_random_webs(seed):
    rng = np.random.default_rng(seed)
    web = random_web(rng, core_max=3, channels_max=2, K0_max=2)
    core = rng.normal(size=web.M)
    runs = []
    for N in (64, 128):
        g, imap = truncate(web, N)
        u0 = np.zeros(g.n, dtype=complex)
        u0[: web.M] = core
        runs.append((evolve_web(web, u0, 1.0, N, N // 2), imap))
    (a, ia), (b, ib) = runs
    np.testing.assert_allclose(a.u[: web.M], b.u[: web.M], atol=1e-8)
    for c in range(len(web.channels)):
        np.testing.assert_allclose(a.u[ia.channel_rows(c)[:32]], b.u[ib.channel_rows(c)[:32]], atol=1e-8)


def test_web_time_zero():
    web, u0, _ = delta_web(32)
    assert np.array_equal(evolve_web(web, u0, 0.0, 32, 16).u, u0)


def test_support_too_deep():
    web = free_web()
    g, imap = truncate(web, 32)
    u0 = np.zeros(g.n)
    u0[imap.row(0, 32)] = 1.0
    with pytest.raises(SupportTooDeep):
        evolve_web(web, u0, 1.0, 32, 16)


def test_decay_check_examples():
    assert decay_bound_check(np.zeros(20), 0.5, 0.1).holds
    k = np.arange(1, 41)
    exact = (np.e / (3 * k)) ** k
    chk = decay_bound_check(exact, 1.0, 1.0)
    assert chk.holds and np.max(np.abs(chk.margin)) < 1e-9
    geo = decay_bound_check(2.0 ** -np.arange(1, 11), 1.0, 1.0)
    assert not geo.holds
    # log(2^-10) - 10 log(e/30) by hand
    assert geo.margin[9] == pytest.approx(-10 * np.log(2) - 10 * (1 - np.log(30)))
    assert geo.margin[9] > 0


def test_type_estimates():
    K = 200
    k = np.arange(K + 1)
    est = exponential_type_estimate(-gammaln(k + 1.0), log_abs=True)
    assert 0.95 <= est.sigma <= 1.05 and est.window == (100, 200)
    # floating input underflows past k~177; the estimate survives on what is left
    with np.errstate(under="ignore"):
        plain = exponential_type_estimate(np.exp(-gammaln(k + 1.0)))
    assert 0.95 <= plain.sigma <= 1.05
    k100 = np.arange(1, 101)
    c = np.concatenate([[1.0], (np.e / (3 * k100)) ** k100])
    assert exponential_type_estimate(c).sigma == pytest.approx(1 / 3, rel=1e-9)
    logc = np.concatenate([[0.0], k[1:] * (1 - np.log(3 * k[1:]))])
    assert exponential_type_estimate(logc, log_abs=True).sigma == pytest.approx(1 / 3, rel=1e-9)
    zero = exponential_type_estimate(np.zeros(K + 1))
    assert zero.sigma == 0 and zero.all_zero
    with pytest.raises(ValueError):
        exponential_type_estimate(np.ones(10))


def test_experiment_trivial_data():
    web = free_web()
    g, _ = truncate(web, 64)
    rep = uncertainty_experiment(web, 0, 1.0, np.zeros(g.n), 64, 32)
    assert rep.check0.holds and rep.check1.holds and not rep.nontrivial
    assert rep.verdict == "consistent"


def test_experiment_canonical():
    rep = canonical_experiment()
    assert rep.check0.holds and not rep.check1.holds
    assert np.any(rep.check1.margin[:40] > 0)
    assert rep.verdict == "consistent"
    assert rep.type0.sigma == pytest.approx(1 / 3, rel=1e-6)
    assert rep.resolved_break


def test_experiment_rejects_inadmissible_data():
    web, u0, _ = delta_web(64)
    with pytest.raises(PreconditionFailed):
        uncertainty_experiment(web, 0, 1.0, u0, 64, 32)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_experiments_never_violate(seed):
    rng = np.random.default_rng(seed)
    web = random_web(rng, core_max=3, channels_max=2, K0_max=2)
    eps = float(rng.uniform(0.1, 2.0))
    channel = int(rng.integers(len(web.channels)))
    u0 = random_admissible_data(rng, web, channel, eps, 96, 48)
    rep = uncertainty_experiment(web, channel, eps, u0, 96, 48)
    assert rep.verdict == "consistent"
    # the break must be visible above roundoff, not only in the noise tail
    assert rep.resolved_break or not rep.nontrivial


def test_canonical_data_shape():
    web = free_web()
    u0 = canonical_channel_data(web, 0, 1.0, 16, 8)
    assert u0.shape == (17,) and u0[0] == 0 and np.count_nonzero(u0) == 8


def test_experiment_time_grid_is_diagnostic():
    rep = canonical_experiment()
    ts = [t for t, _ in rep.grid]
    assert ts[0] == 0.0 and ts[-1] == 1.0 and len(ts) == 11
    assert rep.grid[0][1] == pytest.approx(rep.check0.worst, abs=1e-12)
    assert rep.grid[-1][1] == pytest.approx(rep.check1.worst, rel=1e-9)
    # margins grow as the data spread along the channel
    assert rep.grid[5][1] > 0
