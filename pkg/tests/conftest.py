import numpy as np
import pytest

from graphschro.graph_model import validate_finite_graph


def unobservable_dimension(L, B, tol=1e-9):
    """Kalman oracle: dim of the largest L-invariant subspace inside ker(C), C = rows of B.

    Grows the observable row space W <- W + W L until it stops growing.
    """
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    B = sorted(B)
    if not B:
        return n
    W = np.eye(n)[B]
    rank = 0
    while True:
        u, s, vh = np.linalg.svd(np.vstack([W, W @ L]))
        r = int(np.sum(s > tol * s[0]))
        W = vh[:r]
        if r == rank or r == n:
            return n - r
        rank = r


@pytest.fixture
def laplacian2():
    return validate_finite_graph([[2.0, -1.0], [-1.0, 2.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
