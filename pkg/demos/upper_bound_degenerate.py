"""
When the upper bound needs generic couplings
============================================

The upper bound on the number of vanishing solutions counts distinct
eigenvalues on clusters and branches.  With repeated diagonal values and
equal couplings the count can come out too small.  This script shows a
five-vertex instance and measures how often it happens on random integer
graphs.
"""

import numpy as np

from graphschro.dimension import dimension_report
from graphschro.graph_model import validate_finite_graph

# Vertex 0 is the observed vertex.  Vertex 1 has two identical leaves 2 and 3,
# so u = e2 - e3 is an eigenvector that never touches vertex 0.
L = np.diag([5.0, 1.0, 1.0, 1.0, 3.0])
for i, j in [(0, 1), (0, 4), (1, 2), (1, 3)]:
    L[i, j] = L[j, i] = -1.0
rep = dimension_report(validate_finite_graph(L), {0})
print(f"bounds=({rep.lower},{rep.upper})  exact={rep.exact}  oracle={rep.oracle}")

# Random small graphs with entries drawn from a handful of integers.
rng = np.random.default_rng(0)
above = 0
trials = 2000
for _ in range(trials):
    n = int(rng.integers(3, 8))
    A = np.triu(rng.integers(-1, 1, size=(n, n)), 1) * rng.integers(0, 2, size=(n, n))
    A = A + A.T + np.diag(rng.integers(0, 3, size=n))
    g = validate_finite_graph(A.astype(float))
    if not g.is_connected:
        continue
    B = set(rng.choice(n, size=int(rng.integers(1, n)), replace=False).tolist())
    r = dimension_report(g, B)
    above += r.oracle > r.upper
print(f"{above} of {trials} degenerate instances exceed the upper bound")
