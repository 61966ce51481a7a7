"""
Solutions vanishing on a vertex set
===================================

Counts the solutions of ``i u' = L u`` that stay zero on a set ``B`` for two
small hand-built graphs, and compares the count with the bounds built from
clusters and branches.
"""

import numpy as np

from graphschro.campaigns import FOUR_CYCLE_B, TWO_HUB_B, four_cycle_graph, two_hub_graph
from graphschro.dimension import dimension_report, oracle_solution_basis
from graphschro.evolution import Propagator

# A four-cycle with B the two opposite vertices 0 and 2.  The remaining
# vertices 1 and 3 are two branches, both sitting in the clusters of 0 and 2.
cases = {
    "distinct diagonals": four_cycle_graph(1.0, 2.0),
    "equal diagonals, rank-2 couplings": four_cycle_graph(1.0, 1.0, (1.0, 2.0, 3.0, 5.0)),
    "equal diagonals, rank-1 couplings": four_cycle_graph(1.0, 1.0, (1.0, 1.0, 1.0, 1.0)),
}
for name, g in cases.items():
    rep = dimension_report(g, FOUR_CYCLE_B)
    print(f"{name:36s} bounds=({rep.lower:+d},{rep.upper:+d})  exact={rep.exact}  oracle={rep.oracle}")

# In the rank-1 case a solution exists.  It lives on the antisymmetric
# combination of vertices 1 and 3 and never reaches B.
g = cases["equal diagonals, rank-1 couplings"]
v = oracle_solution_basis(g, FOUR_CYCLE_B)[:, 0]
print("kernel vector", np.round(v, 6))
prop = Propagator(g)
for t in (0.25, 0.5, 1.0):
    u = prop(v, t)
    print(f"t={t:4.2f}  |u| on B = {np.max(np.abs(u[sorted(FOUR_CYCLE_B)])):.1e}")

# Two hubs sharing one neighbour.  With all eigenvalues distinct the only
# solution vanishing on both hubs is zero.
rep = dimension_report(two_hub_graph(), TWO_HUB_B)
print()
print(f"two hubs: bounds=({rep.lower:+d},{rep.upper:+d})  exact={rep.exact}")
for cl in rep.census.to_dict()["clusters"]:
    print("  cluster of", cl["root"], "vertices", cl["vertices"], "K =", cl["K"])
for br in rep.census.to_dict()["branches"]:
    print("  branch", br["vertices"], "N =", br["N"], "order =", br["order"])
