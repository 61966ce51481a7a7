"""
Scattering on a web graph
=========================

Builds Jost solutions, the transfer-type matrix ``T(theta)`` and the
scattering matrix ``S(theta)`` for a three-vertex core with two channels, then
checks the reflection identity and the eigenfunction equation.
"""

from fractions import Fraction

import numpy as np

from graphschro.graph_model import ChannelSpec, WebGraph, validate_finite_graph
from graphschro.scattering import (
    eigenfunction,
    eigenfunction_residual,
    jost_solution,
    scattering_at,
    singular_set,
)

core = validate_finite_graph([[3.0, -1.0, 0.0], [-1.0, 2.5, -0.5], [0.0, -0.5, 3.5]])
left = ChannelSpec(0, 2, (Fraction(5, 2), Fraction(3)), (Fraction(4, 5), Fraction(3, 2)))
right = ChannelSpec(2, 0)
web = WebGraph(core, (left, right))

# Jost solutions are Laurent polynomials in theta, exact for rational data.
jost = jost_solution(left)
for k in range(4):
    print(f"e({k}, theta) = {jost.poly(k)}")
print("recurrence residual at k=1:", jost.residual(1))

# Parameters where lambda(theta) hits a core eigenvalue are excluded.
print("singular set:", np.round(singular_set(web).thetas, 4))

# S is unitary on |theta| = 1 only; the middle sample sits at radius 0.9.
for theta in (0.6 + 0.8j, 0.9 * np.exp(0.7j), np.exp(2.1j)):
    sc = scattering_at(web, theta)
    back = scattering_at(web, 1 / theta)
    defect = np.max(np.abs(sc.S @ back.S - np.eye(2)))
    phi = eigenfunction(web, theta, [1.0, 0.0], depth=12, scat=sc)
    res = eigenfunction_residual(web, phi)
    print(
        f"theta={theta:.3f}  cond T={sc.cond:7.2f}  |S S(1/theta) - I|={defect:.1e}"
        f"  residual={res['equation']:.1e}  unitarity defect={sc.unitarity_defect():.1e}"
    )
