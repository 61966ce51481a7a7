"""
Fast decay along a channel cannot persist
=========================================

Starts the evolution with data that decay like ``(e / ((2 + eps) k))**k``
along a free channel and checks the same bound one time unit later.  The bound
breaks at t = 1, and random admissible data never satisfy it at both times.
"""

import numpy as np

from graphschro.campaigns import canonical_experiment, experiment_campaign

rep = canonical_experiment(N=128, guard=64, eps=1.0)
print("verdict:", rep.verdict, " leakage:", f"{rep.leakage:.1e}")
print(f"type estimate  t=0: {rep.type0.sigma:.4f}   t=1: {rep.type1.sigma:.4f}")
print(" k   log-margin t=0   log-margin t=1   (positive = bound broken)")
for k, m0, m1 in rep.margin_rows(kmax=40):
    if k % 5 == 0 or k < 4:
        print(f"{k:3d} {m0:16.3e} {m1:16.3e}")

reports = experiment_campaign(seed=7, runs=100)
violations = sum(r.verdict == "VIOLATION" for r in reports)
broken = np.array([not r.check1.holds for r in reports])
print(f"\n{len(reports)} random runs, {violations} violations, bound broken at t=1 in {broken.sum()}")
