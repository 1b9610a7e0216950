"""Lift {1, ..., M} into R^4 so that every distance has integer part |n - n'|.

A midpoint-displacement curve in R^3 behaves like |s - t|^(1/2).  Adding
lambda * phi(n) as three extra coordinates to the integer n pushes each
distance |n - n'| up by a fraction in (delta, 1 - delta) once lambda is tuned
to the curve's measured bilipschitz constants.
"""
import math

import numpy as np

from nearint.geometry import pairwise_verify
from nearint.snowflake import DEFAULT_ETA_SWEEP, build_snowflake_curve, snowflake_lift, sweep_eta

M, levels = 64, 20
print("eta sweep (delta_phi = 2c^2 / (3C^2 + 2c^2) on all pairs of {0..M}):")
results = sweep_eta(M, levels, DEFAULT_ETA_SWEEP)
for eta, dphi in results:
    print(f"  eta = {eta:6.3f}  delta_phi = {dphi:.5f}")
eta = max(results, key=lambda r: r[1])[0]

curve = build_snowflake_curve(levels, eta)
S, p = snowflake_lift(M, curve)
print(f"\nchosen eta = {eta:.3g}: c = {p.c_emp:.4f}, C = {p.C_emp:.4f}, delta_phi = {p.delta_phi:.5f}")
lo, hi = p.lambda_interval
print(f"lambda = {p.lam:.4f} (admissible interval [{lo:.4f}, {hi:.4f}])")

rep = pairwise_verify(S, p.delta)
print("\ncertified floating-point verification:")
print(rep.summary())

X = S.coords
fracs = [np.linalg.norm(X[i] - X[j]) - (j - i) for i in range(M) for j in range(i + 1, M)]
print(f"\nfractional parts lie in [{min(fracs):.4f}, {max(fracs):.4f}]")
print(f"max norm {np.linalg.norm(X, axis=1).max():.3f} <= sqrt(M^2 + 2M) = {math.sqrt(M * M + 2 * M):.3f}")
