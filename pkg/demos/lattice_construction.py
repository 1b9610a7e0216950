"""Build the 256-point lattice set in R^3 and watch every distance dodge the integers.

Digits alpha, beta in {0, 1} (k = 3, four digits each) give x and y; z is a
weighted digit sum chosen so that for every pair the squared horizontal gap r
and vertical gap a satisfy 3 delta <= r/a <= 2(1 - delta).  That pins each
distance sqrt(a^2 + r) strictly between a + delta and a + 1 - delta.
"""
from fractions import Fraction
import itertools
import sys

import numpy as np

from nearint.constructions import build_sarkozy3d, pair_window_ratio
from nearint.geometry import pairwise_verify

X, delta = 10**6, Fraction(1, 20000)
S, params = build_sarkozy3d(X, delta)
print(f"k = {params.k}, t = {params.t}: {len(S)} points, all within radius {params.radius} <= {X}")
print(f"guaranteed floor delta^(6/5) X^(1 - 6 delta^(1/5)) = {params.lower_bound():.3g}")

rep = pairwise_verify(S, delta)
print("\nexact verification (integer arithmetic only):")
print(rep.summary())

P = S.coords.tolist()
ratios = [Fraction(r, a) for a, r in
          (pair_window_ratio(P[i], P[j]) for i, j in itertools.combinations(range(len(P)), 2))]
print(f"\nr/a ranges over [{float(min(ratios)):.3g}, {float(max(ratios)):.3g}]; "
      f"window is [{float(3 * delta):.3g}, {float(2 * (1 - delta)):.3g}]")

i, j = rep.worst_pair
d = np.sqrt(float(sum((a - b) ** 2 for a, b in zip(P[i], P[j]))))
print(f"closest call: points {P[i]} and {P[j]} at distance {d:.6f}")

# y-z projection, the view used for the usual picture of this set
out = sys.argv[1] if len(sys.argv) > 1 else None
if out:
    np.savetxt(out, np.array(P, dtype=float)[:, 1:], fmt="%d", delimiter=",", header="y,z")
    print(f"y-z projection written to {out}")
