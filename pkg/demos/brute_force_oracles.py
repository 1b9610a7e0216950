"""Small exact searches and the two elementary lemmas, run on random data.

On the line a valid set reduces mod 1 to a delta-separated set on the circle,
so it has at most 1/delta points.  In higher dimension, slicing into slabs of
width delta/2 and flattening each slab keeps the set valid at delta/2.
"""
from fractions import Fraction

import numpy as np

from nearint.geometry import FLOAT, PointSet
from nearint.oracles import (greedy_valid_subset, max_valid_subset, random_valid_set,
                             slab_project_check, torus_bound_check)

delta = Fraction(1, 5)
rng = np.random.default_rng(1)
C = PointSet(rng.uniform(-2, 2, size=(40, 2)), FLOAT)
best = max_valid_subset(C, delta)
greedy = [len(greedy_valid_subset(C, delta, seed=s)) for s in range(10)]
print(f"40 random candidates in the plane, delta = {delta}:")
print(f"  exact maximum valid subset: {len(best)} points {best}")
print(f"  greedy over 10 seeds: {greedy}")

print("\nline sets from the generator never beat 1/delta:")
for num in (10, 15, 25, 40):
    d = Fraction(num, 100)
    sizes = [len(random_valid_set(1, 30, d, 50, seed=s, attempts=4000)) for s in range(5)]
    ok = all(torus_bound_check(random_valid_set(1, 30, d, 50, seed=s, attempts=4000), d)
             for s in range(5))
    print(f"  delta = {float(d):.2f}: sizes {sizes}, bound {int(1 / d)}, torus check {ok}")

S = random_valid_set(3, 5, Fraction(1, 10), 40, seed=3)
print(f"\nslab projection check on a {len(S)}-point set in R^3: {slab_project_check(S, Fraction(1, 10))}")
