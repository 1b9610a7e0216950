"""Growth profile f_d of the upper bound and the integral that drives its induction.

The step from dimension d to d + 1 involves int_2^{4X} f_d(t) t^(-d/2 - 1) dt:
bounded when d = 0 or 1 mod 4, logarithmic when d = 3 mod 4.
"""
from nearint.profile import bound_profile, recursion_integral

print(" d  f_d(X)              I(1e3)       I(1e6)       I(1e9)")
for d in range(1, 13):
    vals = [recursion_integral(d, X) for X in (1e3, 1e6, 1e9)]
    print(f"{d:2d}  {str(bound_profile(d)):18s}" + "".join(f"{v:12.5g} " for v in vals))
