"""Search for cosine sums that stay negative on I_delta = [2 pi delta, 2 pi (1 - delta)].

T(x) = sum c_k cos(k x - ell pi / 4) with c_k >= 0, sum c_k = 1.  A linear
program finds the most negative such T on a grid; a finer grid plus the
derivative bound |T'| <= sum k c_k turns that into a statement about the whole
interval.  When ell = 2 mod 4 no such T exists: each term integrates to zero
over I_delta, so the LP margin collapses to zero.
"""
from fractions import Fraction

from nearint.certificates import (Infeasible, certify_negative_polynomial, check_certificate,
                                  lebesgue_witness_check)

delta = Fraction(1, 10)
for ell in range(1, 9):
    res = certify_negative_polynomial(delta, ell)
    if isinstance(res, Infeasible):
        witness = lebesgue_witness_check(delta, ell, 64)
        print(f"ell = {ell}: no certificate (best grid margin {res.best_margin:.1e}); "
              f"uniform measure kills every term: {witness}")
    else:
        print(f"ell = {ell}: degree {res.degree:2d}, T <= -{res.margin:.3e} on I_delta, "
              f"D = {res.derivative_bound:.2f}, independently rechecked: {check_certificate(res)}")
