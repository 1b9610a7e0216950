"""Point sets whose pairwise distances avoid near-integers.

Exact and certified verification, explicit constructions in dimensions 3 and
4, Fourier-side certificates behind the upper bounds, and brute-force oracles.
"""

from .bessel import besselj
from .certificates import (Infeasible, TrigCertificate, certify_negative_polynomial,
                           check_certificate, lebesgue_witness_check)
from .constructions import (ConstructionParams, build_sarkozy3d, choose_params,
                            window_check_euclid, window_check_lp)
from .errors import (CalibrationError, CapExceededError, DegenerateCurveError, DomainError,
                     NearIntError, PreconditionError)
from .geometry import (EXACT, FLOAT, NormSpec, Point, PointSet, VerificationReport, distance,
                       frac_gap, pairwise_verify, sqrt_gap_at_least)
from .oracles import (greedy_valid_subset, max_valid_subset, random_valid_set,
                      slab_project_check, torus_bound_check)
from .profile import BoundProfile, bound_profile, recursion_integral
from .snowflake import (LiftParams, SnowflakeCurve, build_snowflake_curve, empirical_bilipschitz,
                        rescale_curve, snowflake_lift)
from .spherical import bessel_energy, spherical_constant

__all__ = [
    "BoundProfile", "CalibrationError", "CapExceededError", "ConstructionParams",
    "DegenerateCurveError", "DomainError", "EXACT", "FLOAT", "Infeasible", "LiftParams",
    "NearIntError", "NormSpec", "Point", "PointSet", "PreconditionError", "SnowflakeCurve",
    "TrigCertificate", "VerificationReport", "bessel_energy", "besselj", "bound_profile",
    "build_sarkozy3d", "build_snowflake_curve", "certify_negative_polynomial",
    "check_certificate", "choose_params", "distance", "empirical_bilipschitz", "frac_gap",
    "greedy_valid_subset", "lebesgue_witness_check", "max_valid_subset", "pairwise_verify",
    "random_valid_set", "recursion_integral", "rescale_curve", "slab_project_check",
    "snowflake_lift", "spherical_constant", "sqrt_gap_at_least", "torus_bound_check",
    "window_check_euclid", "window_check_lp",
]
