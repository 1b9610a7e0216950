"""Digit-expansion construction in R^3 and the interval window lemmas.

Every pair of points of the 3D construction differs by a vector ``(b, c, a)``
with ``a`` a positive integer and ``b^2 + c^2`` comparable to ``a``; the
window lemma then pins ``sqrt(a^2 + b^2 + c^2)`` strictly between
``a + delta`` and ``a + 1 - delta``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import CapExceededError, DomainError, PreconditionError
from .geometry import EXACT, Point, PointSet, as_rational, check_delta

# Largest delta the 3D construction accepts: 1 / (48 * 3^5).
MAX_DELTA_3D = Fraction(1, 48 * 3**5)
DEFAULT_POINT_CAP = 10**7

_HP_DIGITS = 60


def _positive_int(a, name="a") -> int:
    if isinstance(a, bool) or not isinstance(a, int) or a < 1:
        raise DomainError(f"{name} must be a positive integer, got {a!r}")
    return a


def window_check_euclid(a: int, r, delta) -> bool:
    """Return whether ``3 delta <= r / a <= 2 (1 - delta)``.

    When the window holds, the conclusion ``a + delta < sqrt(a^2 + r) <
    a + 1 - delta`` is re-derived in exact rational arithmetic and a
    ``RuntimeError`` is raised if it ever fails.
    """
    a = _positive_int(a)
    d = check_delta(delta)
    r = as_rational(r)
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    ratio = r / a
    inside = 3 * d <= ratio <= 2 * (1 - d)
    if inside:
        s = a * a + r
        if not (a + d) ** 2 < s < (a + 1 - d) ** 2:
            raise RuntimeError(f"window conclusion failed for a={a}, r={r}, delta={d}")
    return inside


def lp_window(p, a: int, delta) -> tuple:
    """Bounds ``(lo, hi)`` with the window reading ``lo <= r <= hi``."""
    a = _positive_int(a)
    d = check_delta(delta)
    p_rat = as_rational(p)
    if p_rat <= 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if p_rat.denominator == 1:
        e = int(p_rat) - 1
        lo = p_rat * d * Fraction(3, 2) ** e * a**e
        hi = p_rat * (1 - d) * a**e
        return lo, hi
    with mpmath.workdps(_HP_DIGITS):
        pm = mpmath.mpf(p_rat.numerator) / p_rat.denominator
        dm = mpmath.mpf(d.numerator) / d.denominator
        scale = mpmath.mpf(a) ** (pm - 1)
        return pm * dm * mpmath.mpf(1.5) ** (pm - 1) * scale, pm * (1 - dm) * scale


def lp_gap(p, a: int, r) -> mpmath.mpf:
    """``||(a^p + r)^(1/p)||`` evaluated with 60 significant digits."""
    p_rat, r_rat = as_rational(p), as_rational(r)
    with mpmath.workdps(_HP_DIGITS):
        pm = mpmath.mpf(p_rat.numerator) / p_rat.denominator
        rm = mpmath.mpf(r_rat.numerator) / r_rat.denominator
        v = (mpmath.mpf(a) ** pm + rm) ** (1 / pm)
        return abs(v - mpmath.nint(v))


def window_check_lp(p, a: int, r, delta) -> bool:
    """l^p analogue of :func:`window_check_euclid`.

    The window is ``p delta (3/2)^(p-1) <= r / a^(p-1) <= p (1 - delta)``.
    Integer ``p`` is handled in exact arithmetic, so ``p = 2`` agrees with
    the Euclidean check bit for bit.
    """
    if as_rational(p) <= 1:
        raise DomainError(f"p must exceed 1, got {p}")
    d = check_delta(delta)
    r_rat = as_rational(r)
    if r_rat <= 0:
        raise DomainError(f"r must be positive, got {r}")
    lo, hi = lp_window(p, a, d)
    if isinstance(lo, Fraction):
        inside = lo <= r_rat <= hi
    else:
        with mpmath.workdps(_HP_DIGITS):
            rm = mpmath.mpf(r_rat.numerator) / r_rat.denominator
            inside = bool(lo <= rm <= hi)
    if inside:
        with mpmath.workdps(_HP_DIGITS):
            margin = lp_gap(p, a, r_rat) - mpmath.mpf(d.numerator) / d.denominator
            if not margin > mpmath.mpf(10) ** (-40):
                raise RuntimeError(f"l^p window conclusion failed for p={p}, a={a}, r={r}")
    return inside


@dataclass(frozen=True)
class ConstructionParams:
    X: Fraction
    delta: Fraction
    k: int
    t: int

    @property
    def count(self) -> int:
        return (self.k - 1) ** (2 * (self.t + 1))

    @property
    def radius(self) -> int:
        """Radius ``16 k^(2t+4)`` that the construction is guaranteed to fit in."""
        return 16 * self.k ** (2 * self.t + 4)

    def lower_bound(self) -> float:
        """``delta^(6/5) X^(1 - 6 delta^(1/5))``, the guaranteed count floor."""
        with mpmath.workdps(30):
            d = mpmath.mpf(self.delta.numerator) / self.delta.denominator
            X = mpmath.mpf(self.X.numerator) / self.X.denominator
            return float(d ** mpmath.mpf(1.2) * X ** (1 - 6 * d ** mpmath.mpf(0.2)))

    def guarantees(self) -> dict:
        """The derived inequalities, each evaluated exactly."""
        k, t, d, X = self.k, self.t, self.delta, self.X
        return {
            "k_defining": Fraction(1, 48 * (k + 1) ** 5) < d <= Fraction(1, 48 * k**5),
            "t_defining": 16 * k ** (2 * t + 4) <= X < 16 * k ** (2 * t + 6),
            "k_pow_2t_exceeds_X_over_16k6": k ** (2 * t) > X / (16 * k**6),
            # k > delta^(-1/5) / 3  <=>  (3k)^5 delta > 1
            "k_exceeds_delta_root": (3 * k) ** 5 * d > 1,
            "k_at_least_3": k >= 3,
            "X_at_least_inverse_delta": X >= 1 / d,
        }


def choose_params(X, delta) -> ConstructionParams:
    """Pick the unique ``(k, t)`` for the 3D construction.

    ``k`` satisfies ``1/(48 (k+1)^5) < delta <= 1/(48 k^5)`` and ``t`` is the
    nonnegative integer with ``16 k^(2t+4) <= X < 16 k^(2t+6)``.
    """
    d = check_delta(delta)
    X = as_rational(X)
    if d > MAX_DELTA_3D:
        raise PreconditionError(f"delta={d} exceeds the bound 1/(48*3^5) = {MAX_DELTA_3D}")
    if X < 1 / d:
        raise PreconditionError(f"X={X} is below X_0(delta) = 1/delta = {1 / d}")
    k = max(1, int((1 / (48 * float(d))) ** 0.2))
    while 48 * (k + 1) ** 5 * d <= 1:
        k += 1
    while 48 * k**5 * d > 1:
        k -= 1
    t = 0
    while 16 * k ** (2 * (t + 1) + 4) <= X:
        t += 1
    params = ConstructionParams(X, d, k, t)
    assert all(params.guarantees().values()), params.guarantees()
    return params


def digit_point(alpha, beta, k: int) -> Point:
    """The point indexed by base-``k`` digit strings ``alpha`` and ``beta``."""
    if len(alpha) != len(beta):
        raise DomainError("alpha and beta must have the same length")
    if any(not 0 <= v <= k - 2 for v in (*alpha, *beta)):
        raise DomainError(f"digits must lie in 0..{k - 2}")
    x = sum(v * k**i for i, v in enumerate(alpha))
    y = sum(v * k**i for i, v in enumerate(beta))
    z = 8 * (sum(v * k ** (2 * i + 2) for i, v in enumerate(alpha))
             + sum(v * k ** (2 * i + 3) for i, v in enumerate(beta)))
    return Point((x, y, z))


def build_sarkozy3d(X, delta, *, cap: int = DEFAULT_POINT_CAP):
    """Materialize the 3D digit-expansion set as an exact lattice point set.

    Returns ``(points, params)``.  Raises :class:`CapExceededError` (carrying
    the would-be count) instead of enumerating more than ``cap`` points.
    """
    params = choose_params(X, delta)
    k, t = params.k, params.t
    if params.count > cap:
        err = CapExceededError(
            f"construction would have (k-1)^(2(t+1)) = {params.count} points, above cap {cap}")
        err.count = params.count
        err.params = params
        raise err
    digits = range(k - 1)
    xs, ys = [], []
    for seq in itertools.product(digits, repeat=t + 1):
        # product() varies the last position fastest; index i is digit i.
        xs.append((sum(v * k**i for i, v in enumerate(seq)),
                   sum(v * k ** (2 * i + 2) for i, v in enumerate(seq))))
        ys.append((sum(v * k**i for i, v in enumerate(seq)),
                   sum(v * k ** (2 * i + 3) for i, v in enumerate(seq))))
    rows = [(x, y, 8 * (zx + zy)) for x, zx in xs for y, zy in ys]
    S = PointSet(rows, EXACT, radius_bound=params.X)
    return S, params


def pair_window_ratio(p, q) -> tuple:
    """``(a, r)`` for a pair of construction points: z-gap and squared xy-gap."""
    a = abs(p[2] - q[2])
    r = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    return a, r


def count_lower_bound(X, delta) -> float:
    """``delta^(6/5) X^(1 - 6 delta^(1/5))`` without building anything."""
    return choose_params(X, delta).lower_bound()

