"""Midpoint-displacement snowflake curve and the lift of an integer distance set.

The curve ``phi: [0, 1] -> R^3`` starts from the segment ``(0,0,0) -> (1,0,0)``.
Refining level ``n -> n+1`` places each new dyadic midpoint at the average of
its two neighbours plus ``eta * 2^(-(n+1)/2)`` times a unit vector orthogonal
to the segment.  Displacements shrinking like ``2^(-n/2)`` make the curve
behave like the snowflake metric ``|s - t|^(1/2)``.  The bilipschitz
constants are not claimed globally: they are measured on exactly the
parameter pairs the lift uses, which is all the lift needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DegenerateCurveError, DomainError, PreconditionError
from .geometry import FLOAT, PointSet

MAX_LEVELS = 28
# Deeper curves are evaluated by descent instead of a full table.
MAX_TABLE_LEVELS = 22
DEFAULT_ETA = 0.5
DEFAULT_ETA_SWEEP = tuple(float(e) for e in np.geomspace(0.05, 2.0, 10))


def _orthonormal_frame(v: np.ndarray):
    """Two unit vectors spanning the plane orthogonal to each row of ``v``.

    Component arithmetic is written out so that a row gets bit-identical
    results whether it is processed alone or inside a batch.
    """
    norm = np.sqrt(v[:, 0] * v[:, 0] + v[:, 1] * v[:, 1] + v[:, 2] * v[:, 2])
    if np.any(norm == 0):
        raise DegenerateCurveError("zero-length segment while refining the curve")
    w = v / norm[:, None]
    helper = np.zeros_like(w)
    helper[np.arange(len(w)), np.argmin(np.abs(w), axis=1)] = 1.0
    dot = helper[:, 0] * w[:, 0] + helper[:, 1] * w[:, 1] + helper[:, 2] * w[:, 2]
    e1 = helper - dot[:, None] * w
    e1 = e1 / np.sqrt(e1[:, 0] * e1[:, 0] + e1[:, 1] * e1[:, 1] + e1[:, 2] * e1[:, 2])[:, None]
    e2 = np.stack([
        w[:, 1] * e1[:, 2] - w[:, 2] * e1[:, 1],
        w[:, 2] * e1[:, 0] - w[:, 0] * e1[:, 2],
        w[:, 0] * e1[:, 1] - w[:, 1] * e1[:, 0],
    ], axis=1)
    return e1, e2


def _midpoints(a: np.ndarray, b: np.ndarray, n: int, eta: float) -> np.ndarray:
    """Values inserted at refinement step ``n -> n + 1`` between rows of a and b."""
    mid = (a + b) * 0.5
    if eta == 0:
        return mid
    e1, e2 = _orthonormal_frame(b - a)
    u = e1 if n % 2 == 0 else e2
    return mid + (eta * 2.0 ** (-(n + 1) / 2)) * u


@dataclass
class SnowflakeCurve:
    levels: int
    eta: float
    values: np.ndarray | None = None
    c_emp: float | None = None
    C_emp: float | None = None
    delta_phi: float | None = None

    @property
    def size(self) -> int:
        return 2**self.levels + 1

    def at_index(self, j) -> np.ndarray:
        """Curve values at dyadic parameters ``j / 2^levels``."""
        j = np.atleast_1d(np.asarray(j, dtype=np.int64))
        if np.any((j < 0) | (j > 2**self.levels)):
            raise DomainError("dyadic index out of range")
        if self.values is not None:
            return self.values[j]
        return _descend(j, self.levels, self.eta)


def _descend(j: np.ndarray, levels: int, eta: float) -> np.ndarray:
    """Evaluate the curve at dyadic indices without building the table."""
    n_pts = len(j)
    a = np.zeros((n_pts, 3))
    b = np.zeros((n_pts, 3))
    b[:, 0] = 1.0
    lo = np.zeros(n_pts, dtype=np.int64)
    width = np.int64(2**levels)
    out = np.empty((n_pts, 3))
    done = np.zeros(n_pts, dtype=bool)
    out[j == 0] = 0.0
    out[j == width] = (1.0, 0.0, 0.0)
    done |= (j == 0) | (j == width)
    for n in range(levels):
        active = ~done
        if not active.any():
            break
        half = width >> (n + 1)
        mid_idx = lo + half
        mid = np.empty((n_pts, 3))
        mid[active] = _midpoints(a[active], b[active], n, eta)
        hit = active & (j == mid_idx)
        out[hit] = mid[hit]
        done |= hit
        left = active & ~hit & (j < mid_idx)
        right = active & ~hit & (j > mid_idx)
        b[left] = mid[left]
        a[right] = mid[right]
        lo[right] = mid_idx[right]
    return out


def build_snowflake_curve(levels: int, eta: float = DEFAULT_ETA) -> SnowflakeCurve:
    """Refine the displacement scheme ``levels`` times.

    Up to ``MAX_TABLE_LEVELS`` the full table of ``2^levels + 1`` values is
    stored; deeper curves keep no table and evaluate by descent.
    """
    if isinstance(levels, bool) or not isinstance(levels, (int, np.integer)) \
            or not 1 <= levels <= MAX_LEVELS:
        raise DomainError(f"levels must be an integer in [1, {MAX_LEVELS}], got {levels!r}")
    eta = float(eta)
    if not math.isfinite(eta) or eta < 0:
        raise DomainError(f"eta must be a finite nonnegative number, got {eta}")
    levels = int(levels)
    if levels > MAX_TABLE_LEVELS:
        return SnowflakeCurve(levels, eta)
    vals = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    for n in range(levels):
        mids = _midpoints(vals[:-1], vals[1:], n, eta)
        refined = np.empty((2 * len(vals) - 1, 3))
        refined[0::2] = vals
        refined[1::2] = mids
        vals = refined
    return SnowflakeCurve(levels, eta, vals)


def rescale_curve(curve: SnowflakeCurve, M: int, xs=None) -> dict:
    """Recentred, rescaled curve ``sqrt(2M) [phi(x/2M + 1/2) - phi(1/2)]``.

    Evaluated at the integers ``xs`` (default ``0..M``) in ``[-M, M]``.
    Parameters that are not dyadic at the curve's depth are linearly
    interpolated between the two neighbouring table entries.
    """
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 1:
        raise DomainError(f"M must be a positive integer, got {M!r}")
    M = int(M)
    scale = 2**curve.levels
    if scale < 2 * M:
        need = math.ceil(math.log2(2 * M))
        raise PreconditionError(
            f"curve depth {curve.levels} is too shallow for M={M}; refine to at least {need} levels")
    xs = list(range(0, M + 1)) if xs is None else [int(x) for x in xs]
    if any(abs(x) > M for x in xs):
        raise DomainError(f"parameters must lie in [-{M}, {M}]")
    lo_idx, hi_idx, weight = [], [], []
    for x in xs:
        pos = (Fraction(x, 2 * M) + Fraction(1, 2)) * scale
        j0 = math.floor(pos)
        lo_idx.append(j0)
        hi_idx.append(min(j0 + 1, scale))
        weight.append(float(pos - j0))
    lo_v = curve.at_index(lo_idx)
    w = np.asarray(weight)[:, None]
    vals = lo_v.copy()
    frac = w[:, 0] > 0
    if frac.any():
        hi_v = curve.at_index(np.asarray(hi_idx)[frac])
        vals[frac] = (1 - w[frac]) * lo_v[frac] + w[frac] * hi_v
    center = curve.at_index([scale // 2])[0]
    root = math.sqrt(2 * M)
    out = {}
    for x, v in zip(xs, vals):
        out[x] = np.zeros(3) if x == 0 else root * (v - center)
    return out


class Bilipschitz(NamedTuple):
    c_emp: float
    C_emp: float
    delta_phi: float


def delta_phi_from(c: float, C: float) -> float:
    return 2 * c * c / (3 * C * C + 2 * c * c)


def empirical_bilipschitz(values: dict, pairs=None) -> Bilipschitz:
    """Extreme ratios ``|phi(s) - phi(t)| / |s - t|^(1/2)`` over ``pairs``.

    ``pairs`` defaults to every unordered pair of keys of ``values``.
    """
    keys = sorted(values)
    if pairs is None:
        pairs = [(keys[i], keys[j]) for i in range(len(keys)) for j in range(i + 1, len(keys))]
    pairs = list(pairs)
    if not pairs:
        raise DomainError("need at least one parameter pair")
    if any(s == t for s, t in pairs):
        raise DomainError("pairs must join distinct parameters")
    P = np.array([values[s] for s, _ in pairs], dtype=float)
    Q = np.array([values[t] for _, t in pairs], dtype=float)
    gaps = np.array([abs(float(s) - float(t)) for s, t in pairs])
    ratios = np.linalg.norm(P - Q, axis=1) / np.sqrt(gaps)
    c, C = float(ratios.min()), float(ratios.max())
    if c <= 0:
        raise DegenerateCurveError("lower bilipschitz constant is zero on the sampled pairs")
    return Bilipschitz(c, C, delta_phi_from(c, C))


@dataclass(frozen=True)
class LiftParams:
    M: int
    lam: float
    delta: float
    c_emp: float
    C_emp: float
    delta_phi: float

    @property
    def lambda_interval(self) -> tuple:
        return (math.sqrt(3 * self.delta) / self.c_emp,
                math.sqrt(2 * (1 - self.delta)) / self.C_emp)

    @property
    def radius(self) -> float:
        return math.sqrt(self.M**2 + 2 * self.M)


def measure_curve(curve: SnowflakeCurve, M: int) -> SnowflakeCurve:
    """Copy of ``curve`` carrying constants measured on all pairs of {0..M}."""
    c, C, dphi = empirical_bilipschitz(rescale_curve(curve, M))
    return replace(curve, c_emp=c, C_emp=C, delta_phi=dphi)


def snowflake_lift(M: int, curve: SnowflakeCurve, delta=None):
    """Lift ``{1, ..., M}`` to ``{(n, lam * phi~(n))}`` in R^4.

    ``delta=None`` uses the largest admissible value, the measured
    ``delta_phi``.  ``lam`` is the left end ``sqrt(3 delta) / c_emp`` of the
    admissible interval.  Returns ``(points, params)``.
    """
    table = rescale_curve(curve, M)
    c, C, dphi = empirical_bilipschitz(table)
    d = dphi if delta is None else float(delta)
    if not 0 < d < 0.5:
        raise DomainError(f"delta must lie in (0, 1/2), got {d}")
    if d > dphi:
        raise PreconditionError(
            f"delta={d} exceeds the achievable delta_phi={dphi!r} for this curve and M={M}")
    lam = math.sqrt(3 * d) / c
    rows = [(float(n), *(lam * table[n])) for n in range(1, M + 1)]
    params = LiftParams(M, lam, d, c, C, dphi)
    S = PointSet(rows, FLOAT, radius_bound=params.radius)
    return S, params


def sweep_eta(M: int, levels: int, etas=DEFAULT_ETA_SWEEP) -> list:
    """``(eta, delta_phi)`` for each eta; degenerate curves score zero."""
    out = []
    for eta in etas:
        try:
            dphi = measure_curve(build_snowflake_curve(levels, eta), M).delta_phi
        except DegenerateCurveError:
            dphi = 0.0
        out.append((float(eta), dphi))
    return out


def best_eta(M: int, levels: int, etas=DEFAULT_ETA_SWEEP) -> float:
    results = sweep_eta(M, levels, etas)
    eta, dphi = max(results, key=lambda r: (r[1], -r[0]))
    if dphi <= 0:
        raise DegenerateCurveError("every eta in the sweep gave a degenerate curve")
    return eta
