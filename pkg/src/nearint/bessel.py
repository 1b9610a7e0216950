"""Bessel functions of the first kind for the small orders used here.

Power series below ``SERIES_CUTOFF``, Hankel's asymptotic expansion above.
For ``0 <= nu <= 4`` the two branches meet with absolute error around
``1e-12`` relative to the envelope ``sqrt(2 / (pi x))``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

SERIES_CUTOFF = 14.0
MAX_ORDER = 4.0
_SERIES_TERMS = 80
_HANKEL_TERMS = 60


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not 0 <= nu <= MAX_ORDER:
        raise DomainError(f"order nu must lie in [0, {MAX_ORDER}], got {nu}")
    return nu


def _series(nu: float, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    term = np.power(half, nu) / math.gamma(nu + 1)
    total = term.copy()
    q = -half * half
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + nu))
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _hankel_pq(nu: float, x: np.ndarray):
    mu = 4.0 * nu * nu
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    live = np.ones(x.shape, dtype=bool)
    for k in range(1, _HANKEL_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        # Stop each entry at its smallest term: the series is divergent.
        live &= mag < prev
        prev = np.where(live, mag, prev)
        if not live.any():
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        contrib = np.where(live, sign * term, 0.0)
        if k % 2 == 0:
            P += contrib
        else:
            Q += contrib
        if np.all(mag[live] < 1e-17):
            break
    return P, Q


def _hankel(nu: float, x: np.ndarray) -> np.ndarray:
    P, Q = _hankel_pq(nu, x)
    chi = x - (2 * nu + 1) * math.pi / 4
    return np.sqrt(2.0 / (math.pi * x)) * (P * np.cos(chi) - Q * np.sin(chi))


def besselj(nu: float, x):
    """``J_nu(x)`` for ``0 <= nu <= 4`` and ``x >= 0`` (scalar or array)."""
    nu = _check_order(nu)
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("besselj needs finite nonnegative arguments")
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    small = flat < SERIES_CUTOFF
    if small.any():
        out[small] = _series(nu, flat[small])
    if (~small).any():
        out[~small] = _hankel(nu, flat[~small])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def bessel_leading_asymptotic(nu: float, x):
    """Leading Hankel term ``sqrt(2/(pi x)) cos(x - (2 nu + 1) pi / 4)``."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(2.0 / (math.pi * x)) * np.cos(x - (2 * nu + 1) * math.pi / 4)
