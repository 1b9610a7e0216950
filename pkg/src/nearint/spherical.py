"""Fourier transform of the sphere measure and the Bessel pair-sum energy.

For points ``p_1..p_n`` in R^(d+1) and a frequency ``k``,

    int_{S^d} |sum_j exp(2 pi i k <p_j, w>)|^2 dsigma(w)
        = n + C_d k^(-nu) sum_{i != j} r_ij^(-nu) J_nu(2 pi k r_ij),

with ``nu = (d - 1) / 2``.  The left side is nonnegative, which makes the
right side a cheap diagnostic.  ``C_d`` is calibrated by Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import besselj
from .errors import CalibrationError, DomainError
from .geometry import PointSet

DEFAULT_SAMPLES = 10**7
DEFAULT_RADII = (0.25, 0.5, 0.75, 1.0)
_CHUNK = 10**6


def sphere_samples(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """``count`` uniform points on the unit sphere of R^dim."""
    g = rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def transform_model(d: int, radius, k: int = 1) -> np.ndarray:
    """``(k |y|)^(-nu) J_nu(2 pi k |y|)``: the sphere transform without ``C_d``."""
    nu = (d - 1) / 2
    r = np.asarray(radius, dtype=float) * k
    return r ** (-nu) * besselj(nu, 2 * math.pi * r)


@dataclass(frozen=True)
class SphericalFit:
    d: int
    C: float
    stderr: float
    samples: int
    radii: tuple
    residuals: tuple
    residual_stderr: tuple

    def small_radius_limit(self) -> float:
        """``C_d pi^nu / Gamma(nu + 1)``: the model value as ``|y| -> 0``.

        The sphere measure is normalized, so this should be 1.
        """
        nu = (self.d - 1) / 2
        return self.C * math.pi**nu / math.gamma(nu + 1)


def spherical_constant(d: int, *, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                       radii=DEFAULT_RADII, max_sigma: float = 3.0) -> SphericalFit:
    """Fit ``C_d`` to a Monte-Carlo estimate of the sphere transform.

    The transform is real, so we average ``cos(2 pi r <e_1, w>)`` over uniform
    ``w`` for each reference radius and fit ``C`` by least squares against the
    model at the same radii.  Several radii are used because the model
    vanishes at some of them (for ``d = 2`` it is ``sin(2 pi r) / (2 pi r)``).
    Each per-radius residual must stay within ``max_sigma`` standard errors.
    """
    if isinstance(d, bool) or not isinstance(d, int) or not 1 <= d <= 8:
        raise DomainError(f"d must be an integer in [1, 8], got {d!r}")
    if samples < 2:
        raise DomainError("need at least two samples")
    radii = tuple(float(r) for r in radii)
    f = transform_model(d, np.array(radii))
    ff = float(f @ f)
    if ff == 0:
        raise DomainError("model vanishes at every reference radius")
    w = f / ff
    rng = np.random.default_rng(seed)
    nr = len(radii)
    # Running sums of g, g^2, h_i, h_i^2 where g = w . cos(...) estimates C
    # and h_i = cos_i - f_i g is the per-radius residual.
    s_g = s_gg = 0.0
    s_c = np.zeros(nr)
    s_gc = np.zeros(nr)
    s_cc = np.zeros(nr)
    done = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        w1 = sphere_samples(rng, m, d + 1)[:, 0]
        cosines = np.cos(2 * math.pi * np.outer(w1, radii))
        g = cosines @ w
        s_g += g.sum()
        s_gg += g @ g
        s_c += cosines.sum(axis=0)
        s_gc += cosines.T @ g
        s_cc += np.einsum("ij,ij->j", cosines, cosines)
        done += m
    n = float(samples)
    C = s_g / n
    var_g = (s_gg - n * C * C) / (n - 1)
    stderr = math.sqrt(max(var_g, 0.0) / n)
    means = s_c / n
    resid = means - f * C
    # Var(h_i) with h_i = cos_i - f_i g.
    e_hh = (s_cc - 2 * f * s_gc + f * f * s_gg) / n
    var_h = (e_hh - resid**2) * n / (n - 1)
    resid_se = np.sqrt(np.maximum(var_h, 0.0) / n)
    fit = SphericalFit(d, C, stderr, samples, radii, tuple(resid), tuple(resid_se))
    bad = np.abs(resid) > max_sigma * np.maximum(resid_se, 1e-300)
    if bad.any():
        raise CalibrationError(
            f"C_{d} fit residuals exceed {max_sigma} standard errors at radii "
            f"{[r for r, b in zip(radii, bad) if b]}")
    return fit


def _pair_distances(S: PointSet) -> np.ndarray:
    X = np.asarray(S.coords, dtype=float)
    i, j = np.triu_indices(len(X), 1)
    return np.linalg.norm(X[i] - X[j], axis=1)


def bessel_energy(S: PointSet, k: int, C_d: float, d: int | None = None) -> float:
    """Right-hand side of the sphere identity for frequency ``k``.

    ``d`` defaults to ``S.dim - 1`` (the sphere sits in the ambient space of
    the points).  Pair terms are accumulated with ``math.fsum``.
    """
    n = len(S)
    if n < 1:
        raise DomainError("bessel_energy needs a nonempty point set")
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    d = S.dim - 1 if d is None else d
    if d < 1 or d + 1 != S.dim:
        raise DomainError(f"points in R^{S.dim} need sphere parameter d = {S.dim - 1}")
    if n == 1:
        return 1.0
    nu = (d - 1) / 2
    r = _pair_distances(S)
    if np.any(r == 0):
        raise DomainError("coincident points have no defined pair term")
    terms = r ** (-nu) * besselj(nu, 2 * math.pi * k * r)
    return n + C_d * k ** (-nu) * 2 * math.fsum(terms.tolist())


def energy_monte_carlo(S: PointSet, k: int, *, samples: int = 200_000, seed: int = 0):
    """Direct Monte-Carlo estimate of ``int |A_k(w)|^2 dsigma`` and its standard error."""
    X = np.asarray(S.coords, dtype=float)
    rng = np.random.default_rng(seed)
    vals = []
    done = 0
    while done < samples:
        m = min(50_000, samples - done)
        w = sphere_samples(rng, m, S.dim)
        phase = 2 * math.pi * k * (w @ X.T)
        A = np.exp(1j * phase).sum(axis=1)
        vals.append(np.abs(A) ** 2)
        done += m
    v = np.concatenate(vals)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v)))
