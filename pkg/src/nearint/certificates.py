"""Linear-programming certificates for uniformly negative cosine sums.

We look for ``T(x) = sum_k c_k cos(k x - ell pi / 4)`` with ``c_k >= 0`` and
``sum c_k = 1`` that stays below ``-A < 0`` on ``I_delta = [2 pi delta,
2 pi (1 - delta)]``.  The LP maximizes the margin on a finite grid; the
continuum claim comes from a uniform evaluation grid of step ``h`` and the
derivative bound ``|T'| <= D = sum k c_k``, so ``max_I T <= grid max +
D h / 2``.  For ``ell = 2 (mod 4)`` no such polynomial exists (Lebesgue
measure on ``I_delta`` integrates every term to zero) and the LP margin
collapses to zero.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import linprog

from .errors import DomainError, NearIntError
from .geometry import check_delta

DEGREE_SCHEDULE = (4, 8, 16, 32, 64)
# LP margins at or below this count as "no polynomial found".
INFEASIBLE_TOL = 1e-8
# Allowance for double-precision rounding in grid evaluation of T.
EVAL_ALLOWANCE = 1e-12
LP_GRID_CAP = 2**16
EVAL_GRID_CAP = 2**25
# Target D h / 2 <= A / STABILITY so the margin barely moves when h halves.
STABILITY = 10
_FFT_LEN = 2**16


class LPSolverError(NearIntError, RuntimeError):
    """The LP backend failed to return an optimum."""


@dataclass
class TrigCertificate:
    delta: Fraction
    ell: int
    coeffs: np.ndarray
    margin: float
    grid_step: float
    derivative_bound: float
    meta: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def __call__(self, x):
        return trig_eval(self.coeffs, self.ell, x)


@dataclass
class Infeasible:
    delta: Fraction
    ell: int
    best_margin: float
    degrees_tried: tuple
    meta: dict = field(default_factory=dict)


def phase(ell: int) -> float:
    return ell * math.pi / 4


def trig_eval(coeffs, ell: int, x) -> np.ndarray:
    """Direct evaluation of ``sum_k c_k cos(k x - ell pi / 4)``."""
    c = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    k = np.arange(1, len(c) + 1)
    return np.cos(np.multiply.outer(x, k) - phase(ell)) @ c


def _grid_max(coeffs, ell: int, x0: float, N: int, count: int, top: int = 0):
    """Max of T over ``x0 + j * 2 pi / N`` for ``0 <= j < count``.

    Evaluated as interleaved length-Q FFTs, so memory stays at O(batch * Q)
    for any N.  With ``top > 0`` also returns the indices of the largest
    values seen (for spot checks).
    """
    c = np.asarray(coeffs, dtype=float)
    m = len(c)
    Q = min(N, _FFT_LEN)
    while Q <= m:
        Q *= 2
    if N % Q:
        raise ValueError("grid size must be a multiple of the FFT length")
    P = N // Q
    h = 2 * math.pi / N
    k = np.arange(1, m + 1)
    base = c * np.exp(-1j * phase(ell))
    best = -np.inf
    cand = []
    batch = max(1, 2**22 // Q)
    q_idx = np.arange(Q)
    for p0 in range(0, P, batch):
        ps = np.arange(p0, min(P, p0 + batch))
        a = np.zeros((len(ps), Q), dtype=complex)
        a[:, 1:m + 1] = base * np.exp(1j * np.outer(x0 + ps * h, k))
        # v[p, q] = T(x0 + (p + P q) h)
        v = (np.fft.ifft(a, axis=1) * Q).real
        j = ps[:, None] + P * q_idx[None, :]
        v[j >= count] = -np.inf
        bmax = float(v.max())
        best = max(best, bmax)
        if top:
            rows = np.argmax(v, axis=1)
            r = np.arange(len(ps))
            cand.extend(zip(v[r, rows].tolist(), j[r, rows].tolist()))
    if top:
        cand.sort(reverse=True)
        return best, [jj for _, jj in cand[:top]]
    return best


def _interval_grid(delta: Fraction, N: int):
    """Start, point count and step of the uniform grid covering I_delta."""
    x0 = 2 * math.pi * float(delta)
    h = 2 * math.pi / N
    length = 2 * math.pi * (1 - 2 * float(delta))
    count = int(math.floor(length / h)) + 1
    return x0, count, h


def grid_max_on_interval(coeffs, ell: int, delta, N: int) -> float:
    """Max of T over the step-``2 pi / N`` grid on I_delta plus its right end."""
    d = check_delta(delta)
    x0, count, _ = _interval_grid(d, N)
    g = _grid_max(coeffs, ell, x0, N, count)
    end = float(trig_eval(coeffs, ell, 2 * math.pi * (1 - float(d))))
    return max(g, end)


def _solve_lp(delta: Fraction, ell: int, m: int, n_grid: int):
    x = np.linspace(2 * math.pi * float(delta), 2 * math.pi * (1 - float(delta)), n_grid)
    k = np.arange(1, m + 1)
    G = np.cos(np.outer(x, k) - phase(ell))
    # Variables c_1..c_m, A.  Maximize A s.t. G c + A <= 0, sum c = 1, c >= 0.
    obj = np.zeros(m + 1)
    obj[-1] = -1.0
    A_ub = np.hstack([G, np.ones((n_grid, 1))])
    A_eq = np.concatenate([np.ones(m), [0.0]])[None, :]
    res = linprog(obj, A_ub=A_ub, b_ub=np.zeros(n_grid), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * m + [(None, None)], method="highs")
    if res.status != 0:
        raise LPSolverError(f"LP solve failed: {res.message}")
    c = np.clip(res.x[:m], 0.0, None)
    c /= c.sum()
    return float(res.x[-1]), c


def _next_pow2(v: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(v, 1.0))))


def _schedule(max_degree: int):
    sched = [m for m in DEGREE_SCHEDULE if m <= max_degree]
    if not sched or sched[-1] != max_degree:
        sched.append(max_degree)
    return sched


def certify_negative_polynomial(delta, ell: int, max_degree: int = 64,
                                grid_points: int | None = None):
    """Search for a negativity certificate, raising the degree as needed.

    Degrees follow ``4, 8, 16, 32, 64`` (capped at ``max_degree``).  At each
    degree the LP grid starts at ``max(grid_points, 64 m)`` points and is
    doubled while the evaluated continuum margin comes out nonpositive.
    Returns a :class:`TrigCertificate`, or :class:`Infeasible` with the best
    LP grid margin seen.
    """
    d = check_delta(delta)
    if isinstance(ell, bool) or not isinstance(ell, int) or ell < 1:
        raise DomainError(f"ell must be a positive integer, got {ell!r}")
    if max_degree < 1:
        raise DomainError("max_degree must be at least 1")
    if grid_points is not None and grid_points < 2 * max_degree:
        raise DomainError("grid_points must be at least twice the degree")
    t0 = time.perf_counter()
    best = -math.inf
    tried = []
    for m in _schedule(max_degree):
        tried.append(m)
        n_lp = max(grid_points or 0, 64 * m, 256)
        while True:
            a_lp, c = _solve_lp(d, ell, m, n_lp)
            best = max(best, a_lp)
            if a_lp <= INFEASIBLE_TOL:
                break
            D = float(np.arange(1, m + 1) @ c)
            N = max(_next_pow2(2 * math.pi * STABILITY * D / a_lp), 4096)
            if N > EVAL_GRID_CAP:
                break
            g = grid_max_on_interval(c, ell, d, N)
            # Refine until the transfer term is small next to the margin, so
            # halving h moves the margin by well under 10%.
            while -g > 0 and D * math.pi / N > -g / (2 * STABILITY) and 2 * N <= EVAL_GRID_CAP:
                N *= 2
                g = grid_max_on_interval(c, ell, d, N)
            h = 2 * math.pi / N
            margin = -g - D * h / 2 - EVAL_ALLOWANCE
            if margin > 0:
                meta = {"lp_grid_points": n_lp, "lp_margin": a_lp, "eval_grid_points": N,
                        "degree_schedule": tuple(tried), "grid_max": g,
                        "wall_time": time.perf_counter() - t0}
                return TrigCertificate(d, ell, c, margin, h, D, meta)
            if 2 * n_lp > LP_GRID_CAP:
                break
            n_lp *= 2
    return Infeasible(d, ell, best, tuple(tried),
                      {"wall_time": time.perf_counter() - t0})


def check_certificate(cert: TrigCertificate, density: int = 2, spot_checks: int = 32) -> bool:
    """Re-verify a certificate without the LP.

    Checks nonnegativity and normalization of the coefficients and the
    derivative bound, then scans T on a grid ``density`` times finer than the
    certificate's and requires ``max T <= -A`` on that grid and ``max T + D h'
    / 2 <= -A / 2`` on the continuum.  The largest grid values are
    re-evaluated with 30-digit arithmetic to confirm the fast evaluator.
    """
    c = np.asarray(cert.coeffs, dtype=float)
    if c.ndim != 1 or len(c) < 1 or not np.all(np.isfinite(c)):
        return False
    if np.any(c < 0) or abs(math.fsum(c.tolist()) - 1) > 1e-9:
        return False
    D_true = math.fsum((k * ck for k, ck in enumerate(c.tolist(), start=1)))
    if not cert.derivative_bound >= D_true * (1 - 1e-12):
        return False
    D = max(float(cert.derivative_bound), D_true)
    A, h = float(cert.margin), float(cert.grid_step)
    if not (A > 0 and h > 0):
        return False
    try:
        d = check_delta(cert.delta)
    except DomainError:
        return False
    N = density * _next_pow2(2 * math.pi / h * (1 - 1e-9))
    x0, count, h_fresh = _interval_grid(d, N)
    if h_fresh > h / density * (1 + 1e-9):
        return False
    g, top = _grid_max(c, cert.ell, x0, N, count, top=spot_checks)
    end = float(trig_eval(c, cert.ell, 2 * math.pi * (1 - float(d))))
    g = max(g, end)
    with mpmath.workdps(30):
        ks = range(1, len(c) + 1)
        ph = mpmath.mpf(cert.ell) * mpmath.pi / 4
        cm = [mpmath.mpf(float(ck)) for ck in c]
        for j in top:
            xj = mpmath.mpf(x0) + j * (2 * mpmath.pi / N)
            hp = mpmath.fsum(ck * mpmath.cos(k * xj - ph) for ck, k in zip(cm, ks))
            if hp > g + EVAL_ALLOWANCE:
                return False
    if g + EVAL_ALLOWANCE > -A:
        return False
    return g + D * h_fresh / 2 + EVAL_ALLOWANCE <= -A / 2


def lebesgue_witness_check(delta, ell: int, k_max: int, tol: float = 1e-12) -> bool:
    """Confirm ``int_{I_delta} cos(k x - ell pi/4) dx = 0`` for ``k <= k_max``.

    Uses the antiderivative ``sin(k x - ell pi / 4) / k``; for ``ell = 2
    (mod 4)`` each integrand is odd about ``x = pi``.
    """
    if isinstance(ell, bool) or not isinstance(ell, int) or ell % 4 != 2:
        raise DomainError(f"ell must be congruent to 2 mod 4, got {ell!r}")
    d = check_delta(delta)
    a, b = 2 * math.pi * float(d), 2 * math.pi * (1 - float(d))
    ph = phase(ell)
    for k in range(1, k_max + 1):
        val = (math.sin(k * b - ph) - math.sin(k * a - ph)) / k
        if abs(val) > tol:
            return False
    return True
