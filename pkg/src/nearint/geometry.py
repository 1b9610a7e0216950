"""Points, norms, and the near-integer distance predicates.

Two arithmetic modes are supported.  In ``exact-lattice`` mode every
coordinate is a Python integer, squared Euclidean distances are integers and
the test ``||sqrt(n)|| >= delta`` is decided with integer comparisons only.
In ``certified-float`` mode coordinates are binary64 values; distances are
computed in floating point together with a rigorous bound on the rounding
error, and a pair only counts as passing when the lower end of its gap
interval clears ``delta`` plus a declared slack.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from numbers import Integral, Real

import numpy as np

from .errors import DomainError

EXACT = "exact-lattice"
FLOAT = "certified-float"
MODES = (EXACT, FLOAT)

# Extra margin demanded of float-mode gaps on top of the rounding bound.
FLOAT_SLACK = 1e-9

_UNIT_ROUNDOFF = 2.0**-53


def as_rational(value) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings such as ``"1/20000"`` and ``"5e-5"`` are parsed exactly.  Floats go
    through their shortest repr, so ``0.1`` becomes ``1/10`` rather than the
    binary expansion of the double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, (str, Decimal)):
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {value!r} as a rational number") from exc
    if isinstance(value, Real):
        if not math.isfinite(value):
            raise DomainError(f"non-finite value {value!r} is not rational")
        return Fraction(repr(float(value)))
    raise DomainError(f"cannot interpret {value!r} as a rational number")


def check_delta(delta) -> Fraction:
    d = as_rational(delta)
    if not 0 < d < Fraction(1, 2):
        raise DomainError(f"delta must lie in (0, 1/2), got {d}")
    return d


@dataclass(frozen=True)
class NormSpec:
    """Euclidean norm, or an l^p norm with 1 < p < inf."""

    kind: str = "euclidean"
    p: float | None = None

    def __post_init__(self):
        if self.kind == "euclidean":
            if self.p is not None:
                raise DomainError("the euclidean norm takes no exponent")
        elif self.kind == "lp":
            if self.p is None or not math.isfinite(self.p) or self.p <= 1:
                raise DomainError(f"l^p norms need a finite p > 1, got p={self.p}")
        else:
            raise DomainError(f"unknown norm kind {self.kind!r}")

    @property
    def is_euclidean(self) -> bool:
        return self.kind == "euclidean" or self.p == 2

    @classmethod
    def parse(cls, text: str) -> "NormSpec":
        """Parse ``l2`` or ``lp:<p>``."""
        text = text.strip().lower()
        if text in ("l2", "euclidean"):
            return cls()
        if text.startswith("lp:"):
            try:
                p = float(text[3:])
            except ValueError as exc:
                raise DomainError(f"bad exponent in norm {text!r}") from exc
            return cls("lp", p)
        raise DomainError(f"unknown norm {text!r}; expected 'l2' or 'lp:<p>'")

    def __str__(self):
        return "l2" if self.kind == "euclidean" else f"lp:{self.p!r}"


EUCLIDEAN = NormSpec()


@dataclass(frozen=True)
class Point:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) < 1:
            raise DomainError("a point needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)


def _is_int(x) -> bool:
    return isinstance(x, Integral) and not isinstance(x, bool)


@dataclass
class PointSet:
    """A finite set of distinct points in a closed ball about the origin.

    ``coords`` is an ``(n, dim)`` array: ``dtype=object`` holding Python ints
    in exact mode, ``float64`` in float mode.
    """

    coords: np.ndarray
    mode: str = FLOAT
    radius_bound: Real | None = None
    norm: NormSpec = field(default_factory=NormSpec)

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown arithmetic mode {self.mode!r}")
        rows = self.coords
        if isinstance(rows, np.ndarray) and rows.ndim == 2:
            arr = rows
        else:
            rows = [tuple(r) for r in rows]
            if rows and len({len(r) for r in rows}) != 1:
                raise DomainError("all points must share one dimension")
            arr = np.array(rows, dtype=object if self.mode == EXACT else float)
            if not rows:
                arr = arr.reshape(0, 1)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise DomainError("coordinates must form an (n, dim) array with dim >= 1")
        if self.mode == EXACT:
            if self.norm.kind != "euclidean":
                raise DomainError("exact-lattice mode supports only the euclidean norm")
            flat = arr.ravel().tolist()
            if not all(_is_int(x) for x in flat):
                raise DomainError("exact-lattice mode requires integer coordinates; "
                                  "mixed arithmetic modes in one set")
            arr = np.array([int(x) for x in flat], dtype=object).reshape(arr.shape)
        else:
            arr = np.asarray(arr, dtype=float)
            if not np.all(np.isfinite(arr)):
                raise DomainError("float coordinates must be finite")
        self.coords = arr
        if self.radius_bound is not None and self.radius_bound < 0:
            raise DomainError("radius_bound must be nonnegative")
        if len(arr) > 1:
            uniq = {tuple(r) for r in arr.tolist()}
            if len(uniq) != len(arr):
                raise DomainError("point set contains repeated points")
        if self.radius_bound is not None and not self.contained():
            raise DomainError(f"some point lies outside the ball of radius {self.radius_bound}")

    def __len__(self):
        return self.coords.shape[0]

    def __getitem__(self, i) -> Point:
        return Point(tuple(self.coords[i].tolist()))

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def subset(self, indices) -> "PointSet":
        idx = list(indices)
        return PointSet(self.coords[idx].reshape(len(idx), self.dim), self.mode,
                        self.radius_bound, self.norm)

    def contained(self) -> bool:
        """Whether every point lies in the declared ball (exactly, in exact mode)."""
        if self.radius_bound is None or len(self) == 0:
            return True
        if self.mode == EXACT:
            r2 = as_rational(self.radius_bound) ** 2
            return all(sum(x * x for x in row) <= r2 for row in self.coords.tolist())
        norms = _norm_rows(self.coords, self.norm)
        tol = 8 * (self.dim + 4) * _UNIT_ROUNDOFF * max(1.0, float(self.radius_bound))
        return bool(np.all(norms <= float(self.radius_bound) + tol))


def _norm_rows(diff: np.ndarray, norm: NormSpec) -> np.ndarray:
    if norm.is_euclidean:
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))
    p = norm.p
    return np.sum(np.abs(diff) ** p, axis=1) ** (1.0 / p)


def frac_gap(t) -> float:
    """Distance from ``t`` to the nearest integer, in ``[0, 1/2]``."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"frac_gap needs a finite argument, got {t}")
    return abs(t - round(t))


def nearest_integer(t) -> int:
    """Nearest integer to ``t``; exact half-integers round away from zero."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"nearest_integer needs a finite argument, got {t}")
    return int(math.copysign(math.floor(abs(t) + 0.5), t))


def _gap_ok(n: int, p: int, q: int) -> bool:
    # ||sqrt(n)|| >= p/q, decided with integers only.
    a = math.isqrt(n)
    nq2 = n * q * q
    for m in (a, a + 1):
        if m == 0:
            if nq2 < p * p:
                return False
        elif (m * q - p) ** 2 < nq2 < (m * q + p) ** 2:
            return False
    return True


def sqrt_gap_at_least(n: int, delta) -> bool:
    """Exact test of ``||sqrt(n)|| >= delta`` for a nonnegative integer ``n``.

    With ``a = isqrt(n)`` the only integers that can lie within ``delta`` of
    ``sqrt(n)`` are ``a`` and ``a + 1``; membership of ``n`` in the open
    interval ``((m - delta)^2, (m + delta)^2)`` is checked after clearing the
    denominator of ``delta``.
    """
    if not _is_int(n) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    d = check_delta(delta)
    return _gap_ok(int(n), d.numerator, d.denominator)


def sqrt_gap(n: int) -> float:
    """``||sqrt(n)||`` in floating point, accurate even for large ``n``."""
    a = math.isqrt(n)
    rem = n - a * a
    if not rem:
        return 0.0
    root = math.sqrt(n)
    # sqrt(n) - a and a + 1 - sqrt(n), each without cancellation
    below = rem / (root + a)
    above = (2 * a + 1 - rem) / (root + a + 1)
    return min(below, above)


def squared_distance(p, q) -> int:
    """Exact squared Euclidean distance between two integer points."""
    pc, qc = _coords(p), _coords(q)
    if len(pc) != len(qc):
        raise DomainError(f"dimension mismatch: {len(pc)} vs {len(qc)}")
    if not all(_is_int(x) for x in pc + qc):
        raise DomainError("squared_distance needs integer coordinates")
    return sum((int(a) - int(b)) ** 2 for a, b in zip(pc, qc))


def _coords(p) -> tuple:
    return p.coords if isinstance(p, Point) else tuple(p)


def distance(p, q, norm: NormSpec = EUCLIDEAN) -> float:
    pc, qc = _coords(p), _coords(q)
    if len(pc) != len(qc):
        raise DomainError(f"dimension mismatch: {len(pc)} vs {len(qc)}")
    if norm.is_euclidean and all(_is_int(x) for x in pc + qc):
        return math.sqrt(squared_distance(pc, qc))
    diff = np.asarray(pc, dtype=float) - np.asarray(qc, dtype=float)
    return float(_norm_rows(diff[None, :], norm)[0])


def rounding_bound(values: np.ndarray, dim: int, norm: NormSpec) -> np.ndarray:
    """Upper bound on ``|computed - true|`` for float-mode distances.

    Euclidean distances carry relative error at most ``gamma_{dim+3}`` (one
    rounding each for difference, square and sqrt, ``dim - 1`` for the sum);
    we charge twice ``gamma_{dim+4}``.  For l^p the libm ``pow`` calls are
    not correctly rounded, so a looser count is used.
    """
    if norm.is_euclidean:
        k = dim + 4
    else:
        k = 4 * (dim + math.ceil(norm.p)) + 16
    gamma = k * _UNIT_ROUNDOFF / (1 - k * _UNIT_ROUNDOFF)
    return 2 * gamma * values + 4 * _UNIT_ROUNDOFF


@dataclass
class VerificationReport:
    passed: bool
    delta: Fraction | float
    min_gap: float
    worst_pair: tuple[int, int] | None
    pair_count: int
    mode: str
    slack: float = 0.0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"status: {status}",
            f"mode: {self.mode}",
            f"delta: {self.delta}",
            f"min_gap: {self.min_gap:.17g}",
            f"worst_pair: {self.worst_pair}",
            f"pair_count: {self.pair_count}",
        ]
        if self.mode == FLOAT:
            lines.append(f"slack: {self.slack:g} (min_gap is a certified lower bound)")
        return "\n".join(lines)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("NEARINT_THREADS", "1")))
    except ValueError:
        return 1


def _exact_block(rows, P, p, q):
    best = (math.inf, None)
    ok = True
    n = len(P)
    for i in rows:
        pi = P[i]
        for j in range(i + 1, n):
            s = sum((a - b) ** 2 for a, b in zip(pi, P[j]))
            g = sqrt_gap(s)
            if g < best[0]:
                best = (g, (i, j))
            if ok and not _gap_ok(s, p, q):
                ok = False
    return ok, best


def _float_block(rows, X, norm):
    best = (math.inf, None)
    n, dim = X.shape
    for i in rows:
        if i + 1 >= n:
            continue
        diff = X[i + 1:] - X[i]
        dist = _norm_rows(diff, norm)
        gap = np.abs(dist - np.rint(dist))
        cert = gap - rounding_bound(dist, dim, norm)
        j = int(np.argmin(cert))
        if cert[j] < best[0]:
            best = (float(cert[j]), (i, i + 1 + j))
    return True, best


def pairwise_verify(S: PointSet, delta, norm: NormSpec | None = None, *,
                    workers: int | None = None, slack: float = FLOAT_SLACK) -> VerificationReport:
    """Check ``||dist(p, q)|| >= delta`` over every unordered pair of ``S``.

    Rows are split into contiguous blocks that may run on a thread pool; the
    per-block ``(min_gap, pair)`` results are reduced by lexicographic
    minimum, so the report does not depend on the partition.
    """
    norm = S.norm if norm is None else norm
    n = len(S)
    if n < 1:
        raise DomainError("pairwise_verify needs a nonempty set")
    if S.mode == EXACT:
        if not norm.is_euclidean:
            raise DomainError("exact-lattice verification supports only the euclidean norm")
        d = check_delta(delta)
    else:
        d = as_rational(delta) if not isinstance(delta, float) else delta
        if not 0 < d < 0.5:
            raise DomainError(f"delta must lie in (0, 1/2), got {d}")
    pair_count = n * (n - 1) // 2
    if n == 1:
        return VerificationReport(True, d, 0.5, None, 0, S.mode, slack if S.mode == FLOAT else 0.0)

    workers = default_workers() if workers is None else max(1, int(workers))
    # Interleave rows so blocks carry similar numbers of pairs.
    blocks = [list(range(w, n, workers)) for w in range(workers)]
    if S.mode == EXACT:
        P = [tuple(r) for r in S.coords.tolist()]
        task = lambda rows: _exact_block(rows, P, d.numerator, d.denominator)  # noqa: E731
    else:
        X = np.asarray(S.coords, dtype=float)
        task = lambda rows: _float_block(rows, X, norm)  # noqa: E731
    if workers == 1:
        results = [task(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, blocks))

    ok = all(r[0] for r in results)
    min_gap, worst = min((r[1] for r in results), key=lambda b: (b[0], b[1]))
    if S.mode == EXACT:
        passed = ok
        used_slack = 0.0
    else:
        min_gap = max(0.0, min_gap)
        passed = min_gap >= float(d) + slack
        used_slack = slack
    return VerificationReport(passed, d, min(min_gap, 0.5), worst, pair_count, S.mode, used_slack)
