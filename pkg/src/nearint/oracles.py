"""Brute-force oracles and executable forms of the torus and slab lemmas.

Valid subsets of a candidate set are exactly the cliques of its
compatibility graph (edge iff the pair's distance gap is at least delta), so
small instances are solved exactly by branch and bound.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import CapExceededError, DomainError
from .geometry import (EUCLIDEAN, EXACT, FLOAT, FLOAT_SLACK, NormSpec, PointSet, _gap_ok,
                       _norm_rows, as_rational, check_delta, pairwise_verify, rounding_bound)

log = logging.getLogger(__name__)

EXACT_CLIQUE_CAP = 60
EXHAUSTIVE_CAP = 20


@dataclass(frozen=True)
class CompatibilityGraph:
    n: int
    adj: tuple  # adj[i] is a bitmask of the neighbours of i

    @property
    def edges(self) -> set:
        return {(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.adj[i] >> j & 1}

    def is_clique(self, indices) -> bool:
        idx = list(indices)
        return all(self.adj[i] >> j & 1 for i, j in combinations(idx, 2))


def _pair_ok_matrix(S: PointSet, delta, norm: NormSpec, slack: float) -> np.ndarray:
    n = len(S)
    ok = np.zeros((n, n), dtype=bool)
    if S.mode == EXACT:
        if not norm.is_euclidean:
            raise DomainError("exact-lattice mode supports only the euclidean norm")
        d = check_delta(delta)
        P = [tuple(r) for r in S.coords.tolist()]
        for i in range(n):
            for j in range(i + 1, n):
                s = sum((a - b) ** 2 for a, b in zip(P[i], P[j]))
                ok[i, j] = ok[j, i] = _gap_ok(s, d.numerator, d.denominator)
        return ok
    d = float(check_delta(delta))
    X = np.asarray(S.coords, dtype=float)
    for i in range(n - 1):
        dist = _norm_rows(X[i + 1:] - X[i], norm)
        cert = np.abs(dist - np.rint(dist)) - rounding_bound(dist, S.dim, norm)
        ok[i, i + 1:] = ok[i + 1:, i] = cert >= d + slack
    return ok


def compatibility_graph(S: PointSet, delta, norm: NormSpec | None = None,
                        slack: float = FLOAT_SLACK) -> CompatibilityGraph:
    """Edges follow the same rule as :func:`pairwise_verify` for the set's mode."""
    norm = S.norm if norm is None else norm
    ok = _pair_ok_matrix(S, delta, norm, slack)
    adj = tuple(sum(1 << j for j in np.flatnonzero(row).tolist()) for row in ok)
    return CompatibilityGraph(len(S), adj)


def _color_bound(order, adj):
    """Greedy colouring of ``order``; returns vertices with their colour counts."""
    colors = []
    out = []
    for v in order:
        for k, cls in enumerate(colors):
            if not adj[v] & cls:
                colors[k] |= 1 << v
                out.append((v, k + 1))
                break
        else:
            colors.append(1 << v)
            out.append((v, len(colors)))
    out.sort(key=lambda t: t[1])
    return out


def _max_clique(g: CompatibilityGraph) -> list:
    adj = g.adj
    best = []

    def expand(clique, cand):
        nonlocal best
        verts = [v for v in range(g.n) if cand >> v & 1]
        colored = _color_bound(verts, adj)
        for v, c in reversed(colored):
            if len(clique) + c <= len(best):
                return
            new = clique + [v]
            sub = cand & adj[v]
            if sub:
                expand(new, sub)
            elif len(new) > len(best):
                best = new
            cand &= ~(1 << v)

    if g.n:
        expand([], (1 << g.n) - 1)
    return sorted(best)


def max_valid_subset(candidates: PointSet, delta, norm: NormSpec | None = None) -> list:
    """Indices of a largest valid subset, by branch and bound on the compatibility graph."""
    n = len(candidates)
    if n > EXACT_CLIQUE_CAP:
        raise CapExceededError(
            f"exact search is capped at {EXACT_CLIQUE_CAP} candidates (got {n}); "
            "use greedy_valid_subset for larger inputs")
    if n == 0:
        return []
    return _max_clique(compatibility_graph(candidates, delta, norm))


def exhaustive_max_subset(candidates: PointSet, delta, norm: NormSpec | None = None) -> list:
    """Largest valid subset by trying every subset, biggest first."""
    n = len(candidates)
    if n > EXHAUSTIVE_CAP:
        raise CapExceededError(f"exhaustive search is capped at {EXHAUSTIVE_CAP} candidates")
    if n == 0:
        return []
    g = compatibility_graph(candidates, delta, norm)
    for size in range(n, 0, -1):
        for sub in combinations(range(n), size):
            if g.is_clique(sub):
                return list(sub)
    return []


def greedy_valid_subset(candidates: PointSet, delta, norm: NormSpec | None = None,
                        seed: int = 0) -> list:
    """Insert candidates in a seeded random order, keeping each one that stays valid."""
    n = len(candidates)
    if n == 0:
        return []
    g = compatibility_graph(candidates, delta, norm)
    order = np.random.default_rng(seed).permutation(n).tolist()
    chosen = 0
    picked = []
    for v in order:
        if (g.adj[v] & chosen) == chosen:
            chosen |= 1 << v
            picked.append(v)
    return sorted(picked)


def _exact_coords(S: PointSet):
    return [[Fraction(x) for x in row] for row in S.coords.tolist()]


def _torus_dist(a: Fraction, b: Fraction) -> Fraction:
    t = (a - b) % 1
    return min(t, 1 - t)


def torus_bound_check(S: PointSet, delta) -> bool:
    """Reduce a valid 1D set mod 1 and confirm the torus bound ``|S| <= 1/delta``.

    Checks that the residues are distinct and pairwise at least ``delta``
    apart on the circle (exact rational arithmetic on the stored
    coordinates), and that ``|S| delta <= 1``.  Returns False when ``S`` is
    not valid at ``delta``, since the bound says nothing about such sets.
    """
    if S.dim != 1:
        raise DomainError("torus_bound_check needs points on the line")
    d = check_delta(delta)
    if len(S) == 0:
        return True
    if not pairwise_verify(S, d, EUCLIDEAN).passed:
        return False
    xs = [row[0] for row in _exact_coords(S)]
    res = sorted(x % 1 for x in xs)
    if len(set(res)) != len(res):
        return False
    for a, b in combinations(res, 2):
        if _torus_dist(a, b) < d:
            return False
    return len(S) * d <= 1


def _ball_radius(rows) -> Fraction:
    """A rational at least the largest Euclidean norm among ``rows``."""
    sq = max(sum(x * x for x in r) for r in rows)
    X = Fraction(math.sqrt(sq))
    while X * X < sq:
        X *= 1 + Fraction(1, 2**50)
    return X


def slab_index(x1: Fraction, X: Fraction, width: Fraction) -> int:
    """Index of the half-open slab ``(lo, lo + width]`` holding ``x1``.

    Slab 0 also takes the left end ``-X`` itself.
    """
    return max(0, math.ceil((x1 + X) / width) - 1)


def slab_project_check(S: PointSet, delta, axis: int = 0) -> bool:
    """Slice a valid set into slabs of width ``delta/2`` and project each slab.

    Slabs run along coordinate ``axis`` over ``[-X, X]`` with ``X`` the
    declared radius (or the points' own radius when none is declared).  Each
    slab's projection onto the remaining coordinates must be injective and
    valid at ``delta/2``, and at most ``ceil(4X/delta)`` slabs may be used.
    Returns False when ``S`` itself is not valid at ``delta``.
    """
    if S.dim < 2:
        raise DomainError("slab projection needs points in dimension at least 2")
    if not -S.dim <= axis < S.dim:
        raise DomainError(f"axis {axis} out of range for dimension {S.dim}")
    axis %= S.dim
    d = check_delta(delta)
    if len(S) == 0:
        return True
    if len(S) > 1 and not pairwise_verify(S, d).passed:
        return False
    rows = _exact_coords(S)
    # Float containment allows a rounding tolerance, so widen X to the
    # points' own radius whenever that is larger than the declared one.
    X = _ball_radius(rows)
    if S.radius_bound is not None:
        X = max(X, as_rational(S.radius_bound))
    width = d / 2
    slabs = {}
    for i, r in enumerate(rows):
        slabs.setdefault(slab_index(r[axis], X, width), []).append(i)
    max_slabs = max(1, math.ceil(4 * X / d))
    if len(slabs) > max_slabs or max(slabs) >= max_slabs:
        return False
    for idx in slabs.values():
        proj = np.delete(S.coords[idx], axis, axis=1)
        if len({tuple(p) for p in proj.tolist()}) != len(idx):
            return False
        if len(idx) < 2:
            continue
        P = PointSet(proj, S.mode, None, S.norm)
        if not pairwise_verify(P, width).passed:
            return False
    return True


def _ball_samples(rng: np.random.Generator, count: int, d: int, X: float) -> np.ndarray:
    g = rng.standard_normal((count, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = X * rng.random(count) ** (1.0 / d)
    return g * r[:, None]


def random_valid_set(d: int, X, delta, target: int, seed: int = 0,
                     attempts: int | None = None) -> PointSet:
    """Seeded rejection sampling of a valid set in the closed ball of radius X.

    Each uniform sample is kept if it stays valid (certified float test)
    against every kept point.  After ``attempts`` samples (default ``200 *
    target + 1000``) the set is returned even if smaller than ``target``; the
    shortfall is logged.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    if isinstance(target, bool) or not isinstance(target, int) or target < 1:
        raise DomainError(f"target must be a positive integer, got {target!r}")
    X = float(X)
    if not X > 0:
        raise DomainError("X must be positive")
    dl = float(check_delta(delta))
    attempts = 200 * target + 1000 if attempts is None else int(attempts)
    rng = np.random.default_rng(seed)
    kept = np.empty((0, d))
    tried = 0
    while len(kept) < target and tried < attempts:
        batch = _ball_samples(rng, min(256, attempts - tried), d, X)
        for x in batch:
            tried += 1
            if len(kept):
                dist = _norm_rows(kept - x, EUCLIDEAN)
                cert = np.abs(dist - np.rint(dist)) - rounding_bound(dist, d, EUCLIDEAN)
                if cert.min() < dl + FLOAT_SLACK:
                    continue
            kept = np.vstack([kept, x])
            if len(kept) == target:
                break
    if len(kept) < target:
        log.info("random_valid_set: kept %d of %d points after %d samples",
                 len(kept), target, tried)
    return PointSet(kept, FLOAT, radius_bound=X)
