import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearint.constructions import (MAX_DELTA_3D, build_sarkozy3d, choose_params, count_lower_bound,
                                   digit_point, lp_window, pair_window_ratio, window_check_euclid,
                                   window_check_lp)
from nearint.errors import CapExceededError, DomainError, PreconditionError
from nearint.geometry import EXACT, pairwise_verify

FIG_X, FIG_DELTA = 10**6, Fraction(1, 20000)


@pytest.fixture(scope="module")
def fig_set():
    return build_sarkozy3d(FIG_X, FIG_DELTA)


def hp_gap(x):
    return abs(x - mpmath.nint(x))


def test_window_euclid_examples():
    assert window_check_euclid(10, 3, Fraction(1, 10))
    with mpmath.workdps(30):
        g = hp_gap(mpmath.sqrt(103))
        assert abs(g - mpmath.mpf("0.148891565092219")) < 1e-12
        assert g > mpmath.mpf("0.1")
    assert window_check_euclid(1, 1, Fraction(3, 10))
    assert not window_check_euclid(5, Fraction(1, 10), Fraction(1, 10))


def test_window_euclid_edges_are_inclusive():
    d = Fraction(1, 10)
    assert window_check_euclid(4, 3 * d * 4, d)
    assert window_check_euclid(4, 2 * (1 - d) * 4, d)
    assert not window_check_euclid(4, 2 * (1 - d) * 4 + Fraction(1, 10**9), d)


def test_window_euclid_domain():
    with pytest.raises(DomainError):
        window_check_euclid(0, 1, Fraction(1, 10))
    with pytest.raises(DomainError):
        window_check_euclid(1, 0, Fraction(1, 10))


def test_window_lp_examples():
    d = Fraction(1, 10)
    lo, hi = lp_window(3, 2, d)
    assert (lo, hi) == (Fraction(27, 10), Fraction(54, 5))
    assert window_check_lp(3, 2, 4, d)
    with mpmath.workdps(30):
        g = hp_gap(mpmath.cbrt(12))
        assert abs(g - mpmath.mpf("0.289428485106664")) < 1e-12
    assert not window_check_lp(3, 2, Fraction(1, 2), d)
    with pytest.raises(DomainError):
        window_check_lp(1, 2, 4, d)
    with pytest.raises(DomainError):
        window_check_lp(Fraction(1, 2), 2, 4, d)


def test_window_lp_fractional_p():
    # p = 2.5, a = 3: window is [2.5 d 1.5^1.5 3^1.5, 2.5 (1 - d) 3^1.5]
    d = Fraction(1, 10)
    lo, hi = lp_window(2.5, 3, d)
    assert float(lo) == pytest.approx(2.5 * 0.1 * 1.5**1.5 * 3**1.5)
    assert float(hi) == pytest.approx(2.5 * 0.9 * 3**1.5)
    assert window_check_lp(2.5, 3, float(lo + hi) / 2, d)


@settings(max_examples=300, deadline=None)
@given(a=st.integers(1, 10**4), rnum=st.integers(1, 10**6), rden=st.integers(1, 1000),
       dnum=st.integers(1, 499))
def test_lp_with_p2_equals_euclid(a, rnum, rden, dnum):
    r, d = Fraction(rnum, rden), Fraction(dnum, 1000)
    assert window_check_lp(2, a, r, d) == window_check_euclid(a, r, d)


def test_choose_params_figure_instance():
    p = choose_params(FIG_X, FIG_DELTA)
    assert (p.k, p.t) == (3, 3)
    assert all(p.guarantees().values())


def test_choose_params_boundary_instance():
    p = choose_params(16 * 3**10, MAX_DELTA_3D)
    assert (p.k, p.t) == (3, 3)
    k, t = p.k, p.t
    assert Fraction(1, 48 * (k + 1) ** 5) < MAX_DELTA_3D <= Fraction(1, 48 * k**5)
    assert 16 * k ** (2 * t + 4) <= 16 * 3**10 < 16 * k ** (2 * t + 6)


def test_choose_params_preconditions():
    with pytest.raises(PreconditionError, match="X_0"):
        choose_params(10**3, Fraction(1, 20000))
    with pytest.raises(PreconditionError, match="exceeds"):
        choose_params(10**9, Fraction(1, 11663))


@pytest.mark.parametrize("X,delta", [
    (10**5, Fraction(1, 20000)), (10**8, Fraction(1, 12000)), (10**9, Fraction(1, 10**6)),
    (3 * 10**12, Fraction(1, 10**7)), (10**20, Fraction(1, 10**9)),
])
def test_choose_params_defining_inequalities(X, delta):
    p = choose_params(X, delta)
    assert p.k >= 3 and p.t >= 0
    assert all(p.guarantees().values())


def test_digit_point_examples():
    assert digit_point((0, 0, 0, 0), (0, 0, 0, 0), 3).coords == (0, 0, 0)
    assert digit_point((1, 0, 0, 0), (0, 0, 0, 0), 3).coords == (1, 0, 72)
    assert digit_point((0, 0, 0, 0), (1, 0, 0, 0), 3).coords == (0, 1, 216)
    with pytest.raises(DomainError):
        digit_point((2,), (0,), 3)


def test_figure_set_count_radius_and_verification(fig_set):
    S, p = fig_set
    assert len(S) == 256 == p.count
    assert S.mode == EXACT and S.dim == 3
    assert max(sum(x * x for x in r) for r in S.coords.tolist()) <= p.radius**2
    assert p.radius <= FIG_X
    rep = pairwise_verify(S, FIG_DELTA)
    assert rep.passed and rep.pair_count == 32640


def test_figure_set_coordinate_bounds(fig_set):
    S, p = fig_set
    k, t = p.k, p.t
    for x, y, z in S.coords.tolist():
        assert 0 <= x <= k ** (t + 1) and 0 <= y <= k ** (t + 1)
        assert 0 <= z <= 8 * k ** (2 * t + 4)


def test_figure_set_matches_digit_formula(fig_set):
    S, p = fig_set
    want = {digit_point(a, b, 3).coords
            for a in itertools.product(range(2), repeat=4)
            for b in itertools.product(range(2), repeat=4)}
    assert {tuple(r) for r in S.coords.tolist()} == want


def test_every_pair_lies_in_window(fig_set):
    S, _ = fig_set
    P = S.coords.tolist()
    for i, j in itertools.combinations(range(len(P)), 2):
        a, r = pair_window_ratio(P[i], P[j])
        assert a >= 1
        assert 3 * FIG_DELTA <= Fraction(r, a) <= 2 * (1 - FIG_DELTA)


def test_count_beats_lower_bound():
    assert 256 > count_lower_bound(FIG_X, FIG_DELTA)
    with mpmath.workdps(30):
        d = mpmath.mpf(1) / 20000
        want = d ** mpmath.mpf(1.2) * mpmath.mpf(10**6) ** (1 - 6 * d ** mpmath.mpf(0.2))
    assert count_lower_bound(FIG_X, FIG_DELTA) == pytest.approx(float(want), rel=1e-12)


def test_cap_reports_count_without_building():
    with pytest.raises(CapExceededError) as exc:
        build_sarkozy3d(10**12, Fraction(1, 20000), cap=1000)
    assert exc.value.count == exc.value.params.count > 1000


def test_smaller_instance_verifies():
    S, p = build_sarkozy3d(10**5, Fraction(1, 20000))
    assert len(S) == p.count == (p.k - 1) ** (2 * (p.t + 1))
    assert pairwise_verify(S, Fraction(1, 20000)).passed
