import dataclasses
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from nearint.certificates import (Infeasible, TrigCertificate, certify_negative_polynomial,
                                  check_certificate, grid_max_on_interval, lebesgue_witness_check,
                                  trig_eval)
from nearint.errors import DomainError


@pytest.fixture(scope="module")
def cert_01_3():
    res = certify_negative_polynomial(Fraction(1, 10), 3)
    assert isinstance(res, TrigCertificate)
    return res


@pytest.fixture(scope="module")
def cert_03_1():
    res = certify_negative_polynomial(Fraction(3, 10), 1)
    assert isinstance(res, TrigCertificate)
    return res


def test_certificate_invariants(cert_01_3):
    c = cert_01_3
    assert np.all(c.coeffs >= 0)
    assert math.fsum(c.coeffs) == pytest.approx(1, abs=1e-12)
    assert c.derivative_bound >= float(np.arange(1, c.degree + 1) @ c.coeffs) * (1 - 1e-12)
    assert c.margin > 0 and c.grid_step > 0
    N = round(2 * math.pi / c.grid_step)
    g = grid_max_on_interval(c.coeffs, c.ell, c.delta, N)
    assert g + c.derivative_bound * c.grid_step / 2 <= -c.margin


def test_grid_evaluator_matches_direct_sum(cert_01_3):
    c = cert_01_3
    N = 2**14
    x0 = 2 * math.pi * 0.1
    count = int(2 * math.pi * 0.8 / (2 * math.pi / N)) + 1
    xs = x0 + np.arange(count) * 2 * math.pi / N
    direct = max(float(trig_eval(c.coeffs, 3, xs).max()),
                 float(trig_eval(c.coeffs, 3, 2 * math.pi * 0.9)))
    assert grid_max_on_interval(c.coeffs, 3, Fraction(1, 10), N) == pytest.approx(direct, abs=1e-13)


def test_independent_continuum_check(cert_03_1):
    # dense mpmath scan of T plus a local maximization near the worst point
    c = cert_03_1
    xs = np.linspace(2 * math.pi * 0.3, 2 * math.pi * 0.7, 20001)
    vals = trig_eval(c.coeffs, 1, xs)
    x_star = xs[np.argmax(vals)]
    with mpmath.workdps(30):
        def T(x):
            return mpmath.fsum(mpmath.mpf(float(ck)) * mpmath.cos(k * x - mpmath.pi / 4)
                               for k, ck in enumerate(c.coeffs, start=1))
        lo = max(2 * math.pi * 0.3, x_star - 1e-3)
        hi = min(2 * math.pi * 0.7, x_star + 1e-3)
        fine = max(T(mpmath.mpf(x)) for x in np.linspace(lo, hi, 2001))
    assert fine <= -c.margin


def test_check_accepts_emitted(cert_01_3, cert_03_1):
    assert check_certificate(cert_01_3)
    assert check_certificate(cert_03_1)


def test_check_rejects_negated_coefficient(cert_03_1):
    bad = dataclasses.replace(cert_03_1, coeffs=cert_03_1.coeffs.copy())
    i = int(np.argmax(bad.coeffs))
    bad.coeffs[i] = -bad.coeffs[i]
    assert not check_certificate(bad)


def test_check_rejects_inflated_margin(cert_01_3):
    assert not check_certificate(dataclasses.replace(cert_01_3, margin=cert_01_3.margin * 10))


def test_check_rejects_understated_derivative_bound(cert_01_3):
    assert not check_certificate(dataclasses.replace(cert_01_3, derivative_bound=0.5))


def test_check_rejects_unnormalized(cert_03_1):
    assert not check_certificate(dataclasses.replace(cert_03_1, coeffs=cert_03_1.coeffs * 2))


def test_margin_stable_under_grid_doubling(cert_01_3):
    c = cert_01_3
    N = round(2 * math.pi / c.grid_step)
    g2 = grid_max_on_interval(c.coeffs, c.ell, c.delta, 2 * N)
    margin2 = -g2 - c.derivative_bound * math.pi / (2 * N)
    assert abs(margin2 - c.margin) <= 0.1 * c.margin


def test_periodicity(cert_01_3):
    x = np.random.default_rng(5).uniform(-10, 10, 200)
    c = cert_01_3
    assert np.max(np.abs(trig_eval(c.coeffs, 3, x) - trig_eval(c.coeffs, 3, x + 2 * math.pi))) \
        <= 1e-12


def test_single_term_cannot_certify():
    # cos(x - pi/4) reaches sqrt(2)/2 at x = pi/2, the left end of I_{1/4}
    x = 2 * math.pi * 0.25
    assert float(trig_eval([1.0], 1, x)) == pytest.approx(math.sqrt(2) / 2)
    res = certify_negative_polynomial(Fraction(1, 4), 1, max_degree=1, grid_points=64)
    assert isinstance(res, Infeasible)
    assert res.best_margin == pytest.approx(-math.sqrt(2) / 2, abs=1e-3)
    assert isinstance(certify_negative_polynomial(Fraction(1, 4), 1), TrigCertificate)


@pytest.mark.parametrize("ell", [2, 6, 10])
def test_ell_2_mod_4_is_infeasible(ell):
    res = certify_negative_polynomial(Fraction(1, 10), ell, max_degree=16)
    assert isinstance(res, Infeasible)
    assert res.best_margin <= 1e-8
    assert res.degrees_tried == (4, 8, 16)


def test_certify_domain_errors():
    with pytest.raises(DomainError):
        certify_negative_polynomial(Fraction(1, 2), 3)
    with pytest.raises(DomainError):
        certify_negative_polynomial(Fraction(1, 10), 0)
    with pytest.raises(DomainError):
        certify_negative_polynomial(Fraction(1, 10), 3, max_degree=8, grid_points=10)


def test_lebesgue_witness_examples():
    # closed form for ell = 2, k = 1
    val = -math.cos(1.8 * math.pi) + math.cos(0.2 * math.pi)
    assert abs(val) < 1e-12
    assert lebesgue_witness_check(Fraction(1, 10), 2, 1)
    assert lebesgue_witness_check(Fraction(3, 10), 6, 50)
    for d in (Fraction(1, 20), Fraction(1, 7), Fraction(49, 100)):
        assert lebesgue_witness_check(d, 2, 200)


def test_lebesgue_witness_against_quadrature():
    from scipy.integrate import quad
    for k in (1, 4, 9):
        val, _ = quad(lambda x: math.cos(k * x - 6 * math.pi / 4), 0.6 * math.pi, 1.4 * math.pi)
        assert abs(val) < 1e-10


@pytest.mark.parametrize("ell", [1, 3, 4, 5, 7, 8])
def test_lebesgue_witness_domain(ell):
    with pytest.raises(DomainError):
        lebesgue_witness_check(Fraction(1, 10), ell, 5)


def test_nonwitness_integrals_do_not_vanish():
    # for ell = 3 the Lebesgue measure is not a witness: some integral is nonzero
    a, b = 0.2 * math.pi, 1.8 * math.pi
    vals = [(math.sin(k * b - 3 * math.pi / 4) - math.sin(k * a - 3 * math.pi / 4)) / k
            for k in range(1, 6)]
    assert max(abs(v) for v in vals) > 0.1
