import math

import numpy as np
import pytest
from scipy.special import gamma, jv

from nearint.errors import CalibrationError, DomainError
from nearint.geometry import FLOAT, PointSet
from nearint.spherical import (bessel_energy, energy_monte_carlo, spherical_constant,
                               transform_model)


def exact_constant(d):
    # Gamma((d+1)/2) / pi^((d-1)/2): used only as an oracle
    return gamma((d + 1) / 2) / math.pi ** ((d - 1) / 2)


@pytest.fixture(scope="module")
def fits():
    return {d: spherical_constant(d, samples=10**7, seed=d) for d in (1, 2, 3)}


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fit_agrees_with_closed_form(fits, d):
    f = fits[d]
    assert abs(f.C - exact_constant(d)) <= 3 * f.stderr
    assert f.stderr < 1e-3


def test_circle_constant_is_one(fits):
    assert abs(fits[1].C - 1) <= 3 * fits[1].stderr


@pytest.mark.parametrize("d", [1, 2, 3])
def test_small_radius_limit_is_one(fits, d):
    f = fits[d]
    nu = (d - 1) / 2
    se = f.stderr * math.pi**nu / math.gamma(nu + 1)
    assert abs(f.small_radius_limit() - 1) <= 3 * se


def test_two_sphere_fit_reproduces_integral_at_several_radii(fits):
    # on S^2 the transform is sin(2 pi r) / (2 pi r); compare at fresh radii
    f = fits[2]
    for r in (0.5, 1.0, 2.0):
        model = f.C * transform_model(2, r)
        want = math.sin(2 * math.pi * r) / (2 * math.pi * r)
        assert model == pytest.approx(want, abs=3 * f.stderr * abs(transform_model(2, r)) + 1e-12)


def test_residuals_within_three_sigma(fits):
    for f in fits.values():
        assert all(abs(r) <= 3 * s for r, s in zip(f.residuals, f.residual_stderr))


def test_calibration_error_on_wrong_model(monkeypatch):
    import nearint.spherical as sph
    monkeypatch.setattr(sph, "transform_model", lambda d, r, k=1: np.asarray(r, dtype=float))
    with pytest.raises(CalibrationError):
        sph.spherical_constant(1, samples=10**5)


def test_calibration_is_seeded():
    a = spherical_constant(2, samples=10**5, seed=4)
    b = spherical_constant(2, samples=10**5, seed=4)
    assert a == b


@pytest.mark.parametrize("d", [0, 9])
def test_dimension_domain(d):
    with pytest.raises(DomainError):
        spherical_constant(d, samples=100)


def test_energy_singleton():
    S = PointSet([(0.3, 0.1)], FLOAT)
    for k in (1, 5, 17):
        assert bessel_energy(S, k, 1.0) == 1.0


def test_energy_two_points_circle():
    r = 0.73
    S = PointSet([(0.0, 0.0), (r, 0.0)], FLOAT)
    for k in (1, 2, 9):
        e = bessel_energy(S, k, 1.0)
        assert e == pytest.approx(2 + 2 * jv(0, 2 * math.pi * k * r), abs=1e-12)
        assert e >= 0


def test_energy_matches_scipy_pair_sum():
    rng = np.random.default_rng(2)
    X = rng.uniform(-3, 3, size=(12, 4))
    S = PointSet(X, FLOAT)
    nu = 1.0
    C3 = exact_constant(3)
    i, j = np.triu_indices(12, 1)
    r = np.linalg.norm(X[i] - X[j], axis=1)
    for k in (1, 3):
        want = 12 + C3 * k**-nu * 2 * np.sum(r**-nu * jv(nu, 2 * math.pi * k * r))
        assert bessel_energy(S, k, C3) == pytest.approx(want, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_energy_against_monte_carlo(seed):
    rng = np.random.default_rng(seed)
    S = PointSet(rng.uniform(-1, 1, size=(20, 3)), FLOAT)
    k = 1 + seed
    mc, se = energy_monte_carlo(S, k, samples=200_000, seed=seed)
    e = bessel_energy(S, k, exact_constant(2))
    assert e >= -1e-6
    assert abs(e - mc) <= 5 * se


def test_energy_domain():
    S = PointSet([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)], FLOAT)
    with pytest.raises(DomainError):
        bessel_energy(S, 0, 1.0)
    with pytest.raises(DomainError):
        bessel_energy(S, 1, 1.0, d=1)
