"""
Tests for the crossed-beam lens and its minimum Rayleigh length
"""
import logging
import math

import numpy as np
import pytest

from config import Config
from errors import BracketError, UndefinedPointError
from lens.dephasing import (
    CrossedLensConfig,
    DephasingScan,
    crossed_intensity,
    find_zmin,
    fit_zmin_laws,
    focal_reference,
    max_deviation_on_circle,
    relative_deviation,
    scan_zmin,
)
from lens.metrics import deviation_mark, fit_power_law, rayleigh_match, rematched_geometry
from optics.modes import BeamGeometry
from optics.superposition import order_to_J, solve_coefficients


def crossed(J, divergence=0.01):
    return CrossedLensConfig(solve_coefficients(J), BeamGeometry.reduced(divergence))


def test_crossed_intensity_vanishes_at_centre():
    assert crossed_intensity(crossed(2), 0.0, 0.0) == 0.0


def test_crossed_intensity_is_symmetric():
    cfg = crossed(3, 0.05)
    x = np.linspace(-2.0, 2.0, 41)
    z = np.linspace(-1.5, 2.5, 41)
    np.testing.assert_array_equal(crossed_intensity(cfg, x, z), crossed_intensity(cfg, z, x))


def test_no_dephasing_on_the_axes():
    cfg = crossed(2, 0.1)
    x = np.linspace(0.1, 1.0, 10)
    np.testing.assert_allclose(relative_deviation(cfg, x, np.zeros_like(x)), 0.0, atol=1e-15)
    np.testing.assert_allclose(relative_deviation(cfg, np.zeros_like(x), x), 0.0, atol=1e-15)


def test_reference_is_sum_of_focal_slices():
    cfg = crossed(1)
    assert focal_reference(cfg, 0.2, 0.3) == pytest.approx(
        crossed_intensity(CrossedLensConfig(cfg.superposition, BeamGeometry.reduced(1e-9)), 0.2, 0.3), rel=1e-10)


def test_relative_deviation_undefined_at_centre():
    with pytest.raises(UndefinedPointError):
        relative_deviation(crossed(1), np.array([0.0, 0.1]), np.array([0.0, 0.1]))
    with pytest.raises(ValueError):
        relative_deviation(crossed(1), 0.0, 0.0)


def test_only_incoherent_combination():
    with pytest.raises(ValueError):
        CrossedLensConfig(solve_coefficients(1), BeamGeometry.reduced(), combination='coherent')


def test_deviation_vanishes_for_long_rayleigh_length():
    cfg = crossed(1, 1e-5)
    d = deviation_mark(cfg.superposition, cfg.geometry)
    assert max_deviation_on_circle(cfg, d) < 1e-8


@pytest.mark.parametrize('J', [0, 1])
def test_deviation_is_quadratic_in_divergence(J):
    s = solve_coefficients(J)
    d = deviation_mark(s, BeamGeometry.reduced())
    coarse = max_deviation_on_circle(crossed(J, 0.02), d)
    fine = max_deviation_on_circle(crossed(J, 0.01), d)
    assert coarse / fine == pytest.approx(4.0, rel=0.01)


def test_deviation_grows_as_order_squared():
    orders = [19, 25, 31, 37, 43, 49, 55]
    peaks = [max_deviation_on_circle(crossed(order_to_J(order)), 1.25 * math.sqrt(order)) for order in orders]
    assert fit_power_law(orders, peaks).exponent == pytest.approx(2.0, abs=0.2)


def test_find_zmin_meets_tolerance():
    scan = find_zmin(1)
    assert scan.order == 3
    assert scan.max_relative_deviation == pytest.approx(0.0074, rel=1e-6)
    assert scan.z_min_wavelengths == pytest.approx(18.1, rel=0.02)
    assert scan.lens_waist == pytest.approx(rayleigh_match(1) * scan.waist, rel=1e-9)
    assert scan.lens_waist >= scan.wavelength

    # below a 3-wavelength reference waist the circle is pinned
    pinned = rematched_geometry(1, BeamGeometry.from_waists(1.0, Config.ZMIN_APERTURE_WAIST))
    assert scan.waist < Config.ZMIN_APERTURE_WAIST
    assert scan.radius == pytest.approx(deviation_mark(solve_coefficients(1), pinned), rel=1e-9)

    longer = BeamGeometry(1.0, 1.5 * scan.z_min, 1.5 * scan.z_min).rescaled_x(rayleigh_match(1))
    cfg = CrossedLensConfig(solve_coefficients(1), longer)
    assert max_deviation_on_circle(cfg, scan.radius) < 0.0074


def test_zmin_circle_tracks_the_lens_above_the_aperture_waist():
    scan = find_zmin(1, aperture_waist=0.5)
    lens = BeamGeometry(1.0, scan.z_min, scan.z_min).rescaled_x(rayleigh_match(1))
    assert scan.radius == pytest.approx(deviation_mark(solve_coefficients(1), lens), rel=1e-9)
    assert scan.z_min < find_zmin(1).z_min


def test_find_zmin_in_wavelength_units():
    reduced = find_zmin(1)
    metric = find_zmin(1, wavelength=589e-9)
    assert metric.z_min_wavelengths == pytest.approx(reduced.z_min_wavelengths, rel=1e-8)


def test_small_waist_warning(caplog):
    with caplog.at_level(logging.WARNING, logger='lens.dephasing'):
        scan = find_zmin(0)
    if scan.lens_waist < scan.wavelength:
        assert 'below one wavelength' in caplog.text
    else:
        assert 'below one wavelength' not in caplog.text


def test_bracket_error_lists_trace():
    err = BracketError(5, "criterion is not monotone", [(100.0, 1e-3), (50.0, 5e-4)])
    message = str(err)
    assert message.startswith('Order 5: criterion is not monotone')
    assert 'z_R=100' in message and 'z_R=50' in message
    assert err.exit_code == 3
    assert len(err.trace) == 2


def test_opening_angle():
    scan = DephasingScan(order=3, z_min=2.0, radius=0.1, max_relative_deviation=0.0074,
                         wavelength=1.0, waist=2.0, turning_point=1.0, lens_waist=1.0)
    assert scan.opening_angle == pytest.approx(45.0)
    assert scan.z_min_wavelengths == 2.0


def test_scan_zmin_orders():
    scans = scan_zmin([1, 3], workers=1)
    assert [sc.order for sc in scans] == [1, 3]
    assert scans[1].z_min == pytest.approx(find_zmin(1).z_min, rel=1e-12)


def test_fit_zmin_laws_regimes():
    def fake(order, z):
        return DephasingScan(order, z, 0.1, 0.0074, 1.0, math.sqrt(z / math.pi), 1.0, 1.0)

    scans = [fake(o, 2.0 * o ** 2) for o in (3, 5, 7, 9)]
    laws = fit_zmin_laws(scans)
    assert set(laws) == {'small'}
    assert laws['small'].exponent == pytest.approx(2.0, rel=1e-10)
    assert laws['small'].prefactor == pytest.approx(2.0, rel=1e-10)

    scans += [fake(o, 0.5 * o ** 3) for o in (15, 21, 27)]
    laws = fit_zmin_laws(scans)
    assert laws['large'].exponent == pytest.approx(3.0, rel=1e-10)


@pytest.fixture(scope='module')
def family_scans():
    return scan_zmin(Config.ZMIN_ORDERS)


@pytest.mark.slow
def test_fit_zmin_laws_on_scanned_orders(family_scans):
    laws = fit_zmin_laws(family_scans)
    assert 0.4 <= laws['small'].exponent <= 0.6
    assert 1.4 <= laws['large'].exponent <= 1.6
    assert all(scan.lens_waist >= scan.wavelength for scan in family_scans)


@pytest.mark.slow
def test_zmin_laws_prefactors_and_opening_angle(family_scans):
    laws = fit_zmin_laws(family_scans)
    assert laws['small'].exponent == pytest.approx(0.5, abs=0.1)
    assert laws['small'].prefactor == pytest.approx(10.5, rel=0.25)
    assert laws['large'].exponent == pytest.approx(1.5, abs=0.1)
    assert laws['large'].prefactor == pytest.approx(0.8, rel=0.25)

    psi3 = next(scan for scan in family_scans if scan.order == 3)
    assert psi3.opening_angle == pytest.approx(7.5, abs=1.5)
    assert max(scan.opening_angle for scan in family_scans) == psi3.opening_angle
