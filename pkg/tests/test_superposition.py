"""
Tests for the Taylor cancellation system and superposition profiles
"""
import math

import numpy as np
import pytest
import sympy as sp
from numpy.testing import assert_allclose
from scipy import integrate

from lens.metrics import turning_point_ratio
from optics.modes import hermite_functions
from optics.superposition import (
    ModeSuperposition,
    cancellation_polynomial,
    coefficient_table,
    field_profile,
    focal_field,
    focal_slope,
    hermite_norm,
    integrated_intensity,
    order_to_J,
    profile_grid,
    solve_coefficients,
    superposition_for_order,
    taylor_matrix,
)

ROOT_PI = math.sqrt(math.pi)


def test_taylor_matrix_single_mode():
    system = taylor_matrix(0)
    assert system.matrix.shape == (1, 1)
    assert system.matrix[0, 0] == pytest.approx(2 / math.sqrt(2 * ROOT_PI), rel=1e-15)


def test_taylor_matrix_fundamental_cubic_term():
    T = taylor_matrix(1).matrix
    assert T[0, 0] == pytest.approx(2 / math.sqrt(2 * ROOT_PI), rel=1e-14)
    assert T[1, 0] == pytest.approx(-1 / math.sqrt(2 * ROOT_PI), rel=1e-14)


def test_taylor_matrix_third_and_fifth_mode_columns():
    T1 = taylor_matrix(1).matrix
    assert_allclose(T1[:, 1], np.array([-12, 14]) / math.sqrt(48 * ROOT_PI), rtol=1e-14)
    T2 = taylor_matrix(2).matrix
    assert_allclose(T2[:, 2], np.array([120, -220, 127]) / math.sqrt(3840 * ROOT_PI), rtol=1e-14)


def test_taylor_matrix_exact_entries_are_rational():
    system = taylor_matrix(2)
    assert system.exact[1][1] == 14
    assert all(isinstance(v, sp.Rational) for row in system.exact for v in row)


def test_hermite_norm():
    assert hermite_norm(3) == pytest.approx(1 / math.sqrt(48 * ROOT_PI), rel=1e-15)
    assert hermite_norm(200) == pytest.approx(
        math.exp(-0.5 * (200 * math.log(2) + math.lgamma(201) + 0.5 * math.log(math.pi))), rel=1e-12)


def test_single_mode_coefficients():
    s = solve_coefficients(0)
    assert s.order == 1
    assert s.coefficients == (1.0,)


def test_five_mode_ratios_exact():
    ratios = solve_coefficients(2).ratios()
    assert ratios[1] == pytest.approx(18 * math.sqrt(6) / 71, rel=1e-12)
    assert ratios[2] == pytest.approx(2 * math.sqrt(30) / 71, rel=1e-12)
    assert ratios[1] == pytest.approx(0.6209974, abs=1e-7)
    assert ratios[2] == pytest.approx(0.1542880, abs=1e-7)


def test_three_mode_ratio_exact():
    assert solve_coefficients(1).ratios()[1] == pytest.approx(math.sqrt(6) / 7, rel=1e-12)


@pytest.mark.parametrize('J', [1, 2, 5, 9, 16])
def test_coefficients_match_closed_form_polynomial(J):
    b = cancellation_polynomial(J)
    expected = np.array([float(b[j] / b[0]) * hermite_norm(1) / hermite_norm(2 * j + 1) for j in range(J + 1)])
    assert_allclose(solve_coefficients(J).ratios(), expected, rtol=1e-12)


@pytest.mark.parametrize('J', [1, 3, 8])
def test_taylor_cancellation_exact(J):
    exact = taylor_matrix(J).exact
    b = cancellation_polynomial(J)
    rows = [sum(exact[k][j] * b[j] for j in range(J + 1)) for k in range(J + 1)]
    assert rows[0] == 1
    assert all(r == 0 for r in rows[1:])


@pytest.mark.parametrize('J', [1, 2, 4])
def test_focal_field_linear_to_order(J):
    s = solve_coefficients(J)
    xi = 0.05
    deviation = abs(focal_field(s, xi) / (focal_slope(s) * xi) - 1)
    assert deviation < 10 * xi ** (2 * J + 2)


def test_coefficients_positive_and_normalized():
    for s in coefficient_table(33):
        c = s.array
        assert np.all(c > 0)
        assert np.sum(c ** 2) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.slow
def test_largest_family_positive():
    s = solve_coefficients(27)
    assert s.order == 55
    assert np.all(s.array > 0)
    assert all(v > 0 for J in range(28) for v in cancellation_polynomial(J))


def test_solve_rejects_negative_J():
    with pytest.raises(ValueError):
        solve_coefficients(-1)


def test_order_mapping():
    assert order_to_J(1) == 0
    assert order_to_J(23) == 11
    for bad in (0, 4, -3):
        with pytest.raises(ValueError):
            order_to_J(bad)
    assert superposition_for_order(5) is solve_coefficients(2)


def test_superposition_validation():
    with pytest.raises(ValueError):
        ModeSuperposition(3, (1.0,))
    with pytest.raises(ValueError):
        ModeSuperposition(3, (0.5, 0.5))
    with pytest.raises(ValueError):
        ModeSuperposition(1, (-1.0,))
    with pytest.raises(ValueError):
        ModeSuperposition(2, (1.0, 0.0))


def test_field_profile_zero_on_axis_and_real_at_focus(unit_geometry):
    s = solve_coefficients(0)
    assert field_profile(s, 0.0, 0.0, unit_geometry) == 0
    x = np.linspace(-2, 2, 41)
    for J in (0, 3):
        values = field_profile(solve_coefficients(J), x, 0.0, unit_geometry)
        assert np.all(values.imag == 0)


def test_fundamental_profile_increasing_near_axis(unit_geometry):
    x = np.linspace(0, 1 / math.sqrt(2), 500)
    values = field_profile(solve_coefficients(0), x, 0.0, unit_geometry).real
    assert np.all(np.diff(values) > 0)


def test_wide_superposition_linear_over_two_waists(unit_geometry):
    s = superposition_for_order(23)
    x = np.linspace(-2, 2, 801)
    x = x[x != 0]
    values = field_profile(s, x, 0.0, unit_geometry).real
    slope = field_profile(s, 1e-6, 0.0, unit_geometry).real / 1e-6
    assert np.max(np.abs(values - slope * x) / np.abs(slope * x)) < 0.01


def test_integrated_intensity_node_on_axis(unit_geometry):
    s = solve_coefficients(0)
    for z in (0.0, 30.0, -250.0):
        assert integrated_intensity(s, 0.0, z, unit_geometry) == 0


@pytest.mark.parametrize('J,z_over_zr', [(0, 0.0), (2, 0.0), (2, 1.7), (6, -0.4)])
def test_integrated_intensity_normalized(unit_geometry, J, z_over_zr):
    s = solve_coefficients(J)
    z = z_over_zr * unit_geometry.rayleigh_x
    w = float(unit_geometry.radius_x(z))
    total, _ = integrate.quad(lambda x: integrated_intensity(s, x, z, unit_geometry), -25 * w, 25 * w,
                              epsabs=1e-13, epsrel=1e-12, limit=400)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_integrated_intensity_term_by_term(unit_geometry):
    s = solve_coefficients(2)
    x = 0.3
    xi = math.sqrt(2) * x
    phi = hermite_functions(5, xi)
    expected = (s.coefficients[0] * phi[1] + s.coefficients[1] * phi[3] + s.coefficients[2] * phi[5]) ** 2
    assert integrated_intensity(s, x, 0.0, unit_geometry) == pytest.approx(math.sqrt(2) * expected, rel=1e-14)


def test_integrated_intensity_symmetries(unit_geometry):
    s = solve_coefficients(4)
    x = np.linspace(-3, 3, 61)
    z = 0.6 * unit_geometry.rayleigh_x
    assert_allclose(integrated_intensity(s, x, z, unit_geometry),
                    integrated_intensity(s, x, -z, unit_geometry), rtol=1e-12, atol=1e-15)
    assert_allclose(integrated_intensity(s, x, z, unit_geometry),
                    integrated_intensity(s, -x, z, unit_geometry), rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize('order', list(range(9, 35, 2)))
def test_turning_point_follows_oscillator_scaling(order):
    assert turning_point_ratio(superposition_for_order(order)) == pytest.approx(0.57, rel=0.05)


def test_profile_grid_defaults():
    x = profile_grid(9)
    assert x.size == 2001
    assert x[-1] == pytest.approx(1.2 * 0.57 * 3)
    assert x[0] == -x[-1]
    with pytest.raises(ValueError):
        profile_grid(9, points=1)
