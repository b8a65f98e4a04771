"""
Paraxial Hermite-Gaussian beam modes
Normalized Hermite functions, beam geometry and the TEM_mn mode field
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)

# phi_0(0) = pi^(-1/4)
PI_QUARTER = np.pi ** -0.25


@dataclass(frozen=True)
class BeamGeometry:
    """Laser wavelength and the Rayleigh lengths of the two transverse axes"""
    wavelength: float
    rayleigh_x: float
    rayleigh_y: float

    def __post_init__(self):
        for name in ('wavelength', 'rayleigh_x', 'rayleigh_y'):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @classmethod
    def from_waists(cls, wavelength: float, waist_x: float, waist_y: float = None) -> 'BeamGeometry':
        """Build a geometry from focal waist radii instead of Rayleigh lengths"""
        waist_y = waist_x if waist_y is None else waist_y
        if waist_x <= 0 or waist_y <= 0:
            raise ValueError("waists must be positive")
        return cls(wavelength,
                   np.pi * waist_x ** 2 / wavelength,
                   np.pi * waist_y ** 2 / wavelength)

    @classmethod
    def reduced(cls, divergence: float = 0.01) -> 'BeamGeometry':
        """Unit-waist geometry; `divergence` is w_0/z_R (far-field half-angle)"""
        return cls(np.pi * divergence, 1.0 / divergence, 1.0 / divergence)

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.wavelength

    @property
    def waist_x(self) -> float:
        return math.sqrt(self.wavelength * self.rayleigh_x / np.pi)

    @property
    def waist_y(self) -> float:
        return math.sqrt(self.wavelength * self.rayleigh_y / np.pi)

    @property
    def divergence_x(self) -> float:
        return self.waist_x / self.rayleigh_x

    def rescaled_x(self, waist_scale: float) -> 'BeamGeometry':
        """Same beam with w_0x multiplied by `waist_scale` (z_Rx by its square)"""
        return BeamGeometry(self.wavelength, self.rayleigh_x * waist_scale ** 2, self.rayleigh_y)

    def radius_x(self, z):
        return beam_radius(z, self.waist_x, self.rayleigh_x)

    def radius_y(self, z):
        return beam_radius(z, self.waist_y, self.rayleigh_y)

    def gouy_x(self, z):
        return gouy_phase(z, self.rayleigh_x)

    def gouy_y(self, z):
        return gouy_phase(z, self.rayleigh_y)


@dataclass(frozen=True)
class ModeIndex:
    """TEM_mn mode indices (m along x, n along y)"""
    m: int
    n: int = 0

    def __post_init__(self):
        _check_order(self.m)
        _check_order(self.n)

    @property
    def is_lens_mode(self) -> bool:
        return self.m % 2 == 1 and self.n == 0


def _check_order(m):
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"Hermite order must be a non-negative integer, got {m!r}")


def hermite_functions(max_order: int, xi) -> np.ndarray:
    """
    All normalized Hermite functions phi_0 .. phi_max_order at `xi`.

    Uses the normalized three-term recurrence
        phi_{m+1} = xi sqrt(2/(m+1)) phi_m - sqrt(m/(m+1)) phi_{m-1}
    which stays bounded where H_m itself overflows (m ~ 35 and up).
    Returns an array of shape (max_order + 1,) + shape(xi).
    """
    _check_order(max_order)
    xi = np.asarray(xi, dtype=float)
    phi = np.empty((max_order + 1,) + xi.shape)
    phi[0] = PI_QUARTER * np.exp(-0.5 * xi ** 2)
    if max_order >= 1:
        phi[1] = np.sqrt(2.0) * xi * phi[0]
    for m in range(1, max_order):
        phi[m + 1] = (xi * np.sqrt(2.0 / (m + 1)) * phi[m]
                      - np.sqrt(m / (m + 1.0)) * phi[m - 1])
    return phi


def hermite_fn(m: int, xi):
    """phi_m(xi) = H_m(xi) exp(-xi^2/2) / sqrt(2^m m! sqrt(pi))"""
    _check_order(m)
    value = hermite_functions(m, xi)[m]
    return value if value.ndim else float(value)


def hermite_fn_derivative(m: int, xi):
    """d phi_m / d xi = sqrt(m/2) phi_{m-1} - sqrt((m+1)/2) phi_{m+1}"""
    _check_order(m)
    phi = hermite_functions(m + 1, xi)
    value = -np.sqrt((m + 1) / 2.0) * phi[m + 1]
    if m > 0:
        value = value + np.sqrt(m / 2.0) * phi[m - 1]
    return value if np.ndim(value) else float(value)


def gouy_phase(z, z_R):
    """Longitudinal Gouy phase arctan(z/z_R)"""
    return np.arctan(np.asarray(z, dtype=float) / z_R)


def beam_radius(z, waist, z_R):
    """w(z) = w_0 sqrt(1 + z^2/z_R^2)"""
    z = np.asarray(z, dtype=float)
    return waist * np.sqrt(1.0 + (z / z_R) ** 2)


def wavefront_curvature(z, z_R):
    """1/R(z) = z/(z^2 + z_R^2); zero at the focus"""
    z = np.asarray(z, dtype=float)
    return z / (z ** 2 + z_R ** 2)


def _axis_factor(order, coord, z, waist, z_R, wavenumber, derivative=False):
    """One transverse factor of the HG_mn amplitude (or its derivative along `coord`)"""
    coord = np.asarray(coord, dtype=float)
    w = beam_radius(z, waist, z_R)
    xi = np.sqrt(2.0) * coord / w
    amplitude = np.sqrt(np.sqrt(2.0) / w)
    curvature = wavefront_curvature(z, z_R)
    phase = np.exp(0.5j * wavenumber * coord ** 2 * curvature
                   - 1j * (order + 0.5) * gouy_phase(z, z_R))
    phi = hermite_functions(order + 1, xi)
    value = phi[order]
    if not derivative:
        return amplitude * value * phase
    dphi = -np.sqrt((order + 1) / 2.0) * phi[order + 1]
    if order > 0:
        dphi = dphi + np.sqrt(order / 2.0) * phi[order - 1]
    return amplitude * phase * (dphi * np.sqrt(2.0) / w + 1j * wavenumber * curvature * coord * value)


def hg_mode(idx: ModeIndex, r: Tuple, geom: BeamGeometry):
    """Normalized paraxial mode psi_mn at r = (x, y, z)"""
    x, y, z = r
    k = geom.wavenumber
    return (_axis_factor(idx.m, x, z, geom.waist_x, geom.rayleigh_x, k)
            * _axis_factor(idx.n, y, z, geom.waist_y, geom.rayleigh_y, k))


def hg_mode_dx(idx: ModeIndex, r: Tuple, geom: BeamGeometry):
    """Analytic d(psi_mn)/dx at r = (x, y, z)"""
    x, y, z = r
    k = geom.wavenumber
    return (_axis_factor(idx.m, x, z, geom.waist_x, geom.rayleigh_x, k, derivative=True)
            * _axis_factor(idx.n, y, z, geom.waist_y, geom.rayleigh_y, k))
