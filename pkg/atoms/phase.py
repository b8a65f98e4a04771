"""
Atom-optical phase mask of a superposition lens

Two-level atoms in a far-detuned light field: saturation intensity,
Rabi frequency, dipole potential, the Raman-Nath phase imprinted on an
atom beam crossing along y, and the thin-lens reading of that phase.
All quantities here are SI; reduced-unit intensities are scaled by the
total laser power.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as csts
from scipy import integrate

from config import Config
from errors import RamanNathError
from lens.metrics import deviation_mark, focal_curvature, turning_point
from optics.modes import BeamGeometry
from optics.superposition import ModeSuperposition, focal_field, focal_field_derivative, integrated_intensity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhysicalConstants:
    h: float
    hbar: float
    c: float
    epsilon_0: float
    atomic_mass: float


# CODATA 2018 (h, hbar and c are exact in the revised SI)
CONSTANTS = PhysicalConstants(
    h=csts.h,
    hbar=csts.hbar,
    c=csts.c,
    epsilon_0=csts.epsilon_0,
    atomic_mass=csts.atomic_mass,
)


@dataclass(frozen=True)
class AtomSpecies:
    """Two-level atom: mass (kg), linewidth and transition frequency (rad/s)"""
    mass: float
    linewidth: float
    transition_frequency: float
    name: str = ''

    def __post_init__(self):
        for field in ('mass', 'linewidth', 'transition_frequency'):
            value = getattr(self, field)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{field} must be positive, got {value!r}")

    @classmethod
    def from_wavelength(cls, mass: float, linewidth: float, wavelength: float, name: str = '') -> 'AtomSpecies':
        if wavelength <= 0:
            raise ValueError("transition wavelength must be positive")
        return cls(mass, linewidth, 2 * np.pi * CONSTANTS.c / wavelength, name)

    @property
    def wavelength(self) -> float:
        return 2 * np.pi * CONSTANTS.c / self.transition_frequency


SODIUM_D2 = AtomSpecies.from_wavelength(
    mass=22.98976928 * CONSTANTS.atomic_mass,
    linewidth=2 * np.pi * 9.79e6,
    wavelength=589.0e-9,
    name='sodium-D2',
)


@dataclass(frozen=True)
class LaserDrive:
    """Total power (W), detuning omega_L - omega (rad/s) and the lens beam"""
    power: float
    detuning: float
    geometry: BeamGeometry
    superposition: ModeSuperposition

    def __post_init__(self):
        if not (np.isfinite(self.power) and self.power > 0):
            raise ValueError(f"laser power must be positive, got {self.power!r}")
        if not np.isfinite(self.detuning) or self.detuning == 0:
            raise ValueError("detuning must be finite and non-zero")

    @classmethod
    def from_linewidths(cls, power: float, detuning_linewidths: float, species: AtomSpecies,
                        geometry: BeamGeometry, superposition: ModeSuperposition) -> 'LaserDrive':
        return cls(power, detuning_linewidths * species.linewidth, geometry, superposition)

    @property
    def blue_detuned(self) -> bool:
        return self.detuning > 0


@dataclass(frozen=True)
class AtomBeam:
    """Monoenergetic atom beam with kinetic energy K_0 (J)"""
    kinetic_energy: float

    def __post_init__(self):
        if not (np.isfinite(self.kinetic_energy) and self.kinetic_energy > 0):
            raise ValueError(f"kinetic energy must be positive, got {self.kinetic_energy!r}")

    @classmethod
    def from_velocity(cls, species: AtomSpecies, velocity: float) -> 'AtomBeam':
        return cls(0.5 * species.mass * velocity ** 2)

    def wavenumber(self, species: AtomSpecies) -> float:
        """de Broglie wavenumber kappa_0 = sqrt(2 M K_0)/hbar"""
        return math.sqrt(2 * species.mass * self.kinetic_energy) / CONSTANTS.hbar


@dataclass(frozen=True)
class FocalLength:
    focal_length: float
    focusing: bool
    curvature: float


@dataclass(frozen=True)
class RayCheckResult:
    focal_length: float
    launch: np.ndarray
    angles: np.ndarray
    positions: np.ndarray
    spot_rms: float
    best_focus: float
    best_spot_rms: float

    @property
    def crossings(self) -> np.ndarray:
        """Distance behind the mask where each ray crosses the axis (nan if undeflected)"""
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(self.angles != 0, -self.launch / self.angles, np.nan)


def saturation_intensity(a: AtomSpecies) -> float:
    """I_S = pi h c Gamma / (3 lambda^3)"""
    return np.pi * CONSTANTS.h * CONSTANTS.c * a.linewidth / (3 * a.wavelength ** 3)


def rabi_frequency(intensity, a: AtomSpecies):
    """Omega = Gamma sqrt(I / (2 I_S))"""
    intensity = np.asarray(intensity, dtype=float)
    if np.any(intensity < 0):
        raise ValueError("intensity must be non-negative")
    value = a.linewidth * np.sqrt(intensity / (2 * saturation_intensity(a)))
    return value if value.ndim else float(value)


def saturation_parameter(intensity, a: AtomSpecies, detuning: float):
    """Far-detuned saturation parameter I Gamma^2 / (4 I_S delta^2)"""
    return np.asarray(intensity, dtype=float) * a.linewidth ** 2 / (4 * saturation_intensity(a) * detuning ** 2)


def dipole_potential(intensity, a: AtomSpecies, detuning: float,
                     warn_ratio: float = Config.SATURATION_WARN_RATIO):
    """
    U = hbar Gamma^2 / (8 delta) * I / I_S, repulsive for blue detuning.

    Logs a warning when the saturation parameter exceeds `warn_ratio`,
    where the first-order expansion in intensity stops holding.
    """
    if detuning == 0:
        raise ValueError("dipole potential needs a non-zero detuning")
    intensity = np.asarray(intensity, dtype=float)
    s_max = float(np.max(saturation_parameter(intensity, a, detuning))) if intensity.size else 0.0
    if s_max > warn_ratio:
        logger.warning(f"saturation parameter {s_max:.3g} exceeds {warn_ratio:g}; "
                       f"first-order dipole potential is inaccurate")
    value = CONSTANTS.hbar * a.linewidth ** 2 / (8 * detuning) * intensity / saturation_intensity(a)
    return value if value.ndim else float(value)


def phase_prefactor(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies) -> float:
    """C in dphi = -C * I_bar (signed with the detuning)"""
    return (math.sqrt(2 * a.mass) * a.linewidth ** 2
            / (16 * math.sqrt(beam.kinetic_energy) * saturation_intensity(a) * drive.detuning))


def peak_intensity(drive: LaserDrive) -> float:
    """Largest 3-D intensity of the lens beam, reached in the focal plane"""
    s, geom = drive.superposition, drive.geometry
    x_peak = turning_point(s, geom)
    x_part = integrated_intensity(s, x_peak, 0.0, geom)
    y_part = math.sqrt(2.0 / math.pi) / geom.waist_y
    return drive.power * x_part * y_part


def raman_nath_ratio(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies) -> float:
    """K_0 / max |U|"""
    u_max = abs(dipole_potential(peak_intensity(drive), a, drive.detuning))
    return beam.kinetic_energy / u_max


def check_raman_nath(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies,
                     threshold: float = Config.RAMAN_NATH_THRESHOLD) -> float:
    ratio = raman_nath_ratio(drive, beam, a)
    if ratio < threshold:
        raise RamanNathError(ratio, threshold)
    logger.debug(f"Raman-Nath ratio K0/maxU = {ratio:.4g}")
    return ratio


def phase_mask(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies, x, z=0.0,
               threshold: float = Config.RAMAN_NATH_THRESHOLD):
    """Linearized phase -C P I_bar(x, z) imprinted on atoms crossing along y (rad)"""
    check_raman_nath(drive, beam, a, threshold)
    intensity = drive.power * np.asarray(
        integrated_intensity(drive.superposition, x, z, drive.geometry), dtype=float)
    value = -phase_prefactor(drive, beam, a) * intensity
    return value if value.ndim else float(value)


def phase_mask_exact(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies, x, z=0.0,
                     threshold: float = Config.RAMAN_NATH_THRESHOLD):
    """
    Phase from integrating kappa(y) - kappa_0 across the beam.

    kappa_0 (sqrt(1 - U/K_0) - 1) over y, with U following the Gaussian
    y-profile of the TEM_m0 modes. Agrees with phase_mask to O(U/K_0).
    """
    check_raman_nath(drive, beam, a, threshold)
    geom = drive.geometry
    kappa0 = beam.wavenumber(a)
    w_y = float(geom.radius_y(z))
    profile_y = math.sqrt(2.0 / math.pi) / w_y
    scale = (CONSTANTS.hbar * a.linewidth ** 2 / (8 * drive.detuning * saturation_intensity(a))
             / beam.kinetic_energy)

    x = np.asarray(x, dtype=float)
    line = drive.power * np.asarray(integrated_intensity(drive.superposition, x, z, geom), dtype=float)
    result = np.empty(x.shape)
    for i, bar in np.ndenumerate(line):
        u0 = scale * bar * profile_y

        def integrand(y):
            return math.sqrt(1.0 - u0 * math.exp(-2.0 * y * y / w_y ** 2)) - 1.0

        value, _ = integrate.quad(integrand, -12.0 * w_y, 12.0 * w_y, epsabs=0.0, epsrel=1e-12, limit=200)
        result[i] = kappa0 * value
    return result if result.ndim else float(result)


def focal_length_closed_form(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies) -> FocalLength:
    """f = kappa_0 / (2 C A_SI); negative for red detuning"""
    curvature = drive.power * focal_curvature(drive.superposition, drive.geometry)
    f = beam.wavenumber(a) / (2 * phase_prefactor(drive, beam, a) * curvature)
    return FocalLength(f, f > 0, curvature)


def focal_length(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies, points: int = Config.RAY_COUNT,
                 threshold: float = Config.RAMAN_NATH_THRESHOLD) -> FocalLength:
    """
    Thin-lens focal length from a fit of the phase over |x| <= d/2.

    dphi = a2 x^2 + a4 x^4 + a6 x^6 by least squares; f = -kappa_0/(2 a2).
    """
    half = 0.5 * deviation_mark(drive.superposition, drive.geometry)
    x = np.linspace(-half, half, points)
    phase = phase_mask(drive, beam, a, x, threshold=threshold)
    # fit in u = x / half so the columns are O(1)
    u = x / half
    design = np.column_stack([u ** 2, u ** 4, u ** 6])
    coeffs, *_ = np.linalg.lstsq(design, phase, rcond=None)
    f = -beam.wavenumber(a) * half ** 2 / (2 * coeffs[0])
    curvature = drive.power * focal_curvature(drive.superposition, drive.geometry)
    result = FocalLength(f, f > 0, curvature)
    if not result.focusing:
        logger.info(f"order {drive.superposition.order}: red-detuned lens diverges (f={f:.4g} m)")
    return result


def kick_angles(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies, x) -> np.ndarray:
    """Transverse deflection (1/kappa_0) d(dphi)/dx in the focal plane of the laser"""
    s, geom = drive.superposition, drive.geometry
    x = np.asarray(x, dtype=float)
    w0 = geom.waist_x
    xi = math.sqrt(2.0) * x / w0
    d_intensity = 4.0 / w0 ** 2 * focal_field(s, xi) * focal_field_derivative(s, xi)
    return -phase_prefactor(drive, beam, a) * drive.power * d_intensity / beam.wavenumber(a)


def ray_check(drive: LaserDrive, beam: AtomBeam, a: AtomSpecies, n_rays: int = Config.RAY_COUNT,
              window: float = 0.5, threshold: float = Config.RAMAN_NATH_THRESHOLD) -> RayCheckResult:
    """
    Ballistic rays behind the thin phase mask.

    Rays start parallel, uniformly over |x| <= window * d, and are
    evaluated in the plane z = f. The best-focus plane minimizes the RMS
    spread of the whole bundle.
    """
    if n_rays < 1:
        raise ValueError("ray check needs at least one ray")
    check_raman_nath(drive, beam, a, threshold)
    d = deviation_mark(drive.superposition, drive.geometry)
    f = focal_length_closed_form(drive, beam, a).focal_length
    launch = np.linspace(-window * d, window * d, n_rays) if n_rays > 1 else np.zeros(1)
    angles = kick_angles(drive, beam, a, launch)
    positions = launch + angles * f
    spot = float(np.sqrt(np.mean(positions ** 2)))

    denom = float(np.sum(angles ** 2))
    best = -float(np.sum(launch * angles)) / denom if denom > 0 else f
    best_spot = float(np.sqrt(np.mean((launch + angles * best) ** 2)))
    logger.info(f"ray check: {n_rays} rays over |x|<={window:g}d, RMS at f = {spot:.3e} m, "
                f"best focus {best:.6g} m")
    return RayCheckResult(f, launch, angles, positions, spot, best, best_spot)


def useful_width_ratio(drive: LaserDrive) -> float:
    """2d / (2 w_0x): share of the beam width inside the deviation marks"""
    return deviation_mark(drive.superposition, drive.geometry) / drive.geometry.waist_x
