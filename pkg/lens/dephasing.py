"""
Gouy dephasing of the crossed-beam spherical lens

Two identical lens beams, one along z (modulated in x) and one along x
(modulated in z), add incoherently. Away from the focus the relative Gouy
phases of the odd modes bend the combined profile away from the focal
one; z_min is the shortest Rayleigh length that keeps this inside the
deviation budget on the circle of radius d.

Rayleigh lengths are quoted for the curvature-matched family: z_min is
the Rayleigh length of the Psi_1 beam whose focal curvature the lens
matches, while the lens beam itself is focused tighter by rayleigh_match.
"""

import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Sequence

import numpy as np
from scipy import optimize

from config import Config
from errors import BracketError, UndefinedPointError
from lens.metrics import PowerLaw, deviation_mark, fit_power_law, map_orders, rayleigh_match, turning_point
from optics.modes import BeamGeometry
from optics.superposition import ModeSuperposition, integrated_intensity, order_to_J, solve_coefficients

logger = logging.getLogger(__name__)

INCOHERENT = 'incoherent'

# Rayleigh-length walk limits, in wavelengths
ZMIN_START = 1e4
ZMIN_CEILING = 1e12
ZMIN_FLOOR = 1e-3


@dataclass(frozen=True)
class CrossedLensConfig:
    """One superposition and one geometry shared by both crossed beams"""
    superposition: ModeSuperposition
    geometry: BeamGeometry
    combination: str = INCOHERENT

    def __post_init__(self):
        if self.combination != INCOHERENT:
            raise ValueError(f"only incoherent beam combination is modelled, got {self.combination!r}")


@dataclass(frozen=True)
class DephasingScan:
    """
    z_min and waist belong to the curvature-matched Psi_1 beam; lens_waist,
    radius and turning_point to the order-(2J+1) lens beam at that z_min.
    """
    order: int
    z_min: float
    radius: float
    max_relative_deviation: float
    wavelength: float
    waist: float
    turning_point: float
    lens_waist: float

    @property
    def z_min_wavelengths(self) -> float:
        return self.z_min / self.wavelength

    @property
    def opening_angle(self) -> float:
        """Far-field half-angle w_0x/z_Rx at z_min, in degrees"""
        return math.degrees(math.atan(self.waist / self.z_min))


def crossed_intensity(cfg: CrossedLensConfig, x, z):
    """I(x,z) + I(z,x): beam 1 along z, beam 2 along x"""
    s, geom = cfg.superposition, cfg.geometry
    return integrated_intensity(s, x, z, geom) + integrated_intensity(s, z, x, geom)


def focal_reference(cfg: CrossedLensConfig, x, z):
    """Dephasing-free profile: each beam replaced by its own focal slice"""
    s, geom = cfg.superposition, cfg.geometry
    return integrated_intensity(s, x, 0.0, geom) + integrated_intensity(s, z, 0.0, geom)


def relative_deviation(cfg: CrossedLensConfig, x, z):
    """(I_cross - I_focal) / I_focal"""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any((x == 0) & (z == 0)):
        raise UndefinedPointError("relative deviation is undefined at the lens centre (x = z = 0)")
    reference = focal_reference(cfg, x, z)
    return (crossed_intensity(cfg, x, z) - reference) / reference


def max_deviation_on_circle(cfg: CrossedLensConfig, radius: float, angles: int = Config.ANGLE_SAMPLES) -> float:
    """max |dI| over `angles` equally spaced points of x^2 + z^2 = radius^2"""
    theta = np.linspace(0.0, 2 * np.pi, angles, endpoint=False)
    return float(np.max(np.abs(relative_deviation(cfg, radius * np.cos(theta), radius * np.sin(theta)))))


def find_zmin(J: int, tol: float = Config.DEVIATION_TOLERANCE, wavelength: float = 1.0,
              angles: int = Config.ANGLE_SAMPLES,
              aperture_waist: float = Config.ZMIN_APERTURE_WAIST) -> DephasingScan:
    """
    Smallest Rayleigh length with max |dI| <= tol on the circle r = d_{2J+1}.

    The lens beam is matched to the focal curvature of a Psi_1 beam of
    Rayleigh length z_R, and r is the deviation mark of that lens. Below a
    reference waist of `aperture_waist` wavelengths r stops shrinking and
    stays at the mark of the lens matched to that waist.

    Walks z_R down by halving from ZMIN_START wavelengths until the
    criterion fails, checking that it grows along the walk, then refines
    the crossing with Brent's method in log z_R.
    """
    s = solve_coefficients(J)
    sigma = rayleigh_match(J)
    # d scales with w_0; solve it once in waist units
    mark = deviation_mark(s, BeamGeometry.reduced(), tol)
    floor = aperture_waist * wavelength

    def lens_geometry(rayleigh):
        return BeamGeometry(wavelength, rayleigh, rayleigh).rescaled_x(sigma)

    def circle_radius(rayleigh):
        reference = BeamGeometry(wavelength, rayleigh, rayleigh)
        return mark * sigma * max(reference.waist_x, floor)

    def criterion(rayleigh):
        cfg = CrossedLensConfig(s, lens_geometry(rayleigh))
        return max_deviation_on_circle(cfg, circle_radius(rayleigh), angles)

    trace = []
    hi = ZMIN_START * wavelength
    value = criterion(hi)
    trace.append((hi, value))
    while value > tol:
        hi *= 10.0
        if hi > ZMIN_CEILING * wavelength:
            raise BracketError(s.order, "criterion stays above tolerance for every Rayleigh length tried", trace)
        value = criterion(hi)
        trace.append((hi, value))

    lo, previous = hi, value
    while True:
        lo /= 2.0
        if lo < ZMIN_FLOOR * wavelength:
            raise BracketError(s.order, "criterion never exceeds tolerance down to the scan floor", trace)
        value = criterion(lo)
        trace.append((lo, value))
        if value < previous:
            raise BracketError(s.order, "criterion is not monotone in the Rayleigh length", trace)
        if value > tol:
            break
        previous = value

    for rayleigh, dev in trace:
        logger.debug(f"order {s.order}: z_R={rayleigh / wavelength:.6g} lambda max|dI|={dev:.6g}")

    log_root = optimize.brentq(lambda u: criterion(math.exp(u)) - tol, math.log(lo), math.log(2.0 * lo),
                               xtol=1e-12, rtol=1e-12)
    z_min = math.exp(log_root)
    lens = lens_geometry(z_min)
    scan = DephasingScan(
        order=s.order,
        z_min=z_min,
        radius=circle_radius(z_min),
        max_relative_deviation=criterion(z_min),
        wavelength=wavelength,
        waist=BeamGeometry(wavelength, z_min, z_min).waist_x,
        turning_point=turning_point(s, lens),
        lens_waist=lens.waist_x,
    )
    if scan.lens_waist < wavelength:
        logger.warning(f"order {s.order}: lens waist {scan.lens_waist / wavelength:.3g} lambda at z_min is below "
                       f"one wavelength; paraxial optics is doubtful there")
    logger.info(f"order {s.order}: z_min={scan.z_min_wavelengths:.6g} lambda, "
                f"opening angle {scan.opening_angle:.3g} deg")
    return scan


def _zmin_for_order(order, tol, wavelength, angles, aperture_waist):
    return find_zmin(order_to_J(order), tol, wavelength, angles, aperture_waist)


def scan_zmin(orders: Sequence[int] = Config.ZMIN_ORDERS, tol: float = Config.DEVIATION_TOLERANCE,
              wavelength: float = 1.0, angles: int = Config.ANGLE_SAMPLES, workers: int = 1,
              aperture_waist: float = Config.ZMIN_APERTURE_WAIST) -> List[DephasingScan]:
    """find_zmin for every order; orders run in a worker pool"""
    func = partial(_zmin_for_order, tol=tol, wavelength=wavelength, angles=angles, aperture_waist=aperture_waist)
    return map_orders(func, orders, workers)


def fit_zmin_laws(scans: Sequence[DephasingScan]) -> Dict[str, PowerLaw]:
    """Power laws z_min/lambda vs order for the small (3..13) and large (15..55) regimes"""
    regimes = {
        'small': [scan for scan in scans if 1 < scan.order <= 13],
        'large': [scan for scan in scans if 15 <= scan.order <= 55],
    }
    laws = {}
    for name, members in regimes.items():
        if len(members) >= 2:
            laws[name] = fit_power_law([m.order for m in members], [m.z_min_wavelengths for m in members])
    return laws
