"""
Lens quality metrics for odd-mode superpositions

Focal curvature, the 0.74% deviation mark, the useful-power fraction,
power compensation, Rayleigh-length rematching and the rematched lens family.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from config import Config
from errors import DeviationMarkError
from optics.modes import BeamGeometry
from optics.superposition import (
    ModeSuperposition,
    focal_field,
    focal_field_derivative,
    focal_slope,
    order_to_J,
    solve_coefficients,
)

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# Printed lens parameters: order -> (d/d_1, E in %, E/E_1)
PUBLISHED_TABLE = {
    1: (1.00, 0.048, 1),
    3: (3.24, 1.6, 34),
    5: (4.75, 5.1, 107),
    7: (5.74, 9.1, 190),
    9: (6.45, 13, 269),
    11: (7.00, 16, 344),
    13: (7.42, 20, 411),
    15: (7.78, 23, 472),
    17: (8.06, 25, 526),
    19: (8.32, 28, 576),
    21: (8.53, 30, 620),
    23: (8.70, 32, 662),
    25: (8.87, 33, 699),
    27: (9.01, 35, 735),
    29: (9.15, 37, 766),
    31: (9.27, 38, 795),
    33: (9.36, 39, 825),
}


@dataclass(frozen=True)
class LensMetrics:
    """Quality figures of one superposition lens (unit total power)"""
    order: int
    curvature: float
    deviation_mark: float
    power_fraction: float
    power_ratio: float
    rayleigh_scale: float
    waist: float
    deviation_ratio: float = 1.0
    power_fraction_ratio: float = 1.0

    @property
    def width_fraction(self) -> float:
        """d / w_0x: useful share of a cylindrical lens"""
        return self.deviation_mark / self.waist

    @property
    def area_fraction(self) -> float:
        """(d / w_0x)^2: useful central area of a circular lens"""
        return self.width_fraction ** 2

    @property
    def cube_law_ratio(self) -> float:
        return self.power_fraction_ratio / self.deviation_ratio ** 3


@dataclass(frozen=True)
class PowerLaw:
    """value = prefactor * order ** exponent"""
    prefactor: float
    exponent: float

    def __call__(self, order):
        return self.prefactor * np.asarray(order, dtype=float) ** self.exponent


def fit_power_law(orders: Sequence[float], values: Sequence[float], exponent: float = None) -> PowerLaw:
    """
    Least-squares line in log-log space.

    With `exponent` given only the prefactor is fitted.
    """
    orders = np.asarray(orders, dtype=float)
    values = np.asarray(values, dtype=float)
    needed = 1 if exponent is not None else 2
    if orders.size < needed or orders.shape != values.shape:
        raise ValueError(f"power-law fit needs at least {needed} (order, value) pairs")
    if np.any(orders <= 0) or np.any(values <= 0):
        raise ValueError("power-law fit needs positive orders and values")
    if exponent is not None:
        intercept = np.mean(np.log(values) - exponent * np.log(orders))
        return PowerLaw(float(math.exp(intercept)), float(exponent))
    slope, intercept = np.polyfit(np.log(orders), np.log(values), 1)
    return PowerLaw(float(math.exp(intercept)), float(slope))


def focal_curvature(s: ModeSuperposition, geom: BeamGeometry) -> float:
    """A in I(x,0) ~ A x^2, i.e. (sqrt2/w0) (df/dx)^2 at the axis"""
    w0 = geom.waist_x
    slope_x = focal_slope(s) * SQRT2 / w0
    return SQRT2 / w0 * slope_x ** 2


def _relative_deviation(s: ModeSuperposition, xi):
    """|I(xi,0)/(A x^2) - 1| written in the waist-free coordinate xi"""
    xi = np.asarray(xi, dtype=float)
    return np.abs((focal_field(s, xi) / (focal_slope(s) * xi)) ** 2 - 1.0)


def _outermost_peak_xi(s: ModeSuperposition) -> float:
    """xi of the outermost local maximum of f(xi)^2 on xi > 0"""
    hi = math.sqrt(2.0 * s.order + 1.0) + 6.0
    xi = np.linspace(0.0, hi, 20001)[1:]
    intensity = focal_field(s, xi) ** 2
    inner = (intensity[1:-1] > intensity[:-2]) & (intensity[1:-1] >= intensity[2:])
    peaks = np.nonzero(inner & (intensity[1:-1] > 1e-6 * intensity.max()))[0] + 1
    if peaks.size == 0:
        raise DeviationMarkError(s.order, 0.0, hi)
    i = peaks[-1]
    return optimize.brentq(lambda t: focal_field_derivative(s, t), xi[i - 1], xi[i + 1], xtol=1e-14)


def turning_point(s: ModeSuperposition, geom: BeamGeometry) -> float:
    """Outermost maximum of I(x,0), in the geometry's length unit"""
    return _outermost_peak_xi(s) * geom.waist_x / SQRT2


def turning_point_ratio(s: ModeSuperposition) -> float:
    """Turning point over sqrt(2J+1) w_0x (harmonic-oscillator scaling gives ~0.57)"""
    return _outermost_peak_xi(s) / SQRT2 / math.sqrt(s.order)


def _deviation_mark_xi(s: ModeSuperposition, tol: float, step: float) -> float:
    limit = _outermost_peak_xi(s)
    xi = np.arange(1, int(limit / (SQRT2 * step)) + 1) * SQRT2 * step
    above = np.nonzero(_relative_deviation(s, xi) > tol)[0]
    if above.size == 0:
        raise DeviationMarkError(s.order, tol, limit / SQRT2)
    i = above[0]
    lo = xi[i - 1] if i > 0 else 1e-8
    root = optimize.brentq(lambda t: float(_relative_deviation(s, t)) - tol, lo, xi[i],
                           xtol=1e-15, rtol=1e-12)
    logger.debug(f"order {s.order}: deviation mark xi*={root:.12g} bracketed in [{lo:.6g}, {xi[i]:.6g}]")
    return root


def deviation_mark(s: ModeSuperposition, geom: BeamGeometry, tol: float = Config.DEVIATION_TOLERANCE,
                   step: float = Config.SCAN_STEP) -> float:
    """
    Smallest x > 0 where I(x,0) leaves the parabola A x^2 by `tol` relative.

    Scans outward in steps of `step` waists, then refines with Brent's method.
    """
    if not 0 < tol < 0.1:
        raise ValueError(f"tolerance must lie in (0, 0.1), got {tol}")
    return _deviation_mark_xi(s, tol, step) * geom.waist_x / SQRT2


def power_fraction(s: ModeSuperposition, d: float, geom: BeamGeometry) -> float:
    """Share of the (unit) beam power inside |x| <= d"""
    if d <= 0:
        raise ValueError("deviation mark must be positive")
    xi_d = SQRT2 * d / geom.waist_x
    if not np.isfinite(xi_d):
        return 1.0
    # the field is below 1e-30 beyond |xi| = 12 + sqrt(order)
    upper = min(xi_d, 12.0 + math.sqrt(2.0 * s.order + 1.0))
    value, error = integrate.quad(lambda t: focal_field(s, t) ** 2, 0.0, upper,
                                  epsabs=1e-13, epsrel=1e-12, limit=200)
    logger.debug(f"order {s.order}: power fraction quadrature error estimate {error:.2e}")
    return 2.0 * value


def power_compensation(J: int) -> float:
    """P_{2J+1}/P_1 giving equal focal curvature at equal waist"""
    return (focal_slope(solve_coefficients(0)) / focal_slope(solve_coefficients(J))) ** 2


def rayleigh_match(J: int) -> float:
    """Waist scale sigma that gives Psi_{2J+1} the curvature of Psi_1; z_Rx scales by sigma^2"""
    unit = BeamGeometry.reduced()
    ratio = focal_curvature(solve_coefficients(J), unit) / focal_curvature(solve_coefficients(0), unit)
    return ratio ** (1.0 / 3.0)


def rematched_geometry(J: int, geom: BeamGeometry) -> BeamGeometry:
    return geom.rescaled_x(rayleigh_match(J))


def lens_metrics(order: int, tol: float = Config.DEVIATION_TOLERANCE, rematched: bool = True) -> LensMetrics:
    """
    All metrics for one order at unit power.

    With `rematched` the waist is rescaled so the focal curvature matches
    Psi_1 at unit waist, the normalization of the published lens table.
    """
    J = order_to_J(order)
    s = solve_coefficients(J)
    sigma = rayleigh_match(J)
    geom = BeamGeometry.reduced()
    if rematched:
        geom = geom.rescaled_x(sigma)
    d = deviation_mark(s, geom, tol)
    metrics = LensMetrics(
        order=order,
        curvature=focal_curvature(s, geom),
        deviation_mark=d,
        power_fraction=power_fraction(s, d, geom),
        power_ratio=power_compensation(J),
        rayleigh_scale=sigma ** 2,
        waist=geom.waist_x,
    )
    logger.info(f"order {order}: d={d:.6g} w0={geom.waist_x:.6g} E={100 * metrics.power_fraction:.4g}%")
    return metrics


def map_orders(func: Callable, orders: Iterable[int], workers: int = 1) -> List:
    """Evaluate `func` per order, in a process pool when workers > 1"""
    orders = list(orders)
    if workers <= 1 or len(orders) <= 1:
        return [func(order) for order in orders]
    with ProcessPoolExecutor(max_workers=min(workers, len(orders))) as pool:
        return list(pool.map(func, orders))


def table1(max_order: int = Config.TABLE1_MAX_ORDER, tol: float = Config.DEVIATION_TOLERANCE,
           workers: int = 1) -> List[LensMetrics]:
    """Rematched family 1..max_order with d/d_1 and E/E_1 filled in"""
    order_to_J(max_order)
    rows = map_orders(partial(lens_metrics, tol=tol), range(1, max_order + 1, 2), workers)
    first = rows[0]
    table = [
        replace(row,
                deviation_ratio=row.deviation_mark / first.deviation_mark,
                power_fraction_ratio=row.power_fraction / first.power_fraction)
        for row in rows
    ]
    for row in table:
        printed = PUBLISHED_TABLE.get(row.order)
        if printed is None:
            continue
        diff = abs(row.deviation_ratio - printed[0]) / printed[0]
        if diff > 0.01:
            logger.warning(f"order {row.order}: d/d_1={row.deviation_ratio:.4f} differs from "
                           f"printed {printed[0]} by {100 * diff:.2f}%")
    return table


def compare_with_published(table: Sequence[LensMetrics]) -> Dict[int, Tuple[float, float, float]]:
    """Relative differences (d/d_1, E, E/E_1) against the printed table, per order"""
    result = {}
    for row in table:
        printed = PUBLISHED_TABLE.get(row.order)
        if printed is None:
            continue
        computed = (row.deviation_ratio, 100 * row.power_fraction, row.power_fraction_ratio)
        result[row.order] = tuple(abs(c - p) / p for c, p in zip(computed, printed))
    return result


def deviation_ratio(J: int, tol: float = Config.DEVIATION_TOLERANCE) -> float:
    """d_{2J+1}/d_1 with Psi_{2J+1} rematched to the curvature of Psi_1"""
    unit = BeamGeometry.reduced()
    return (deviation_mark(solve_coefficients(J), rematched_geometry(J, unit), tol)
            / deviation_mark(solve_coefficients(0), unit, tol))
