"""
Odd Hermite-Gaussian superpositions with a linear focal field

The lens beam Psi_{2J+1} = sum_j c_{2j+1} psi_{2j+1,0} is chosen so that the
Taylor coefficients of its focal profile in xi^3 .. xi^{2J+1} vanish.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
import sympy as sp

from errors import SingularSystemError
from optics.modes import BeamGeometry, beam_radius, gouy_phase, hermite_functions, wavefront_curvature

logger = logging.getLogger(__name__)

_XI = sp.Symbol('xi')


def _check_J(J):
    if isinstance(J, bool) or not isinstance(J, (int, np.integer)) or J < 0:
        raise ValueError(f"J must be a non-negative integer, got {J!r}")


def order_to_J(order: int) -> int:
    """Map an odd mode order 2J+1 to J"""
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or order < 1 or order % 2 == 0:
        raise ValueError(f"Superposition order must be an odd positive integer, got {order!r}")
    return (order - 1) // 2


def hermite_norm(m: int) -> float:
    """1/sqrt(2^m m! sqrt(pi)), the normalization of phi_m"""
    if m <= 150:
        return 1.0 / math.sqrt(float(2 ** m * math.factorial(m)) * math.sqrt(math.pi))
    return math.exp(-0.5 * (m * math.log(2.0) + math.lgamma(m + 1) + 0.5 * math.log(math.pi)))


@dataclass(frozen=True)
class TaylorSystem:
    """
    Taylor coefficients of the odd Hermite functions around xi = 0.

    `exact[k][j]` is the rational coefficient of xi^{2k+1} in
    H_{2j+1}(xi) exp(-xi^2/2); the physical matrix T multiplies column j
    by the Hermite norm of mode 2j+1.
    """
    J: int
    exact: Tuple[Tuple[sp.Rational, ...], ...]
    norms: Tuple[float, ...]

    @property
    def matrix(self) -> np.ndarray:
        raw = np.array([[float(v) for v in row] for row in self.exact])
        return raw * np.asarray(self.norms)[np.newaxis, :]


def taylor_matrix(J: int) -> TaylorSystem:
    """Build the (J+1)x(J+1) Taylor system in exact rational arithmetic"""
    _check_J(J)
    gauss = sp.Poly(
        sum(sp.Rational((-1) ** p, 2 ** p * math.factorial(p)) * _XI ** (2 * p) for p in range(J + 1)),
        _XI, domain='QQ')
    columns = []
    for j in range(J + 1):
        product = sp.hermite_poly(2 * j + 1, _XI, polys=True) * gauss
        columns.append([sp.Rational(product.coeff_monomial(_XI ** (2 * k + 1))) for k in range(J + 1)])
    exact = tuple(tuple(columns[j][k] for j in range(J + 1)) for k in range(J + 1))
    norms = tuple(hermite_norm(2 * j + 1) for j in range(J + 1))
    return TaylorSystem(J, exact, norms)


def cancellation_polynomial(J: int) -> Tuple[sp.Rational, ...]:
    """
    Exact Hermite-basis coefficients b_j of the cancelling focal field.

    The focal field equals exp(-xi^2/2) P_J(xi) with P_J the degree 2J+1
    Taylor polynomial of xi exp(xi^2/2); expanding P_J in H_{2j+1} gives b_j.
    Unnormalized: c_{2j+1} is proportional to b_j / hermite_norm(2j+1).
    """
    _check_J(J)
    coeffs = []
    for j in range(J + 1):
        total = sp.Rational(0)
        for p in range(j, J + 1):
            total += sp.Rational(
                math.factorial(2 * p + 1),
                2 ** p * math.factorial(p) * 2 ** (2 * p + 1) * math.factorial(p - j) * math.factorial(2 * j + 1))
        coeffs.append(total)
    return tuple(coeffs)


@dataclass(frozen=True)
class ModeSuperposition:
    """Coefficients c_1, c_3, .., c_{2J+1} of an odd-mode lens beam"""
    order: int
    coefficients: Tuple[float, ...]

    def __post_init__(self):
        J = order_to_J(self.order)
        if len(self.coefficients) != J + 1:
            raise ValueError(f"order {self.order} needs {J + 1} coefficients, got {len(self.coefficients)}")
        c = np.asarray(self.coefficients, dtype=float)
        if abs(float(np.dot(c, c)) - 1.0) > 1e-12:
            raise ValueError("coefficients must satisfy sum c^2 = 1")
        if c[0] <= 0:
            raise ValueError("c_1 must be positive")

    @property
    def J(self) -> int:
        return (self.order - 1) // 2

    @property
    def mode_orders(self) -> Tuple[int, ...]:
        return tuple(range(1, self.order + 1, 2))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    def ratios(self) -> np.ndarray:
        """Coefficients relative to c_1"""
        return self.array / self.coefficients[0]


@lru_cache(maxsize=None)
def solve_coefficients(J: int) -> ModeSuperposition:
    """
    Solve T[k] . c = 0 for k = 1..J with c_1 > 0 and sum c^2 = 1.

    The nullspace is taken exactly over the rationals; only the final
    division by the Hermite norms is done in floating point.
    """
    _check_J(J)
    if J == 0:
        return ModeSuperposition(1, (1.0,))

    system = taylor_matrix(J)
    nonlinear = sp.Matrix([list(row) for row in system.exact[1:]])
    null = nonlinear.nullspace()
    if len(null) != 1 or null[0][0] == 0:
        raise SingularSystemError(J, nonlinear.rank())

    direction = null[0] / null[0][0]
    c = np.array([float(direction[j]) / system.norms[j] for j in range(J + 1)])
    c /= np.linalg.norm(c)
    if c[0] < 0:
        c = -c

    if logger.isEnabledFor(logging.DEBUG):
        with np.errstate(all='ignore'):
            cond = np.linalg.cond(system.matrix[1:, 1:])
        logger.debug(f"J={J}: nullspace dimension 1, cond(T[1:,1:])={cond:.3e}")

    return ModeSuperposition(2 * J + 1, tuple(float(v) for v in c))


def superposition_for_order(order: int) -> ModeSuperposition:
    return solve_coefficients(order_to_J(order))


def coefficient_table(max_order: int) -> List[ModeSuperposition]:
    """Solved superpositions for every odd order 1..max_order"""
    return [solve_coefficients(J) for J in range(order_to_J(max_order) + 1)]


def _odd_mode_sum(s: ModeSuperposition, xi, gouy):
    """sum_j c_j phi_{2j+1}(xi) exp(-2ij gouy), global Gouy phase removed"""
    xi = np.asarray(xi, dtype=float)
    gouy = np.asarray(gouy, dtype=float)
    xi, gouy = np.broadcast_arrays(xi, gouy)
    phi = hermite_functions(s.order, xi)[1::2]
    c = s.array.reshape((-1,) + (1,) * xi.ndim)
    j = np.arange(s.J + 1).reshape(c.shape)
    if not np.any(gouy):
        return np.sum(c * phi, axis=0)
    return np.sum(c * phi * np.exp(-2j * j * gouy), axis=0)


def focal_field(s: ModeSuperposition, xi):
    """Real focal profile f(xi) = sum_j c_j phi_{2j+1}(xi)"""
    value = np.real(_odd_mode_sum(s, xi, 0.0))
    return value if np.ndim(value) else float(value)


def focal_field_derivative(s: ModeSuperposition, xi):
    """df/dxi from the Hermite ladder relation"""
    xi = np.asarray(xi, dtype=float)
    phi = hermite_functions(s.order + 1, xi)
    value = np.zeros(xi.shape)
    for j, c in enumerate(s.coefficients):
        m = 2 * j + 1
        value = value + c * (np.sqrt(m / 2.0) * phi[m - 1] - np.sqrt((m + 1) / 2.0) * phi[m + 1])
    return value if value.ndim else float(value)


def focal_slope(s: ModeSuperposition) -> float:
    """f'(0): slope of the focal profile in reduced coordinate xi"""
    return float(focal_field_derivative(s, 0.0))


def field_profile(s: ModeSuperposition, x, z, geom: BeamGeometry):
    """
    Sum_j c_j psi_{2j+1,0}(x, 0, z), with x and z in the geometry's units.

    Keeps every phase of the modes (curvature, common Gouy factor) so that
    the result is the physical amplitude on the y = 0 line; real at z = 0.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    wx = beam_radius(z, geom.waist_x, geom.rayleigh_x)
    wy = beam_radius(z, geom.waist_y, geom.rayleigh_y)
    phi_x = gouy_phase(z, geom.rayleigh_x)
    phi_y = gouy_phase(z, geom.rayleigh_y)
    x_part = np.sqrt(np.sqrt(2.0) / wx) * _odd_mode_sum(s, np.sqrt(2.0) * x / wx, phi_x)
    phase = np.exp(0.5j * geom.wavenumber * x ** 2 * wavefront_curvature(z, geom.rayleigh_x)
                   - 1.5j * phi_x - 0.5j * phi_y)
    y_part = np.sqrt(np.sqrt(2.0) / wy) * np.pi ** -0.25
    return x_part * phase * y_part


def integrated_intensity(s: ModeSuperposition, x, z, geom: BeamGeometry):
    """
    y-integrated intensity (sqrt2/w_x(z)) |sum_j c_j phi_{2j+1} e^{-2ij phi_x}|^2.

    Reduced units: integrates to 1 over x at every z.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    wx = beam_radius(z, geom.waist_x, geom.rayleigh_x)
    total = _odd_mode_sum(s, np.sqrt(2.0) * x / wx, gouy_phase(z, geom.rayleigh_x))
    value = np.sqrt(2.0) / wx * np.abs(total) ** 2
    return value if np.ndim(value) else float(value)


def profile_grid(order: int, points: int = 2001, half_width: float = None, factor: float = 1.2 * 0.57) -> np.ndarray:
    """Uniform x/w_0x grid; default half-width covers the outermost turning point with margin"""
    if points < 2:
        raise ValueError("profile grid needs at least 2 points")
    if half_width is None:
        half_width = factor * math.sqrt(order)
    if half_width <= 0:
        raise ValueError("half-width must be positive")
    return np.linspace(-half_width, half_width, points)
