"""
Hermite-Gaussian modes and odd-mode lens superpositions
"""

from .modes import (
    BeamGeometry,
    ModeIndex,
    beam_radius,
    gouy_phase,
    hermite_fn,
    hermite_fn_derivative,
    hermite_functions,
    hg_mode,
    hg_mode_dx,
    wavefront_curvature
)
from .superposition import (
    ModeSuperposition,
    TaylorSystem,
    cancellation_polynomial,
    coefficient_table,
    field_profile,
    focal_field,
    focal_slope,
    integrated_intensity,
    solve_coefficients,
    superposition_for_order,
    taylor_matrix
)

__all__ = [
    'BeamGeometry',
    'ModeIndex',
    'beam_radius',
    'gouy_phase',
    'hermite_fn',
    'hermite_fn_derivative',
    'hermite_functions',
    'hg_mode',
    'hg_mode_dx',
    'wavefront_curvature',
    'ModeSuperposition',
    'TaylorSystem',
    'cancellation_polynomial',
    'coefficient_table',
    'field_profile',
    'focal_field',
    'focal_slope',
    'integrated_intensity',
    'solve_coefficients',
    'superposition_for_order',
    'taylor_matrix'
]
