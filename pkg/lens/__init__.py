"""
Lens quality metrics and crossed-beam dephasing
"""

from .metrics import (
    LensMetrics,
    PowerLaw,
    PUBLISHED_TABLE,
    deviation_mark,
    deviation_ratio,
    fit_power_law,
    focal_curvature,
    lens_metrics,
    power_compensation,
    power_fraction,
    rayleigh_match,
    table1,
    turning_point
)
from .dephasing import (
    CrossedLensConfig,
    DephasingScan,
    crossed_intensity,
    find_zmin,
    relative_deviation,
    scan_zmin
)

__all__ = [
    'LensMetrics',
    'PowerLaw',
    'PUBLISHED_TABLE',
    'deviation_mark',
    'deviation_ratio',
    'fit_power_law',
    'focal_curvature',
    'lens_metrics',
    'power_compensation',
    'power_fraction',
    'rayleigh_match',
    'table1',
    'turning_point',
    'CrossedLensConfig',
    'DephasingScan',
    'crossed_intensity',
    'find_zmin',
    'relative_deviation',
    'scan_zmin'
]
