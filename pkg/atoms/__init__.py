"""
Atomic response to the lens beam: dipole potential and phase mask
"""

from .phase import (
    CONSTANTS,
    SODIUM_D2,
    AtomBeam,
    AtomSpecies,
    FocalLength,
    LaserDrive,
    RayCheckResult,
    dipole_potential,
    focal_length,
    phase_mask,
    phase_mask_exact,
    rabi_frequency,
    ray_check,
    saturation_intensity
)

__all__ = [
    'CONSTANTS',
    'SODIUM_D2',
    'AtomBeam',
    'AtomSpecies',
    'FocalLength',
    'LaserDrive',
    'RayCheckResult',
    'dipole_potential',
    'focal_length',
    'phase_mask',
    'phase_mask_exact',
    'rabi_frequency',
    'ray_check',
    'saturation_intensity'
]
