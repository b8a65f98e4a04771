"""
Run configuration file

A single JSON tree describing species, laser, beam geometry, atom beam,
orders and output settings; validated with pydantic.
"""

import json
import logging
import math
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from atoms.phase import CONSTANTS, AtomBeam, AtomSpecies, LaserDrive
from config import Config
from errors import ConfigError
from optics.modes import BeamGeometry
from optics.superposition import superposition_for_order

logger = logging.getLogger(__name__)


class _Model(BaseModel):
    model_config = ConfigDict(extra='forbid')


class SpeciesModel(_Model):
    name: str = 'sodium-D2'
    mass_amu: float = Field(22.98976928, gt=0)
    linewidth_hz: float = Field(9.79e6, gt=0, description='Gamma / 2 pi')
    wavelength_nm: float = Field(589.0, gt=0)


class LaserModel(_Model):
    power_w: float = Field(0.1, gt=0)
    wavelength_nm: Optional[float] = Field(None, gt=0, description='defaults to the transition wavelength')
    detuning_linewidths: Optional[float] = None
    detuning_rad_s: Optional[float] = None

    @model_validator(mode='after')
    def _one_detuning(self):
        given = [v for v in (self.detuning_linewidths, self.detuning_rad_s) if v is not None]
        if len(given) > 1:
            raise ValueError('give the detuning either in linewidths or in rad/s, not both')
        if not given:
            self.detuning_linewidths = 40000.0
        elif given[0] == 0:
            raise ValueError('detuning must be non-zero')
        return self


class GeometryModel(_Model):
    rayleigh_x_m: Optional[float] = Field(None, gt=0)
    rayleigh_y_m: Optional[float] = Field(None, gt=0)
    waist_x_m: Optional[float] = Field(None, gt=0)
    waist_y_m: Optional[float] = Field(None, gt=0)

    @model_validator(mode='after')
    def _one_length_per_axis(self):
        for axis in ('x', 'y'):
            rayleigh = getattr(self, f'rayleigh_{axis}_m')
            waist = getattr(self, f'waist_{axis}_m')
            if rayleigh is not None and waist is not None:
                raise ValueError(f'axis {axis}: give either the Rayleigh length or the waist, not both')
        if self.rayleigh_x_m is None and self.waist_x_m is None:
            self.waist_x_m = 1.0e-6
        return self


class AtomBeamModel(_Model):
    kinetic_energy_j: Optional[float] = Field(None, gt=0)
    velocity_m_s: Optional[float] = Field(None, gt=0)

    @model_validator(mode='after')
    def _one_energy(self):
        if self.kinetic_energy_j is not None and self.velocity_m_s is not None:
            raise ValueError('give either the kinetic energy or the velocity, not both')
        if self.kinetic_energy_j is None and self.velocity_m_s is None:
            self.velocity_m_s = 1000.0
        return self


class OutputModel(_Model):
    directory: Optional[str] = None
    format: Optional[Literal['csv', 'json']] = None
    grid_points: int = Field(Config.GRID_POINTS, ge=3)
    half_width: Optional[float] = Field(None, gt=0, description='in units of w_0x')


class RunConfig(_Model):
    species: SpeciesModel = Field(default_factory=SpeciesModel)
    laser: LaserModel = Field(default_factory=LaserModel)
    geometry: GeometryModel = Field(default_factory=GeometryModel)
    atom_beam: AtomBeamModel = Field(default_factory=AtomBeamModel)
    orders: List[int] = Field(default_factory=lambda: [1])
    output: OutputModel = Field(default_factory=OutputModel)

    @field_validator('orders')
    @classmethod
    def _odd_orders(cls, orders):
        if not orders:
            raise ValueError('at least one order is required')
        bad = [o for o in orders if o < 1 or o % 2 == 0]
        if bad:
            raise ValueError(f'orders must be odd and >= 1, got {bad}')
        return orders

    def to_species(self):
        sp = self.species
        return AtomSpecies.from_wavelength(
            mass=sp.mass_amu * CONSTANTS.atomic_mass,
            linewidth=2 * math.pi * sp.linewidth_hz,
            wavelength=sp.wavelength_nm * 1e-9,
            name=sp.name,
        )

    def laser_wavelength(self) -> float:
        nm = self.laser.wavelength_nm or self.species.wavelength_nm
        return nm * 1e-9

    def to_geometry(self):
        lam = self.laser_wavelength()
        g = self.geometry
        rayleigh_x = g.rayleigh_x_m if g.rayleigh_x_m is not None else math.pi * g.waist_x_m ** 2 / lam
        if g.rayleigh_y_m is not None:
            rayleigh_y = g.rayleigh_y_m
        elif g.waist_y_m is not None:
            rayleigh_y = math.pi * g.waist_y_m ** 2 / lam
        else:
            rayleigh_y = rayleigh_x
        return BeamGeometry(lam, rayleigh_x, rayleigh_y)

    def detuning(self, species) -> float:
        if self.laser.detuning_rad_s is not None:
            return self.laser.detuning_rad_s
        return self.laser.detuning_linewidths * species.linewidth

    def to_drive(self, order: int, species=None):
        species = species or self.to_species()
        return LaserDrive(self.laser.power_w, self.detuning(species), self.to_geometry(),
                          superposition_for_order(order))

    def to_atom_beam(self, species=None):
        species = species or self.to_species()
        if self.atom_beam.kinetic_energy_j is not None:
            return AtomBeam(self.atom_beam.kinetic_energy_j)
        return AtomBeam.from_velocity(species, self.atom_beam.velocity_m_s)


def _format_errors(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = '.'.join(str(p) for p in err['loc']) or '<root>'
        parts.append(f"{where}: {err['msg']}")
    return '; '.join(parts)


def parse_run_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {_format_errors(e)}") from e


def load_run_config(path=None, overrides: dict = None) -> RunConfig:
    """
    Read a run configuration file and apply overrides.

    `overrides` maps dotted keys (e.g. 'output.format') to values taken
    from command-line flags; None values are skipped.
    """
    data = {}
    if path is not None:
        path = Path(path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError(f"Config file not found: {path}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must contain a JSON object")
        logger.debug(f"Loaded run configuration from {path}")

    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = data
        *parents, leaf = dotted.split('.')
        for key in parents:
            node = node.setdefault(key, {})
        node[leaf] = value

    return parse_run_config(data)
