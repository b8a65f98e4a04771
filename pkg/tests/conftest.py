"""
Shared fixtures for the Atom Lens Designer tests
"""
import pytest

from atoms.phase import SODIUM_D2, AtomBeam, LaserDrive
from optics.modes import BeamGeometry
from optics.superposition import solve_coefficients


@pytest.fixture(autouse=True)
def testing_env(monkeypatch):
    monkeypatch.setenv('ATOMLENS_ENV', 'testing')


@pytest.fixture
def unit_geometry():
    return BeamGeometry.reduced()


@pytest.fixture
def sodium():
    return SODIUM_D2


@pytest.fixture
def gallatin_geometry(sodium):
    # 2 um waist diameter at the sodium line
    return BeamGeometry.from_waists(sodium.wavelength, 1.0e-6, 1.0e-6)


@pytest.fixture
def blue_drive(sodium, gallatin_geometry):
    return LaserDrive.from_linewidths(0.1, 40000, sodium, gallatin_geometry, solve_coefficients(0))


@pytest.fixture
def red_drive(sodium, gallatin_geometry):
    return LaserDrive.from_linewidths(0.1, -40000, sodium, gallatin_geometry, solve_coefficients(0))


@pytest.fixture
def fast_atoms(sodium):
    return AtomBeam.from_velocity(sodium, 1000.0)
