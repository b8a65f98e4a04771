"""
Tests for the run configuration and the artifact writers
"""
import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from errors import ConfigError
from export import __version__
from export.artifacts import (
    Axis,
    NumpyEncoder,
    SampledProfile,
    artifact_metadata,
    clean_for_json,
    read_metadata,
    read_profile_json,
    write_profile,
    write_table,
)
from export.run_config import RunConfig, load_run_config, parse_run_config

SCENARIOS = Path(__file__).resolve().parent.parent / 'scenarios'


class TestRunConfig:
    def test_defaults(self):
        cfg = parse_run_config({})
        assert cfg.orders == [1]
        assert cfg.laser.detuning_linewidths == 40000.0
        assert cfg.atom_beam.velocity_m_s == 1000.0
        assert cfg.to_geometry().waist_x == pytest.approx(1.0e-6, rel=1e-12)
        assert cfg.to_species().wavelength == pytest.approx(589.0e-9, rel=1e-12)

    def test_drive_from_config(self):
        cfg = parse_run_config({'orders': [3, 5], 'laser': {'power_w': 0.5, 'detuning_rad_s': -1.0e9}})
        drive = cfg.to_drive(3)
        assert drive.superposition.order == 3
        assert drive.power == 0.5
        assert drive.detuning == -1.0e9
        assert not drive.blue_detuned

    def test_rayleigh_lengths(self):
        cfg = parse_run_config({'geometry': {'rayleigh_x_m': 2e-4, 'waist_y_m': 3e-6}})
        geom = cfg.to_geometry()
        assert geom.rayleigh_x == 2e-4
        assert geom.waist_y == pytest.approx(3e-6, rel=1e-12)

    def test_kinetic_energy(self, sodium):
        cfg = parse_run_config({'atom_beam': {'kinetic_energy_j': 2e-20}})
        assert cfg.to_atom_beam(sodium).kinetic_energy == 2e-20

    @pytest.mark.parametrize('data', [
        {'orders': [2]},
        {'orders': []},
        {'orders': [-1]},
        {'laser': {'detuning_linewidths': 10, 'detuning_rad_s': 1e8}},
        {'laser': {'detuning_linewidths': 0}},
        {'laser': {'power_w': -1}},
        {'geometry': {'waist_x_m': 1e-6, 'rayleigh_x_m': 1e-4}},
        {'atom_beam': {'velocity_m_s': 100, 'kinetic_energy_j': 1e-20}},
        {'output': {'format': 'xml'}},
        {'output': {'grid_points': 2}},
        {'unknown': 1},
    ])
    def test_invalid(self, data):
        with pytest.raises(ConfigError):
            parse_run_config(data)

    def test_error_names_field(self):
        with pytest.raises(ConfigError) as info:
            parse_run_config({'orders': [4]})
        assert 'orders' in str(info.value)
        assert info.value.exit_code == 2

    def test_load_file_with_overrides(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'orders': [5], 'output': {'format': 'csv'}}))
        cfg = load_run_config(path, {'output.format': 'json', 'output.directory': None, 'laser.power_w': 2.0})
        assert cfg.orders == [5]
        assert cfg.output.format == 'json'
        assert cfg.output.directory is None
        assert cfg.laser.power_w == 2.0

    def test_load_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / 'missing.json')
        broken = tmp_path / 'broken.json'
        broken.write_text('{"orders": [1,')
        with pytest.raises(ConfigError):
            load_run_config(broken)
        listing = tmp_path / 'list.json'
        listing.write_text('[1, 3]')
        with pytest.raises(ConfigError):
            load_run_config(listing)

    def test_shipped_scenarios(self):
        for name in ('gallatin_gould', 'sodium_d2'):
            assert isinstance(load_run_config(SCENARIOS / f'{name}.json'), RunConfig)


def sample_profile(name='intensity_3'):
    x = Axis('x', 'w0', np.linspace(-1.0, 1.0, 5))
    meta = artifact_metadata('integrated_intensity', 'reduced', 'unit total power', 3, z=0.0)
    return SampledProfile(name, (x,), np.array([0.1, 0.02, 0.0, 0.02, 0.1]), 'I', 'reduced', meta)


class TestProfiles:
    def test_axis_validation(self):
        with pytest.raises(ValueError):
            Axis('x', 'w0', np.array([0.0, 1.0, 0.5]))
        with pytest.raises(ValueError):
            Axis('x', 'w0', np.zeros((2, 2)))
        Axis('z', 'zR', np.array([1.0, 0.0, -1.0]))

    def test_shape_and_units_required(self):
        x = Axis('x', 'w0', np.arange(3.0))
        with pytest.raises(ValueError):
            SampledProfile('p', (x,), np.zeros(4), 'I', 'reduced', {'units': 'reduced'})
        with pytest.raises(ValueError):
            SampledProfile('p', (x,), np.zeros(3), 'I', 'reduced', {})

    def test_two_dimensional_frame(self):
        x = Axis('x', 'w0', np.arange(3.0))
        z = Axis('z', 'zR', np.arange(2.0))
        values = np.arange(6.0).reshape(3, 2)
        frame = SampledProfile('p', (x, z), values, 'I', 'reduced', {'units': 'reduced'}).to_frame()
        assert list(frame.columns) == ['x[w0]', 'z[zR]', 'I[reduced]']
        assert frame.iloc[3].tolist() == [1.0, 1.0, 3.0]

    def test_metadata_block(self):
        meta = artifact_metadata('coefficients', 'SI', 'unit power', order=7, extra=1)
        assert meta == {'artifact': 'coefficients', 'units': 'SI', 'normalization': 'unit power',
                        'version': __version__, 'order': 7, 'extra': 1}
        with pytest.raises(ValueError):
            artifact_metadata('coefficients', 'cgs', 'unit power')

    def test_json_round_trip(self, tmp_path):
        profile = sample_profile()
        [path] = write_profile(profile, tmp_path, 'json')
        assert path.name == 'intensity_3.json'
        assert read_profile_json(path).equals(profile)
        assert read_metadata([path])['order'] == 3


class TestWriters:
    def test_csv_layout(self, tmp_path):
        paths = write_profile(sample_profile(), tmp_path, 'csv')
        assert [p.name for p in paths] == ['intensity_3.csv', 'intensity_3.meta.json']
        raw = paths[0].read_bytes()
        assert b'\r' not in raw
        assert raw.decode().splitlines()[0] == 'x[w0],I[reduced]'
        assert read_metadata(paths)['version'] == __version__

    def test_table_json(self, tmp_path):
        frame = pd.DataFrame({'order': [1, 3], 'c1[1]': [1.0, 0.5]})
        [path] = write_table(frame, 'coefficients', tmp_path, 'json', {'units': 'reduced'})
        doc = json.loads(path.read_text())
        assert doc['columns'] == ['order', 'c1[1]']
        assert doc['rows'][1] == {'order': 3, 'c1[1]': 0.5}
        assert doc['metadata'] == {'units': 'reduced'}

    def test_nan_becomes_null(self, tmp_path):
        frame = pd.DataFrame({'order': [1, 3], 'c3[1]': [np.nan, 0.2]})
        [path] = write_table(frame, 'coefficients', tmp_path, 'json', {'units': 'reduced'})
        assert json.loads(path.read_text())['rows'][0]['c3[1]'] is None

    @pytest.mark.parametrize('fmt', ['csv', 'json'])
    def test_deterministic_output(self, tmp_path, fmt):
        first = write_profile(sample_profile(), tmp_path / 'a', fmt)
        second = write_profile(sample_profile(), tmp_path / 'b', fmt)
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes()

    def test_unwritable_directory(self, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('not a directory')
        with pytest.raises(OSError) as info:
            write_profile(sample_profile(), blocker / 'out', 'csv')
        assert 'blocker' in str(info.value)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            write_profile(sample_profile(), tmp_path, 'xlsx')


def test_numpy_encoder():
    text = json.dumps({'a': np.int64(3), 'b': np.float32(0.5), 'c': np.array([1.0, np.inf]), 'd': np.bool_(True)},
                      cls=NumpyEncoder, sort_keys=True)
    assert json.loads(text) == {'a': 3, 'b': 0.5, 'c': [1.0, None], 'd': True}


def test_clean_for_json():
    assert clean_for_json({'x': [float('nan'), 1.0, (2, float('-inf'))]}) == {'x': [None, 1.0, [2, None]]}
