#!/usr/bin/env python3
"""
Atom Lens Designer command line

Subcommands write plot-ready CSV/JSON artifacts:
  coeffs    superposition coefficients c_{2j+1}
  profile   focal field E(x,0,0) and integrated intensity I(x,z)
  metrics   curvature, deviation mark, power fraction, power ratio
  table1    the rematched lens family with the printed values alongside
  zmin      minimum Rayleigh length of the crossed-beam lens
  phase     atomic phase mask, focal length and Raman-Nath ratio
  raycheck  ballistic rays behind the phase mask
"""

import argparse
import logging
import math
import sys

import numpy as np
import pandas as pd

from atoms.phase import (
    focal_length,
    focal_length_closed_form,
    phase_mask,
    ray_check,
    raman_nath_ratio,
    useful_width_ratio,
)
from config import Config, get_config
from errors import AtomLensError, ConfigError
from export.artifacts import Axis, SampledProfile, artifact_metadata, column_name, write_profile, write_table
from export.run_config import load_run_config
from lens.dephasing import fit_zmin_laws, scan_zmin
from lens.metrics import (
    PUBLISHED_TABLE,
    compare_with_published,
    deviation_mark,
    deviation_ratio,
    fit_power_law,
    lens_metrics,
    map_orders,
    power_compensation,
    rematched_geometry,
    table1,
    turning_point,
    turning_point_ratio,
)
from optics.modes import BeamGeometry
from optics.superposition import (
    coefficient_table,
    field_profile,
    integrated_intensity,
    order_to_J,
    profile_grid,
    superposition_for_order,
)

logger = logging.getLogger(__name__)

NORMALIZATIONS = {
    'unit': 'unit total power, w_0x = 1',
    'power': 'power scaled by P_{2J+1}/P_1 for the focal curvature of Psi_1, w_0x = 1',
    'rayleigh': 'unit total power, waist rescaled for the focal curvature of Psi_1 (x in units of w_0x of Psi_1)',
}


def odd_order(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}")
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"order must be odd and >= 1, got {value}")
    return value


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser(settings=Config):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Run configuration file (JSON)')
    common.add_argument('--out', help=f'Output directory (default: $ATOMLENS_OUTPUT_DIR or {settings.OUTPUT_DIR})')
    common.add_argument('--format', choices=['csv', 'json'], help=f'Artifact format (default: {settings.OUTPUT_FORMAT})')
    common.add_argument('--jobs', type=positive_int, help=f'Worker processes (default: {settings.WORKERS})')
    common.add_argument('--log-level', help=f'Logging level (default: {settings.LOG_LEVEL})')

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument('--grid-points', type=int, help=f'Points on the x grid (default: {settings.GRID_POINTS})')
    grid.add_argument('--half-width', type=float,
                      help='Grid half-width in waists (default: 1.2 * 0.57 * sqrt(order))')

    parser = argparse.ArgumentParser(description='Design wide atom lenses from odd Hermite-Gaussian superpositions')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('coeffs', parents=[common], help='Superposition coefficients')
    p.add_argument('--max-order', type=odd_order, default=settings.TABLE1_MAX_ORDER)

    p = sub.add_parser('profile', parents=[common, grid], help='Field and integrated intensity profiles')
    p.add_argument('--order', type=odd_order, help='Superposition order 2J+1 (default: first order in config)')
    p.add_argument('--z', type=float, default=0.0, help='Propagation distance in Rayleigh lengths')
    p.add_argument('--z-span', type=float, help='Also write I(x,z) for |z| <= span (Rayleigh lengths)')
    p.add_argument('--z-points', type=positive_int, default=101)
    p.add_argument('--normalization', choices=sorted(NORMALIZATIONS), default='unit')

    p = sub.add_parser('metrics', parents=[common], help='Lens metrics per order')
    p.add_argument('--order', type=odd_order)
    p.add_argument('--max-order', type=odd_order)

    p = sub.add_parser('table1', parents=[common], help='Rematched lens family')
    p.add_argument('--max-order', type=odd_order, default=settings.TABLE1_MAX_ORDER)

    p = sub.add_parser('zmin', parents=[common], help='Minimum Rayleigh length of the crossed lens')
    p.add_argument('--orders', type=odd_order, nargs='+', default=list(settings.ZMIN_ORDERS))
    p.add_argument('--angles', type=positive_int, default=settings.ANGLE_SAMPLES)

    p = sub.add_parser('phase', parents=[common, grid], help='Atomic phase mask')
    p.add_argument('--order', type=odd_order)

    p = sub.add_parser('raycheck', parents=[common], help='Thin-lens ray check')
    p.add_argument('--order', type=odd_order)
    p.add_argument('--rays', type=positive_int, default=settings.RAY_COUNT)
    p.add_argument('--window', type=float, default=0.5, help='Launch half-width in deviation marks')

    return parser


class Run:
    """Resolved settings for one invocation"""

    def __init__(self, args, settings):
        self.args = args
        self.settings = settings
        overrides = {
            'output.directory': args.out,
            'output.format': args.format,
            'output.grid_points': getattr(args, 'grid_points', None),
            'output.half_width': getattr(args, 'half_width', None),
        }
        self.config = load_run_config(args.config, overrides)
        output = self.config.output
        self.out_dir = output.directory or settings.OUTPUT_DIR
        self.fmt = output.format or settings.OUTPUT_FORMAT
        self.grid_points = output.grid_points
        self.half_width = output.half_width
        self.workers = args.jobs or settings.WORKERS

    def order(self):
        return self.args.order or self.config.orders[0]

    def table(self, frame, name, metadata):
        return write_table(frame, name, self.out_dir, self.fmt, metadata)

    def profile(self, profile):
        return write_profile(profile, self.out_dir, self.fmt)


def cmd_coeffs(run):
    max_order = run.args.max_order
    rows = []
    for s in coefficient_table(max_order):
        row = {'order': s.order}
        ratios = s.ratios()
        for j in range(order_to_J(max_order) + 1):
            m = 2 * j + 1
            row[column_name(f'c{m}', '1')] = s.coefficients[j] if j <= s.J else np.nan
            row[column_name(f'c{m}/c1', '1')] = ratios[j] if j <= s.J else np.nan
        rows.append(row)
    meta = artifact_metadata('coefficients', 'reduced', 'sum c^2 = 1, c_1 > 0', max_order=max_order)
    return run.table(pd.DataFrame(rows), 'coefficients', meta)


def _profile_geometry(J, normalization):
    unit = BeamGeometry.reduced()
    if normalization == 'rayleigh':
        return rematched_geometry(J, unit)
    return unit


def cmd_profile(run):
    args = run.args
    order = run.order()
    J = order_to_J(order)
    s = superposition_for_order(order)
    geom = _profile_geometry(J, args.normalization)
    power = power_compensation(J) if args.normalization == 'power' else 1.0

    half_width = (run.half_width or run.settings.HALF_WIDTH_FACTOR * math.sqrt(order)) * geom.waist_x
    x = profile_grid(order, run.grid_points, half_width)
    z = args.z * geom.rayleigh_x

    d = deviation_mark(s, geom)
    meta = dict(
        normalization_key=args.normalization,
        deviation_mark=d,
        deviation_ratio=deviation_ratio(J),
        turning_point=turning_point(s, geom),
        turning_point_ratio=turning_point_ratio(s),
        power=power,
    )
    norm_text = NORMALIZATIONS[args.normalization]
    x_axis = Axis('x', 'w0', x)

    field = math.sqrt(power) * np.real(field_profile(s, x, 0.0, geom))
    written = run.profile(SampledProfile(
        f'field_{order}', (x_axis,), field, 'E', 'reduced',
        artifact_metadata('field_profile', 'reduced', norm_text, order, z=0.0, **meta)))

    intensity = power * integrated_intensity(s, x, z, geom)
    written += run.profile(SampledProfile(
        f'intensity_{order}', (x_axis,), intensity, 'I', 'reduced',
        artifact_metadata('integrated_intensity', 'reduced', norm_text, order, z=args.z, **meta)))

    if args.z_span:
        zs = np.linspace(-args.z_span, args.z_span, args.z_points)
        X, Z = np.meshgrid(x, zs * geom.rayleigh_x, indexing='ij')
        surface = power * integrated_intensity(s, X, Z, geom)
        written += run.profile(SampledProfile(
            f'intensity_{order}_xz', (x_axis, Axis('z', 'zR', zs)), surface, 'I', 'reduced',
            artifact_metadata('integrated_intensity_xz', 'reduced', norm_text, order, **meta)))

    logger.info(f"order {order}: d/d_1 = {meta['deviation_ratio']:.4f}, d = {d:.6g} w0")
    return written


def _unit_waist_metrics(order):
    return lens_metrics(order, rematched=False)


def _metrics_orders(run):
    args = run.args
    if args.order:
        return [args.order]
    if args.max_order:
        return list(range(1, args.max_order + 1, 2))
    return run.config.orders


def cmd_metrics(run):
    orders = _metrics_orders(run)
    rows = map_orders(_unit_waist_metrics, orders, run.workers)
    frame = pd.DataFrame([{
        'order': m.order,
        column_name('A', 'reduced'): m.curvature,
        column_name('d', 'w0'): m.deviation_mark,
        column_name('E', '1'): m.power_fraction,
        column_name('P/P1', '1'): m.power_ratio,
        column_name('sigma', '1'): math.sqrt(m.rayleigh_scale),
        column_name('zR_scale', '1'): m.rayleigh_scale,
        column_name('width_fraction', '1'): m.width_fraction,
        column_name('area_fraction', '1'): m.area_fraction,
        column_name('turning_point/sqrt(order)', 'w0'): turning_point_ratio(superposition_for_order(m.order)),
    } for m in rows])

    extra = {}
    large = [m for m in rows if m.order >= 9]
    if len(large) >= 2:
        free = fit_power_law([m.order for m in large], [m.power_ratio for m in large])
        fixed = fit_power_law([m.order for m in large], [m.power_ratio for m in large], exponent=1.5)
        extra = {'power_ratio_exponent': free.exponent, 'power_ratio_prefactor': free.prefactor,
                 'power_ratio_prefactor_at_1.5': fixed.prefactor}
    meta = artifact_metadata('lens_metrics', 'reduced', NORMALIZATIONS['unit'], **extra)
    return run.table(frame, 'metrics', meta)


def cmd_table1(run):
    rows = table1(run.args.max_order, workers=run.workers)
    diffs = compare_with_published(rows)
    records = []
    for m in rows:
        printed = PUBLISHED_TABLE.get(m.order, (np.nan, np.nan, np.nan))
        diff = diffs.get(m.order, (np.nan, np.nan, np.nan))
        records.append({
            'order': m.order,
            column_name('d/d1', '1'): round(m.deviation_ratio, 2),
            column_name('E', '%'): 100 * m.power_fraction,
            column_name('E/E1', '1'): m.power_fraction_ratio,
            column_name('d', 'w0'): m.deviation_mark,
            column_name('d/d1_exact', '1'): m.deviation_ratio,
            column_name('E_exact', '1'): m.power_fraction,
            column_name('cube_law', '1'): m.cube_law_ratio,
            column_name('d/d1_printed', '1'): printed[0],
            column_name('E_printed', '%'): printed[1],
            column_name('E/E1_printed', '1'): printed[2],
            column_name('d/d1_reldiff', '1'): diff[0],
            column_name('E_reldiff', '1'): diff[1],
            column_name('E/E1_reldiff', '1'): diff[2],
        })
    meta = artifact_metadata('table1', 'reduced',
                             'unit total power, waists rematched to the focal curvature of Psi_1',
                             max_order=run.args.max_order)
    return run.table(pd.DataFrame(records), 'table1', meta)


def cmd_zmin(run):
    args = run.args
    scans = scan_zmin(args.orders, angles=args.angles, workers=run.workers)
    frame = pd.DataFrame([{
        'order': sc.order,
        column_name('z_min', 'lambda'): sc.z_min_wavelengths,
        column_name('d', 'lambda'): sc.radius / sc.wavelength,
        column_name('w0', 'lambda'): sc.waist / sc.wavelength,
        column_name('lens_w0', 'lambda'): sc.lens_waist / sc.wavelength,
        column_name('turning_point', 'lambda'): sc.turning_point / sc.wavelength,
        column_name('opening_angle', 'deg'): sc.opening_angle,
        column_name('max_dI', '1'): sc.max_relative_deviation,
    } for sc in scans])
    laws = fit_zmin_laws(scans)
    extra = {f'{name}_{key}': getattr(law, key) for name, law in laws.items() for key in ('prefactor', 'exponent')}
    meta = artifact_metadata('zmin', 'reduced', 'lengths in laser wavelengths', angles=args.angles, **extra)
    return run.table(frame, 'zmin', meta)


def _atom_setup(run):
    order = run.order()
    species = run.config.to_species()
    drive = run.config.to_drive(order, species)
    beam = run.config.to_atom_beam(species)
    return order, species, drive, beam


def cmd_phase(run):
    order, species, drive, beam = _atom_setup(run)
    geom = drive.geometry
    half_width = (run.half_width or run.settings.HALF_WIDTH_FACTOR * math.sqrt(order)) * geom.waist_x
    x = profile_grid(order, run.grid_points, half_width)
    phase = phase_mask(drive, beam, species, x)
    fitted = focal_length(drive, beam, species)
    closed = focal_length_closed_form(drive, beam, species)
    meta = artifact_metadata(
        'phase_mask', 'SI', 'laser power and detuning from the run configuration', order,
        focal_length=fitted.focal_length,
        focal_length_closed_form=closed.focal_length,
        focusing=fitted.focusing,
        raman_nath_ratio=raman_nath_ratio(drive, beam, species),
        deviation_mark=deviation_mark(drive.superposition, geom),
        useful_width_ratio=useful_width_ratio(drive),
        waist_x=geom.waist_x,
    )
    logger.info(f"order {order}: f = {fitted.focal_length:.6g} m, useful width {100 * meta['useful_width_ratio']:.3g}%")
    return run.profile(SampledProfile(f'phase_{order}', (Axis('x', 'm', x),), phase, 'dphi', 'rad', meta))


def cmd_raycheck(run):
    order, species, drive, beam = _atom_setup(run)
    result = ray_check(drive, beam, species, run.args.rays, run.args.window)
    frame = pd.DataFrame({
        column_name('x0', 'm'): result.launch,
        column_name('theta', 'rad'): result.angles,
        column_name('x_at_f', 'm'): result.positions,
        column_name('crossing', 'm'): result.crossings,
    })
    meta = artifact_metadata(
        'raycheck', 'SI', 'laser power and detuning from the run configuration', order,
        focal_length=result.focal_length,
        spot_rms=result.spot_rms,
        best_focus=result.best_focus,
        best_spot_rms=result.best_spot_rms,
        deviation_mark=deviation_mark(drive.superposition, drive.geometry),
        window=run.args.window,
    )
    return run.table(frame, f'raycheck_{order}', meta)


COMMANDS = {
    'coeffs': cmd_coeffs,
    'profile': cmd_profile,
    'metrics': cmd_metrics,
    'table1': cmd_table1,
    'zmin': cmd_zmin,
    'phase': cmd_phase,
    'raycheck': cmd_raycheck,
}


def main(argv=None):
    settings = get_config()
    args = build_parser(settings).parse_args(argv)

    level = (args.log_level or settings.LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=settings.LOG_FORMAT)

    try:
        run = Run(args, settings)
        written = COMMANDS[args.command](run)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return e.exit_code
    except AtomLensError as e:
        logger.error(f"{args.command} failed: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"Output error: {e}")
        return 1

    for path in written:
        logger.debug(f"artifact: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
