"""
Deterministic CSV / JSON artifact writers
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from export import __version__

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'
FORMATS = ('csv', 'json')


class NumpyEncoder(json.JSONEncoder):
    """Custom JSON encoder for numpy data types"""
    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return clean_for_json(float(obj))
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, np.ndarray):
            return clean_for_json(obj.tolist())
        return super(NumpyEncoder, self).default(obj)


def clean_for_json(obj):
    """Replace NaN/inf (not valid JSON) with None, recursively"""
    if isinstance(obj, dict):
        return {k: clean_for_json(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [clean_for_json(v) for v in obj]
    elif isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    elif isinstance(obj, np.integer):
        return int(obj)
    return obj


def column_name(label: str, unit: str) -> str:
    return f"{label}[{unit}]"


@dataclass(frozen=True)
class Axis:
    label: str
    unit: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, 'values', values)
        if values.ndim != 1 or values.size == 0:
            raise ValueError(f"axis {self.label} needs a non-empty 1-D coordinate array")
        if values.size > 1 and not (np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)):
            raise ValueError(f"axis {self.label} coordinates must be strictly monotone")


@dataclass(frozen=True)
class SampledProfile:
    """Real values on a 1-D or 2-D grid, with units and provenance metadata"""
    name: str
    axes: Tuple[Axis, ...]
    values: np.ndarray
    value_label: str
    value_unit: str
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        axes = tuple(self.axes)
        object.__setattr__(self, 'axes', axes)
        if len(axes) not in (1, 2):
            raise ValueError("profiles are 1-D or 2-D")
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, 'values', values)
        shape = tuple(axis.values.size for axis in axes)
        if values.shape != shape:
            raise ValueError(f"profile {self.name}: values shape {values.shape} does not match grid {shape}")
        if 'units' not in self.metadata:
            raise ValueError(f"profile {self.name}: metadata must name its units convention")

    def to_frame(self) -> pd.DataFrame:
        """Long format: one row per grid point"""
        if len(self.axes) == 1:
            columns = {column_name(self.axes[0].label, self.axes[0].unit): self.axes[0].values}
        else:
            grid = np.meshgrid(self.axes[0].values, self.axes[1].values, indexing='ij')
            columns = {column_name(a.label, a.unit): g.ravel() for a, g in zip(self.axes, grid)}
        columns[column_name(self.value_label, self.value_unit)] = self.values.ravel()
        return pd.DataFrame(columns)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'axes': [{'label': a.label, 'unit': a.unit, 'values': a.values} for a in self.axes],
            'values': self.values,
            'value_label': self.value_label,
            'value_unit': self.value_unit,
            'metadata': self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SampledProfile':
        axes = tuple(Axis(a['label'], a['unit'], np.asarray(a['values'], dtype=float)) for a in data['axes'])
        return cls(data['name'], axes, np.asarray(data['values'], dtype=float),
                   data['value_label'], data['value_unit'], dict(data['metadata']))

    def equals(self, other: 'SampledProfile') -> bool:
        return (self.name == other.name
                and len(self.axes) == len(other.axes)
                and all(a.label == b.label and a.unit == b.unit and np.array_equal(a.values, b.values)
                        for a, b in zip(self.axes, other.axes))
                and np.array_equal(self.values, other.values)
                and self.value_label == other.value_label
                and self.value_unit == other.value_unit
                and self.metadata == other.metadata)


def artifact_metadata(artifact: str, units: str, normalization: str, order: Optional[int] = None, **extra) -> dict:
    """Common metadata block; no timestamps or host data"""
    if units not in ('reduced', 'SI'):
        raise ValueError(f"units must be 'reduced' or 'SI', got {units!r}")
    meta = {'artifact': artifact, 'units': units, 'normalization': normalization, 'version': __version__}
    if order is not None:
        meta['order'] = int(order)
    meta.update(extra)
    return meta


def _dump_json(obj, path: Path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(clean_for_json(obj), f, sort_keys=True, indent=2, cls=NumpyEncoder, allow_nan=False)
        f.write('\n')


def _prepare(out_dir, name: str, fmt: str) -> Path:
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"Cannot create output directory {out_dir}: {e}") from e
    return out_dir / f"{name}.{fmt}"


def write_table(frame: pd.DataFrame, name: str, out_dir, fmt: str, metadata: dict) -> List[Path]:
    """Write a table (CSV + sidecar metadata, or a single JSON document)"""
    path = _prepare(out_dir, name, fmt)
    try:
        if fmt == 'csv':
            frame.to_csv(path, index=False, lineterminator='\n', float_format=FLOAT_FORMAT)
            meta_path = path.with_name(f"{name}.meta.json")
            _dump_json(metadata, meta_path)
            written = [path, meta_path]
        else:
            records = frame.to_dict(orient='records')
            _dump_json({'metadata': metadata, 'columns': list(frame.columns), 'rows': records}, path)
            written = [path]
    except OSError as e:
        raise OSError(f"Cannot write artifact {path}: {e}") from e
    logger.info(f"Wrote {name} ({len(frame)} rows) to {path}")
    return written


def write_profile(profile: SampledProfile, out_dir, fmt: str) -> List[Path]:
    """Write a sampled profile"""
    if fmt == 'csv':
        return write_table(profile.to_frame(), profile.name, out_dir, fmt, profile.metadata)
    path = _prepare(out_dir, profile.name, fmt)
    try:
        _dump_json(profile.to_dict(), path)
    except OSError as e:
        raise OSError(f"Cannot write artifact {path}: {e}") from e
    logger.info(f"Wrote profile {profile.name} to {path}")
    return [path]


def read_profile_json(path) -> SampledProfile:
    with open(path, 'r', encoding='utf-8') as f:
        return SampledProfile.from_dict(json.load(f))


def read_metadata(paths: Sequence[Path]) -> dict:
    """Metadata of a written artifact (sidecar for CSV, embedded for JSON)"""
    for path in paths:
        path = Path(path)
        if path.name.endswith('.meta.json'):
            with open(path, 'r', encoding='utf-8') as f:
                return json.load(f)
    with open(paths[0], 'r', encoding='utf-8') as f:
        return json.load(f)['metadata']
