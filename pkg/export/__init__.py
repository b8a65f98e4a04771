"""
Run configuration and artifact writers
"""

__version__ = '1.0.0'

from .artifacts import (  # noqa: E402
    Axis,
    NumpyEncoder,
    SampledProfile,
    artifact_metadata,
    read_profile_json,
    write_profile,
    write_table
)
from .run_config import RunConfig, load_run_config  # noqa: E402

__all__ = [
    '__version__',
    'Axis',
    'NumpyEncoder',
    'SampledProfile',
    'artifact_metadata',
    'read_profile_json',
    'write_profile',
    'write_table',
    'RunConfig',
    'load_run_config'
]
