"""
Configuration for Atom Lens Designer
"""
import os

from dotenv import load_dotenv

load_dotenv()


def _workers_default():
    value = os.environ.get('ATOMLENS_WORKERS')
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


class Config:
    """Base configuration"""
    # Output
    OUTPUT_DIR = os.environ.get('ATOMLENS_OUTPUT_DIR', 'output')
    OUTPUT_FORMAT = 'csv'

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

    # Worker pool for per-order fan-out
    WORKERS = _workers_default()

    # Lens quality criterion (0.74% deviation from the enveloping parabola)
    DEVIATION_TOLERANCE = 0.0074

    # Deviation-mark bracketing step, in units of w_0x
    SCAN_STEP = 1.0 / 400.0

    # Profile export grid
    GRID_POINTS = 2001
    HALF_WIDTH_FACTOR = 1.2 * 0.57

    # Crossed-lens dephasing scan
    ANGLE_SAMPLES = 720
    ZMIN_ORDERS = tuple(range(3, 57, 2))
    # Smallest Psi_1 reference waist whose deviation mark sets the circle, in wavelengths
    ZMIN_APERTURE_WAIST = 3.0

    # Lens family table range
    TABLE1_MAX_ORDER = 33

    # Physics validity limits
    RAMAN_NATH_THRESHOLD = 100.0
    SATURATION_WARN_RATIO = 0.1

    # Thin-lens ray check
    RAY_COUNT = 201


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    """Production configuration (batch runs for publication data)"""
    DEBUG = False
    OUTPUT_FORMAT = 'json'


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    DEBUG = True

    # Keep tests single-process and quick
    WORKERS = 1
    GRID_POINTS = 401
    ANGLE_SAMPLES = 720


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config(config_name=None):
    """Resolve a config class from its name or ATOMLENS_ENV"""
    config_name = config_name or os.environ.get('ATOMLENS_ENV', 'default')
    return config.get(config_name, config['default'])
