"""
Configuration for dskp-lab

Every value can be overridden through the environment; the CLI flags
--backend and --max-aztec override the matching values at run time.
"""

import os


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


# Logging
LOG_LEVEL = os.getenv('DSKP_LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = os.getenv('DSKP_LOG_FORMAT', '%(asctime)s - %(name)s - %(levelname)s - %(message)s')

# Scalar backends
SUPPORTED_BACKENDS = ('exact', 'float')
DEFAULT_BACKEND = os.getenv('DSKP_BACKEND', 'exact')
FLOAT_TOLERANCE = float(os.getenv('DSKP_FLOAT_TOLERANCE', '1e-9'))
COPLANARITY_TOLERANCE = float(os.getenv('DSKP_COPLANARITY_TOLERANCE', '1e-7'))

# Dimer enumeration guard
MAX_AZTEC_SIZE = int(os.getenv('DSKP_MAX_AZTEC', '6'))

# Generators
DEFAULT_SEED = int(os.getenv('DSKP_SEED', '2024'))
RANDOM_NUMERATOR_RANGE = 40
RANDOM_DENOMINATOR_RANGE = 9

# Artifacts
OUTPUT_DIR = os.getenv('DSKP_OUTPUT_DIR', 'output')
SCENARIO_DIR = os.getenv('DSKP_SCENARIO_DIR', 'scenarios')
PNG_PREVIEW = _env_bool('DSKP_PNG_PREVIEW', False)

# Rendering
SVG_SIZE = 600
SVG_MARGIN = 30
SVG_STROKE_WIDTH = 1.2
SVG_POINT_RADIUS = 3.0
SVG_LAYER_COLORS = (
    '#2e8b57',  # green
    '#1f5fbf',  # blue
    '#8a2be2',  # purple
    '#d62728',  # red
    '#ff7f0e',  # orange
    '#17becf',  # teal
    '#7f7f7f',  # grey
)
SVG_INTERNAL_FACE_COLOR = '#9ecae1'
SVG_OPEN_FACE_COLOR = '#fdd835'
