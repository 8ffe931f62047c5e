import os
from fractions import Fraction

from errors import UsageError

# Defaults for the CLI, overridable per invocation
DEFAULT_N = 64              # distance profile length n = 1..N
DEFAULT_K = 16              # number of Schröder coefficients b_1..b_K
DEFAULT_T_PRECISION = 32    # relative T-precision of each division
DEFAULT_DISPLAY_EPSILON = Fraction(1, 2)  # |T| used only for printing radii
N_CHECK = 64                # root-of-unity certification bound for maps

# Working precision of the truncated pass in distance_profile
PROFILE_WORKING_PRECISION = 16

SCHEMA_VERSION = "1"

PRECISION_ENV = "ULTRADISC_PRECISION"
LOG_LEVEL_ENV = "ULTRADISC_LOG_LEVEL"


def default_t_precision():
    """Default t_precision, honouring ULTRADISC_PRECISION"""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_T_PRECISION
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"{PRECISION_ENV} must be positive, got {value}")
    return value


def default_log_level():
    return os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
