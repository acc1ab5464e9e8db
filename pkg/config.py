import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


def _env(name: str, default):
    """Read GROUPALG_<name> from the environment, cast to the default's type."""
    raw = os.getenv(f"GROUPALG_{name}")
    if raw is None:
        return default
    if isinstance(default, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return type(default)(raw)


# Base directories
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(BASE_DIR, "data")
LOGS_DIR = _env("LOGS_DIR", os.path.join(BASE_DIR, "logs"))


@dataclass
class Config:
    BASE_DIR = BASE_DIR
    DATA_DIR = DATA_DIR
    LOGS_DIR = LOGS_DIR
    LOG_FILE = os.path.join(LOGS_DIR, "groupalg.log")
    LOG_LEVEL = _env("LOG_LEVEL", "INFO")

    # Numerics
    FLOAT_TOL = _env("FLOAT_TOL", 1e-12)
    RANK_RTOL = _env("RANK_RTOL", 1e-9)
    IDEMPOTENT_TOL = _env("IDEMPOTENT_TOL", 1e-10)
    NORM_REL_SLACK = _env("NORM_REL_SLACK", 1e-9)

    # Exact Fraction elimination is used up to this matrix size, SVD above it
    EXACT_RANK_MAX_DIM = _env("EXACT_RANK_MAX_DIM", 64)

    # Caps on exhaustive searches
    MAX_IDEMPOTENTS = _env("MAX_IDEMPOTENTS", 20)
    MAX_SIMPLE_CYCLES = _env("MAX_SIMPLE_CYCLES", 10_000)
    MAX_PATHS_PER_LEVEL = _env("MAX_PATHS_PER_LEVEL", 200_000)
    MAX_COARSE_PAIRS = _env("MAX_COARSE_PAIRS", 40_000)
    MAX_COARSE_CLASSES = _env("MAX_COARSE_CLASSES", 12)
    MAX_BISECTION_SEARCH = _env("MAX_BISECTION_SEARCH", 100_000)
    MAX_SEMIGROUP_SUBSETS = _env("MAX_SEMIGROUP_SUBSETS", 4096)

    # Defaults for the command line
    DEFAULT_DEPTH = _env("DEFAULT_DEPTH", 10)
    DEFAULT_SEED = _env("DEFAULT_SEED", 0)
    REPORT_SCHEMA = "groupalg/1"

    @classmethod
    def ensure_dirs(cls):
        os.makedirs(cls.DATA_DIR, exist_ok=True)
        os.makedirs(cls.LOGS_DIR, exist_ok=True)


Config.ensure_dirs()
