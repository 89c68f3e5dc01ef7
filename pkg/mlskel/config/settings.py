"""Application configuration classes.

Supports multiple environments via class inheritance. Pipeline defaults live
on ``BaseConfig`` so the CLI, the HTTP front end and the library share them.
MLSKEL_LOG_LEVEL and MLSKEL_MAX_UPLOAD_MB can be set via environment variables.
"""

import os


class BaseConfig:
    """Base configuration shared across all environments."""

    # --- Pipeline defaults ---
    DEFAULT_ALPHA = 64
    DEFAULT_SEED = 0
    DEFAULT_THREADS = 1
    DEFAULT_BATCH_SIZE = 8
    MAX_MATCHING_ROUNDS = 10
    SPHERE_EPSILON = 1e-12
    HAUSDORFF_SAMPLES_PER_RADIUS = 256
    BENCH_REPEATS = 3
    BENCH_ALPHAS = (8, 16, 32, 64, 128)

    # --- Logging ---
    LOG_LEVEL = os.getenv("MLSKEL_LOG_LEVEL", "INFO")

    # --- HTTP front end ---
    JSON_SORT_KEYS = False
    RESTX_MASK_SWAGGER = False
    MAX_CONTENT_LENGTH = int(os.getenv("MLSKEL_MAX_UPLOAD_MB", "64")) * 1024 * 1024


class DevelopmentConfig(BaseConfig):
    """Development configuration with verbose logging."""

    DEBUG = True
    LOG_LEVEL = os.getenv("MLSKEL_LOG_LEVEL", "DEBUG")


class TestingConfig(BaseConfig):
    """Testing configuration: quiet logs and small uploads."""

    TESTING = True
    LOG_LEVEL = "WARNING"
    MAX_CONTENT_LENGTH = 4 * 1024 * 1024


class ProductionConfig(BaseConfig):
    """Production configuration."""

    DEBUG = False


CONFIG_MAP = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}
