"""Pydantic schemas for run configuration validation."""

from typing import Literal

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from mlskel.config.settings import BaseConfig
from mlskel.domain.exceptions import ConfigError

REFINE_ALIASES = {
    "lem": "shrink_only",
    "lemts": "thicken_then_shrink",
}


class RunConfig(BaseModel):
    """Every knob of one skeletonization run. CLI flags and HTTP bodies both land here."""

    alpha: int = Field(default=BaseConfig.DEFAULT_ALPHA, ge=1)
    seed: int = Field(default=BaseConfig.DEFAULT_SEED, ge=0, lt=2**64)
    threads: int = Field(default=BaseConfig.DEFAULT_THREADS, ge=1)
    batch_size: int = Field(default=BaseConfig.DEFAULT_BATCH_SIZE, ge=1)
    refine_mode: Literal["shrink_only", "thicken_then_shrink"] = "shrink_only"
    baseline: bool = False
    dyncon_threshold: int | None = Field(default=None, ge=1, description="None means a single level (threshold = n)")
    voxel_connectivity: Literal[6, 26] = 26
    out_format: Literal["ply", "obj"] = "ply"
    max_rounds: int = Field(default=BaseConfig.MAX_MATCHING_ROUNDS, ge=1)

    model_config = {"frozen": True}

    @field_validator("refine_mode", mode="before")
    @classmethod
    def expand_refine_alias(cls, value):
        if isinstance(value, str):
            return REFINE_ALIASES.get(value.lower(), value)
        return value

    @property
    def refine_label(self) -> str:
        """Short name used in reports and bench rows (LEM / LEMTS)."""
        return "lem" if self.refine_mode == "shrink_only" else "lemts"


class BenchSweep(BaseModel):
    """Which parameter a bench run sweeps, and over which values."""

    kind: Literal["alpha", "dyncon", "refine"] = "alpha"
    alphas: list[int] = Field(default_factory=lambda: list(BaseConfig.BENCH_ALPHAS))
    thresholds: list[int] | None = Field(default=None, description="Defaults to powers of two from 4 to n")
    refine_modes: list[str] = Field(default_factory=lambda: ["lem", "lemts"])
    repeats: int = Field(default=BaseConfig.BENCH_REPEATS, ge=1)
    subdivisions: int = Field(default=0, ge=0, description="Extra Loop-style subdivision levels per input")

    @model_validator(mode="after")
    def validate_values(self) -> "BenchSweep":
        """Validate cross-field sweep constraints."""
        if any(a < 1 for a in self.alphas):
            raise ValueError("alphas must all be >= 1")
        if self.thresholds is not None and any(t < 1 for t in self.thresholds):
            raise ValueError("thresholds must all be >= 1")
        unknown = [m for m in self.refine_modes if m.lower() not in REFINE_ALIASES]
        if unknown:
            raise ValueError(f"Unknown refine modes: {unknown}")
        return self


def build_run_config(**values) -> RunConfig:
    """Validate overrides into a ``RunConfig``; unset (None) values keep their defaults."""
    clean = {k: v for k, v in values.items() if v is not None}
    try:
        return RunConfig(**clean)
    except ValidationError as e:
        raise ConfigError("Invalid run configuration", details=e.errors(include_url=False, include_context=False)) from e


def build_bench_sweep(**values) -> BenchSweep:
    clean = {k: v for k, v in values.items() if v is not None}
    try:
        return BenchSweep(**clean)
    except ValidationError as e:
        raise ConfigError("Invalid bench sweep", details=e.errors(include_url=False, include_context=False)) from e
