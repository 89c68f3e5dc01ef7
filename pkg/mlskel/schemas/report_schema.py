"""Pydantic schemas for run reports and metric rows."""

from typing import ClassVar

from pydantic import BaseModel, Field

class PhaseTimings(BaseModel):
    """Wall-clock seconds per pipeline phase."""

    coarsen: float = Field(default=0.0, ge=0)
    search: float = Field(default=0.0, ge=0)
    project: float = Field(default=0.0, ge=0)
    pack: float = Field(default=0.0, ge=0)
    extract: float = Field(default=0.0, ge=0)
    total: float = Field(default=0.0, ge=0)


class LevelReport(BaseModel):
    """Counts for one level of the multilevel pass."""

    level: int = Field(..., ge=0)
    vertices: int = Field(..., ge=0)
    edges: int = Field(..., ge=0)
    sampled: int = Field(default=0, ge=0)
    found: int = Field(default=0, ge=0)
    projected: int = Field(default=0, ge=0)
    refine_failures: int = Field(default=0, ge=0)
    deduped: int = Field(default=0, ge=0)
    packed: int = Field(default=0, ge=0)


class SkeletonMetricsModel(BaseModel):
    """Serialisable form of ``SkeletonMetrics`` (counts plus optional distances)."""

    vertices: int
    leafs: int
    branches: int
    genus_estimate: int
    components: int = 0
    hausdorff_ab: float | None = None
    hausdorff_ba: float | None = None


class RunReport(BaseModel):
    """Everything ``--report`` writes for one skeletonization run."""

    input: str | None = None
    alpha: int
    seed: int
    threads: int
    refine_mode: str
    baseline: bool = False
    dyncon_threshold: int | None = None
    input_vertices: int = 0
    input_edges: int = 0
    num_levels: int = 1
    coarsening_stalled: bool = False
    levels: list[LevelReport] = Field(default_factory=list)
    timings: PhaseTimings = Field(default_factory=PhaseTimings)
    metrics: SkeletonMetricsModel | None = None


class MetricsRow(BaseModel):
    """One comparison row: deltas are candidate minus reference."""

    input: str
    d_vertices: int
    d_leafs: int
    d_branches: int
    d_genus: int
    h_to_ref: float
    h_from_ref: float

    CSV_HEADER: ClassVar[tuple[str, ...]] = (
        "input", "d_vertices", "d_leafs", "d_branches", "d_genus", "h_to_ref", "h_from_ref",
    )

    def as_csv_row(self) -> list:
        return [getattr(self, name) for name in self.CSV_HEADER]
