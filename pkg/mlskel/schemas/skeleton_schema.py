"""Pydantic schemas for HTTP skeleton requests."""

from typing import Any

from pydantic import BaseModel, Field, model_validator


class SkeletonizeRequestSchema(BaseModel):
    """Input text in one of the supported formats plus run overrides."""

    format: str = Field(..., pattern=r"^(graph|ply|obj|voxels)$")
    data: str = Field(..., min_length=1)
    config: dict[str, Any] = Field(default_factory=dict)
    name: str | None = Field(None, max_length=255)


class SkeletonPayloadSchema(BaseModel):
    """A skeleton as plain node positions and index pairs."""

    nodes: list[tuple[float, float, float]] = Field(..., min_length=1)
    edges: list[tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_edges(self) -> "SkeletonPayloadSchema":
        """Every edge must reference an existing node."""
        n = len(self.nodes)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge ({u}, {v}) references a missing node")
        return self


class CompareRequestSchema(BaseModel):
    candidate: SkeletonPayloadSchema
    reference: SkeletonPayloadSchema
    normalizer: float = Field(..., gt=0)
    name: str = Field(default="", max_length=255)
