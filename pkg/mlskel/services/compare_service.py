"""Skeleton comparison service: count deltas and normalized Hausdorff distances."""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path

from mlskel.domain.graph import EmbeddedGraph, bounding_sphere
from mlskel.domain.skeleton import Skeleton, directed_hausdorff, skeleton_metrics
from mlskel.repositories.skeleton_repository import SkeletonRepository
from mlskel.schemas.report_schema import MetricsRow
from mlskel.services.skeleton_service import SkeletonService

logger = logging.getLogger(__name__)


class CompareService:
    """Compares a candidate skeleton against a reference skeleton of the same input."""

    def __init__(self):
        self._skeleton_repo = SkeletonRepository()
        self._skeleton_svc = SkeletonService()

    def compare_skeletons(
        self,
        candidate: Skeleton,
        reference: Skeleton,
        normalizer: float,
        name: str = "",
    ) -> MetricsRow:
        """Deltas are candidate minus reference; distances are divided by ``normalizer``."""
        a = skeleton_metrics(candidate)
        b = skeleton_metrics(reference)
        row = MetricsRow(
            input=name,
            d_vertices=a.vertices - b.vertices,
            d_leafs=a.leafs - b.leafs,
            d_branches=a.branches - b.branches,
            d_genus=a.genus_estimate - b.genus_estimate,
            h_to_ref=directed_hausdorff(candidate, reference, normalizer),
            h_from_ref=directed_hausdorff(reference, candidate, normalizer),
        )
        logger.info(
            "Compared input=%s d_vertices=%s d_genus=%s h_to_ref=%.4f h_from_ref=%.4f",
            name, row.d_vertices, row.d_genus, row.h_to_ref, row.h_from_ref,
        )
        return row

    def cmd_compare(
        self,
        candidate_path: str | Path,
        reference_path: str | Path,
        input_path: str | Path,
    ) -> MetricsRow:
        """Load both skeletons and normalize by the input's bounding-sphere radius."""
        candidate = self._skeleton_repo.load(candidate_path)
        reference = self._skeleton_repo.load(reference_path)
        graph = self._skeleton_svc.load_input(input_path)
        return self.compare_skeletons(
            candidate, reference, normalizer_for(graph), name=Path(input_path).name,
        )


def normalizer_for(graph: EmbeddedGraph) -> float:
    """Bounding-sphere radius of the input positions."""
    return bounding_sphere(graph.positions).radius


def rows_to_csv(rows: list[MetricsRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(MetricsRow.CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buffer.getvalue()
