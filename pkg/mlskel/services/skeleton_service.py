"""Skeletonization service: end-to-end workflow orchestration.

Flow: load input → multilevel_skeletonize() → write skeleton → build run report.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from mlskel.domain.coarsening import build_hierarchy
from mlskel.domain.exceptions import UnsupportedFormatError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.domain.multilevel import MultilevelResult, multilevel_skeletonize
from mlskel.domain.skeleton import skeleton_metrics
from mlskel.repositories.graph_repository import GraphRepository
from mlskel.repositories.mesh_repository import MeshRepository
from mlskel.repositories.skeleton_repository import SkeletonRepository
from mlskel.repositories.voxel_repository import VoxelRepository
from mlskel.schemas.report_schema import LevelReport, PhaseTimings, RunReport, SkeletonMetricsModel
from mlskel.schemas.run_schema import RunConfig

logger = logging.getLogger(__name__)

INPUT_FORMATS = {
    "ply": "mesh",
    "obj": "mesh",
    "graph": "graph",
    "txt": "graph",
    "vox": "voxels",
    "voxels": "voxels",
    "xyz": "voxels",
}


class SkeletonService:
    """Loads inputs, runs the multilevel pipeline and writes its outputs."""

    def __init__(self):
        self._graph_repo = GraphRepository()
        self._mesh_repo = MeshRepository()
        self._skeleton_repo = SkeletonRepository()

    # ------------------------------------------------------------------
    # Input
    # ------------------------------------------------------------------
    def load_input(self, path: str | Path, config: RunConfig | None = None) -> EmbeddedGraph:
        """Read a mesh, voxel list or native graph, chosen by file extension."""
        config = config or RunConfig()
        fmt = Path(path).suffix.lower().lstrip(".")
        kind = INPUT_FORMATS.get(fmt)
        if kind is None:
            raise UnsupportedFormatError(fmt or str(path), sorted(INPUT_FORMATS))
        if kind == "mesh":
            graph = self._mesh_repo.load(path).to_graph()
        elif kind == "voxels":
            graph = VoxelRepository(config.voxel_connectivity).load(path)
        else:
            graph = self._graph_repo.load(path)
        logger.info(
            "Loaded input=%s kind=%s vertices=%s edges=%s",
            path, kind, graph.num_vertices, graph.num_edges,
        )
        return graph

    def parse_input(self, data: bytes | str, fmt: str, config: RunConfig | None = None) -> EmbeddedGraph:
        """Same as ``load_input`` for in-memory content (HTTP bodies)."""
        config = config or RunConfig()
        kind = INPUT_FORMATS.get(fmt.lower())
        if kind is None:
            raise UnsupportedFormatError(fmt, sorted(INPUT_FORMATS))
        if kind == "mesh":
            return self._mesh_repo.parse(data, fmt.lower()).to_graph()
        if kind == "voxels":
            return VoxelRepository(config.voxel_connectivity).parse(data, "voxels")
        return self._graph_repo.parse(data, "graph")

    # ------------------------------------------------------------------
    # Pipeline
    # ------------------------------------------------------------------
    def skeletonize(
        self,
        graph: EmbeddedGraph,
        config: RunConfig,
        input_name: str | None = None,
    ) -> tuple[MultilevelResult, RunReport]:
        """Run the pipeline on a loaded graph and build its report."""
        result = multilevel_skeletonize(graph, config=config)
        report = self.build_report(graph, result, config, input_name)
        logger.info(
            "Skeletonized input=%s nodes=%s genus=%s total=%.3fs",
            input_name, report.metrics.vertices, report.metrics.genus_estimate, report.timings.total,
        )
        return result, report

    def cmd_skeletonize(
        self,
        input_path: str | Path,
        config: RunConfig,
        output_path: str | Path | None = None,
        report_path: str | Path | None = None,
    ) -> RunReport:
        """Load, skeletonize, and write the skeleton file (and report when asked)."""
        graph = self.load_input(input_path, config)
        result, report = self.skeletonize(graph, config, input_name=str(input_path))

        output_path = Path(output_path) if output_path else default_output_path(input_path, config.out_format)
        self._skeleton_repo.save(result.skeleton, output_path, config.out_format)
        if report_path:
            write_report(report, report_path)
        return report

    def cmd_coarsen(self, input_path: str | Path, out_dir: str | Path, config: RunConfig) -> list[Path]:
        """Write every level of the hierarchy in the native graph format."""
        graph = self.load_input(input_path, config)
        hierarchy = build_hierarchy(
            graph, config.alpha, np.random.default_rng(config.seed), max_rounds=config.max_rounds,
        )
        out_dir = Path(out_dir)
        stem = Path(input_path).stem
        return [
            self._graph_repo.save(level_graph, out_dir / f"{stem}.level{i}.graph")
            for i, level_graph in enumerate(hierarchy.graphs)
        ]

    @staticmethod
    def build_report(
        graph: EmbeddedGraph,
        result: MultilevelResult,
        config: RunConfig,
        input_name: str | None = None,
    ) -> RunReport:
        metrics = skeleton_metrics(result.skeleton)
        return RunReport(
            input=input_name,
            alpha=config.alpha,
            seed=config.seed,
            threads=config.threads,
            refine_mode=config.refine_label,
            baseline=config.baseline,
            dyncon_threshold=config.dyncon_threshold,
            input_vertices=graph.num_vertices,
            input_edges=graph.num_edges,
            num_levels=result.num_levels,
            coarsening_stalled=result.stalled,
            levels=[LevelReport(**stats.to_dict()) for stats in result.levels],
            timings=PhaseTimings(**result.timings),
            metrics=SkeletonMetricsModel(**metrics.to_dict()),
        )


def default_output_path(input_path: str | Path, out_format: str) -> Path:
    path = Path(input_path)
    return path.with_name(f"{path.stem}.skel.{out_format}")


def write_report(report: RunReport, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote report file=%s", path)
    return path
