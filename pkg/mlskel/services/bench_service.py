"""Benchmark service: parameter sweeps over a corpus with median-of-N timings."""

from __future__ import annotations

import csv
import io
import logging
import statistics
from collections.abc import Iterator
from pathlib import Path

from mlskel.domain.exceptions import SkeletonError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.domain.multilevel import multilevel_skeletonize
from mlskel.domain.shapes import loop_subdivide
from mlskel.domain.skeleton import skeleton_metrics
from mlskel.repositories.mesh_repository import MeshData, MeshRepository
from mlskel.schemas.run_schema import BenchSweep, RunConfig
from mlskel.services.skeleton_service import INPUT_FORMATS, SkeletonService

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ("coarsen", "search", "project", "pack", "extract", "total")
BENCH_COLUMNS = (
    "input", "vertices", "edges", "alpha", "refine", "dyncon_threshold", "levels",
    *TIMING_COLUMNS,
    "skeleton_vertices", "leafs", "branches", "genus", "error",
)


def dyncon_thresholds(num_vertices: int) -> list[int]:
    """Powers of two from 4 below ``num_vertices``, then ``num_vertices`` itself (single level)."""
    values = []
    t = 4
    while t < num_vertices:
        values.append(t)
        t *= 2
    values.append(max(num_vertices, 1))
    return values


class BenchService:
    """Runs sweeps sequentially and reports one row per (input, configuration)."""

    def __init__(self):
        self._skeleton_svc = SkeletonService()
        self._mesh_repo = MeshRepository()

    def collect_inputs(self, corpus_dir: str | Path) -> list[Path]:
        corpus = Path(corpus_dir)
        if not corpus.is_dir():
            return []
        return sorted(
            p for p in corpus.iterdir()
            if p.is_file() and p.suffix.lower().lstrip(".") in INPUT_FORMATS
        )

    def expand_input(self, path: Path, sweep: BenchSweep, base: RunConfig) -> Iterator[tuple[str, EmbeddedGraph]]:
        """The input itself, then its subdivisions when it is a mesh."""
        if sweep.subdivisions and path.suffix.lower() in (".ply", ".obj"):
            mesh = self._mesh_repo.load(path)
            vertices, faces = mesh.vertices, mesh.triangles()
            for level in range(sweep.subdivisions + 1):
                if level:
                    vertices, faces = loop_subdivide(vertices, faces)
                yield f"{path.name}@sub{level}", MeshData.from_arrays(vertices, faces).to_graph()
        else:
            yield path.name, self._skeleton_svc.load_input(path, base)

    @staticmethod
    def configs(sweep: BenchSweep, base: RunConfig, graph: EmbeddedGraph) -> list[RunConfig]:
        if sweep.kind == "alpha":
            return [base.model_copy(update={"alpha": a}) for a in sweep.alphas]
        if sweep.kind == "dyncon":
            values = sweep.thresholds or dyncon_thresholds(graph.num_vertices)
            return [base.model_copy(update={"dyncon_threshold": t}) for t in values]
        return [RunConfig(**{**base.model_dump(), "refine_mode": m}) for m in sweep.refine_modes]

    def measure(self, name: str, graph: EmbeddedGraph, config: RunConfig, repeats: int) -> dict:
        """Median of ``repeats`` runs per phase; skeleton counts come from the last run."""
        row = {
            "input": name,
            "vertices": graph.num_vertices,
            "edges": graph.num_edges,
            "alpha": config.alpha,
            "refine": config.refine_label,
            "dyncon_threshold": config.dyncon_threshold or graph.num_vertices,
            "error": "",
        }
        samples = {phase: [] for phase in TIMING_COLUMNS}
        result = None
        for _ in range(repeats):
            result = multilevel_skeletonize(graph, config=config)
            for phase in TIMING_COLUMNS:
                samples[phase].append(result.timings[phase])
        metrics = skeleton_metrics(result.skeleton)
        row.update({phase: statistics.median(values) for phase, values in samples.items()})
        row.update({
            "levels": result.num_levels,
            "skeleton_vertices": metrics.vertices,
            "leafs": metrics.leafs,
            "branches": metrics.branches,
            "genus": metrics.genus_estimate,
        })
        return row

    def cmd_bench(
        self,
        corpus_dir: str | Path,
        sweep: BenchSweep,
        base: RunConfig,
        out_csv: str | Path | None = None,
    ) -> list[dict]:
        """One row per (input, configuration); failures land in the ``error`` column."""
        rows: list[dict] = []
        for path in self.collect_inputs(corpus_dir):
            try:
                inputs = list(self.expand_input(path, sweep, base))
            except SkeletonError as e:
                logger.warning("Bench input failed file=%s error=%s", path, e.message)
                rows.append({"input": path.name, "error": e.message})
                continue
            for name, graph in inputs:
                for config in self.configs(sweep, base, graph):
                    try:
                        rows.append(self.measure(name, graph, config, sweep.repeats))
                    except SkeletonError as e:
                        logger.warning("Bench run failed input=%s alpha=%s error=%s", name, config.alpha, e.message)
                        rows.append({"input": name, "alpha": config.alpha, "error": e.message})
        logger.info("Bench finished rows=%s", len(rows))
        if out_csv:
            path = Path(out_csv)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(rows_to_csv(rows), encoding="utf-8")
        return rows


def rows_to_csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=BENCH_COLUMNS, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()
