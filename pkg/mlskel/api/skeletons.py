"""Skeleton API namespace: skeletonize inputs and compare skeletons.

Controllers are kept thin (parse → validate → call service → respond).
"""

import numpy as np
from flask import request
from flask_restx import Namespace, Resource, fields
from pydantic import ValidationError as PydanticValidationError

from mlskel.domain.exceptions import ConfigError, SkeletonError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.domain.skeleton import Skeleton
from mlskel.schemas.response import error_response, skeleton_payload, success_response
from mlskel.schemas.run_schema import build_run_config
from mlskel.schemas.skeleton_schema import CompareRequestSchema, SkeletonizeRequestSchema
from mlskel.services.compare_service import CompareService
from mlskel.services.skeleton_service import SkeletonService

ns = Namespace("skeletons", description="Curve skeleton computation and comparison")

# ---------------------------------------------------------------------------
# Swagger models
# ---------------------------------------------------------------------------
skeletonize_model = ns.model("SkeletonizeInput", {
    "format": fields.String(required=True, enum=["graph", "ply", "obj", "voxels"]),
    "data": fields.String(required=True, description="File content in the given format"),
    "config": fields.Raw(description="Run overrides: alpha, seed, threads, refine_mode, baseline, ..."),
    "name": fields.String(description="Label used in the run report"),
})

skeleton_model = ns.model("Skeleton", {
    "nodes": fields.List(fields.List(fields.Float), required=True),
    "edges": fields.List(fields.List(fields.Integer)),
})

compare_model = ns.model("CompareInput", {
    "candidate": fields.Nested(skeleton_model, required=True),
    "reference": fields.Nested(skeleton_model, required=True),
    "normalizer": fields.Float(required=True, description="Bounding-sphere radius of the input"),
    "name": fields.String(),
})

# ---------------------------------------------------------------------------
# Service instances
# ---------------------------------------------------------------------------
_skeleton_svc = SkeletonService()
_compare_svc = CompareService()


def _to_skeleton(payload) -> Skeleton:
    graph = EmbeddedGraph.from_edges(
        np.asarray(payload.nodes, dtype=np.float64),
        np.asarray(payload.edges, dtype=np.int64).reshape(-1, 2),
    )
    return Skeleton.from_graph(graph)


@ns.route("")
class SkeletonCreate(Resource):
    """Compute a skeleton."""

    @ns.doc("create_skeleton")
    @ns.expect(skeletonize_model)
    def post(self):
        """Skeletonize an input given inline."""
        try:
            body = SkeletonizeRequestSchema(**(request.get_json(silent=True) or {}))
            config = build_run_config(**body.config)
            graph = _skeleton_svc.parse_input(body.data, body.format, config)
            result, report = _skeleton_svc.skeletonize(graph, config, input_name=body.name)
            return success_response({
                "skeleton": skeleton_payload(result.skeleton),
                "report": report.model_dump(),
            }, 201)
        except PydanticValidationError as err:
            return error_response(
                "Invalid input", "VALIDATION_ERROR", 400,
                details=err.errors(include_url=False, include_context=False),
            )
        except ConfigError as err:
            return error_response(err.message, err.error_code, err.status_code, details=err.details)
        except SkeletonError as err:
            return error_response(err.message, err.error_code, err.status_code)


@ns.route("/compare")
class SkeletonCompare(Resource):
    """Compare two skeletons."""

    @ns.doc("compare_skeletons")
    @ns.expect(compare_model)
    def post(self):
        """Count deltas (candidate minus reference) and normalized Hausdorff distances."""
        try:
            body = CompareRequestSchema(**(request.get_json(silent=True) or {}))
            row = _compare_svc.compare_skeletons(
                _to_skeleton(body.candidate),
                _to_skeleton(body.reference),
                body.normalizer,
                name=body.name,
            )
            return success_response(row.model_dump())
        except PydanticValidationError as err:
            return error_response(
                "Invalid input", "VALIDATION_ERROR", 400,
                details=err.errors(include_url=False, include_context=False),
            )
        except SkeletonError as err:
            return error_response(err.message, err.error_code, err.status_code)
