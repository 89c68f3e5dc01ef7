"""
Tests for the HTTP front end.
"""

import numpy as np

from mlskel.api import NumpyJSONProvider
from mlskel.repositories.graph_repository import GraphRepository
from tests.graphs import cycle_graph

RING = GraphRepository().serialize(cycle_graph(12), "graph").decode("ascii")

TRIANGLE_OBJ = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"


class TestSkeletonCreate:

    def test_graph_input(self, client):
        resp = client.post("/skeletons", json={"format": "graph", "data": RING, "config": {"alpha": 4}, "name": "ring"})
        assert resp.status_code == 201
        body = resp.get_json()
        assert body["status"] == "success"
        report = body["data"]["report"]
        assert report["input"] == "ring"
        assert report["alpha"] == 4
        assert report["metrics"]["genus_estimate"] == 1
        skeleton = body["data"]["skeleton"]
        assert len(skeleton["nodes"]) == report["metrics"]["vertices"]
        assert len(skeleton["provenance"]) == len(skeleton["nodes"])

    def test_mesh_input(self, client):
        resp = client.post("/skeletons", json={"format": "obj", "data": TRIANGLE_OBJ})
        assert resp.status_code == 201
        assert resp.get_json()["data"]["report"]["input_vertices"] == 3

    def test_refine_alias_accepted(self, client):
        resp = client.post("/skeletons", json={"format": "graph", "data": RING, "config": {"refine_mode": "lemts"}})
        assert resp.status_code == 201
        assert resp.get_json()["data"]["report"]["refine_mode"] == "lemts"

    def test_missing_body(self, client):
        resp = client.post("/skeletons", json={})
        assert resp.status_code == 400
        assert resp.get_json()["error_code"] == "VALIDATION_ERROR"

    def test_unknown_format(self, client):
        resp = client.post("/skeletons", json={"format": "stl", "data": "solid"})
        assert resp.status_code == 400
        assert resp.get_json()["error_code"] == "VALIDATION_ERROR"

    def test_bad_config(self, client):
        resp = client.post("/skeletons", json={"format": "graph", "data": RING, "config": {"alpha": 0}})
        assert resp.status_code == 400
        body = resp.get_json()
        assert body["error_code"] == "VALIDATION_ERROR"
        assert body["details"][0]["loc"] == ["alpha"]

    def test_parse_error(self, client):
        resp = client.post("/skeletons", json={"format": "graph", "data": "graph 2 1\n0 0 0 1\n"})
        assert resp.status_code == 400
        assert resp.get_json()["error_code"] == "PARSE_ERROR"

    def test_empty_mesh(self, client):
        resp = client.post("/skeletons", json={"format": "obj", "data": "# nothing"})
        assert resp.status_code == 422
        assert resp.get_json()["error_code"] == "EMPTY_INPUT"


class TestSkeletonCompare:

    def setup_method(self):
        self.segment = {"nodes": [[0, 0, 0], [2, 0, 0]], "edges": [[0, 1]]}
        self.point = {"nodes": [[0, 0, 0]]}

    def test_identical(self, client):
        resp = client.post("/skeletons/compare", json={
            "candidate": self.segment, "reference": self.segment, "normalizer": 1.0,
        })
        assert resp.status_code == 200
        data = resp.get_json()["data"]
        assert data["d_vertices"] == 0
        assert data["h_to_ref"] == 0.0
        assert data["h_from_ref"] == 0.0

    def test_directed_distances(self, client):
        resp = client.post("/skeletons/compare", json={
            "candidate": self.segment, "reference": self.point, "normalizer": 2.0, "name": "seg",
        })
        data = resp.get_json()["data"]
        assert data["input"] == "seg"
        assert data["d_vertices"] == 1
        assert data["h_to_ref"] == 1.0
        assert data["h_from_ref"] == 0.0

    def test_dangling_edge_rejected(self, client):
        bad = {"nodes": [[0, 0, 0]], "edges": [[0, 3]]}
        resp = client.post("/skeletons/compare", json={"candidate": bad, "reference": self.point, "normalizer": 1.0})
        assert resp.status_code == 400

    def test_non_positive_normalizer_rejected(self, client):
        resp = client.post("/skeletons/compare", json={
            "candidate": self.point, "reference": self.point, "normalizer": 0,
        })
        assert resp.status_code == 400


class TestApplication:

    def test_unknown_route(self, client):
        resp = client.get("/does-not-exist")
        assert resp.status_code == 404

    def test_json_provider_handles_numpy(self, app):
        provider = NumpyJSONProvider(app)
        assert provider.default(np.int64(3)) == 3
        assert provider.default(np.float32(0.5)) == 0.5
        assert provider.default(np.arange(3)) == [0, 1, 2]
