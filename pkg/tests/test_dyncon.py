"""
Unit tests for fully dynamic connectivity.

Random insert/delete traces are replayed against a networkx recomputation
after every operation, with and without a level hierarchy.
"""

import time

import networkx as nx
import numpy as np
import pytest

from mlskel.domain.dyncon import DynamicConnectivity, RecomputedConnectivity
from mlskel.domain.exceptions import ContractViolation

BACKENDS = [
    pytest.param(lambda n: DynamicConnectivity(n), id="single-level"),
    pytest.param(lambda n: DynamicConnectivity(n, level_threshold=1), id="full-hierarchy"),
    pytest.param(lambda n: DynamicConnectivity(n, level_threshold=4), id="threshold-4"),
    pytest.param(lambda n: RecomputedConnectivity(n), id="recompute"),
]


@pytest.mark.parametrize("make", BACKENDS)
class TestConnectivityExamples:

    def test_empty_structure(self, make):
        assert make(0).number_of_components() == 0

    def test_fresh_structure_is_all_singletons(self, make):
        conn = make(5)
        assert conn.number_of_components() == 5
        assert conn.connected(0, 1) is False
        assert conn.connected(3, 3) is True

    def test_connect_merges(self, make):
        conn = make(3)
        conn.connect(0, 1)
        assert conn.number_of_components() == 2
        assert conn.connected(0, 1) is True

    def test_cycle_edge_is_redundant(self, make):
        conn = make(3)
        conn.connect(0, 1)
        conn.connect(1, 2)
        conn.connect(0, 2)
        assert conn.number_of_components() == 1

    def test_connect_is_idempotent(self, make):
        conn = make(3)
        conn.connect(0, 1)
        conn.connect(1, 0)
        assert conn.number_of_components() == 2
        conn.remove(0, 1)
        assert conn.number_of_components() == 3

    def test_remove_bridge(self, make):
        conn = make(3)
        conn.connect(0, 1)
        conn.connect(1, 2)
        conn.remove(0, 1)
        assert conn.number_of_components() == 2
        assert conn.connected(1, 2) is True
        assert conn.connected(0, 2) is False

    def test_remove_cycle_edge_keeps_component(self, make):
        conn = make(3)
        for u, v in [(0, 1), (1, 2), (0, 2)]:
            conn.connect(u, v)
        conn.remove(0, 1)
        assert conn.number_of_components() == 1
        assert conn.connected(0, 1) is True

    def test_remove_then_reconnect(self, make):
        conn = make(3)
        conn.connect(0, 1)
        conn.connect(1, 2)
        conn.remove(0, 1)
        conn.connect(0, 1)
        assert conn.number_of_components() == 1

    def test_star_without_spokes(self, make):
        conn = make(6)
        for leaf in range(1, 6):
            conn.connect(0, leaf)
        assert conn.number_of_components() == 1
        for leaf in range(1, 6):
            conn.remove(0, leaf)
        assert conn.number_of_components() == 6

    # ------------------------------------------------------------------
    # Contract violations
    # ------------------------------------------------------------------
    def test_self_loop_rejected(self, make):
        with pytest.raises(ContractViolation):
            make(3).connect(1, 1)

    def test_out_of_range_rejected(self, make):
        with pytest.raises(ContractViolation):
            make(3).connect(0, 3)

    def test_removing_absent_edge_rejected(self, make):
        conn = make(3)
        with pytest.raises(ContractViolation) as exc_info:
            conn.remove(0, 1)
        assert exc_info.value.error_code == "CONTRACT_VIOLATION"


class TestRandomTraces:

    @staticmethod
    def _replay(conn, n: int, steps: int, seed: int, density: float = 0.5):
        rng = np.random.default_rng(seed)
        oracle = nx.Graph()
        oracle.add_nodes_from(range(n))
        for _ in range(steps):
            u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
            if oracle.has_edge(u, v) and rng.random() < density:
                conn.remove(u, v)
                oracle.remove_edge(u, v)
            elif not oracle.has_edge(u, v):
                conn.connect(u, v)
                oracle.add_edge(u, v)
            assert conn.number_of_components() == nx.number_connected_components(oracle)
            a, b = (int(x) for x in rng.integers(0, n, size=2))
            assert conn.connected(a, b) == nx.has_path(oracle, a, b)
        return oracle

    @pytest.mark.parametrize("seed", range(4))
    def test_single_level_matches_oracle(self, seed):
        self._replay(DynamicConnectivity(30, seed=seed), 30, 200, seed)

    @pytest.mark.parametrize("seed", range(4))
    def test_full_hierarchy_matches_oracle(self, seed):
        self._replay(DynamicConnectivity(30, level_threshold=1, seed=seed), 30, 200, seed)

    def test_long_sparse_trace(self):
        # sparse graphs keep many bridges, exercising replacement search
        conn = DynamicConnectivity(40, level_threshold=2)
        self._replay(conn, 40, 2000, seed=11, density=0.8)

    def test_recompute_matches_oracle(self):
        self._replay(RecomputedConnectivity(30), 30, 300, seed=5)

    def test_edge_bookkeeping(self):
        conn = DynamicConnectivity(10, level_threshold=1)
        oracle = self._replay(conn, 10, 100, seed=3)
        assert conn.edge_count == oracle.number_of_edges()
        for u, v in oracle.edges():
            assert conn.has_edge(v, u)


class TestLevelHierarchy:

    def test_default_threshold_is_single_level(self):
        assert DynamicConnectivity(100).top_level == 0

    def test_threshold_one_gives_log_levels(self):
        assert DynamicConnectivity(64, level_threshold=1).top_level == 6

    def test_threshold_caps_levels(self):
        assert DynamicConnectivity(64, level_threshold=16).top_level == 2

    def test_negative_size_rejected(self):
        with pytest.raises(ContractViolation):
            DynamicConnectivity(-1)


def _churn(n: int, steps: int, seed: int) -> list[tuple[str, int, int]]:
    """Random insert/delete trace whose edge count hovers around ``n``."""
    rng = np.random.default_rng(seed)
    present: list[tuple[int, int]] = []
    index: dict[tuple[int, int], int] = {}
    ops = []
    while len(ops) < steps:
        m = len(present)
        if m and rng.random() < m / (m + n):
            k = int(rng.integers(m))
            edge, last = present[k], present.pop()
            if last != edge:
                present[k] = last
                index[last] = k
            del index[edge]
            ops.append(("remove", *edge))
            continue
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        if (u, v) in index:
            continue
        index[(u, v)] = len(present)
        present.append((u, v))
        ops.append(("connect", u, v))
    return ops


@pytest.mark.slow
class TestLargeTraces:

    @pytest.mark.parametrize("threshold", [None, 1, 8], ids=["single-level", "full-hierarchy", "threshold-8"])
    def test_ten_thousand_operations(self, threshold):
        n = 1000
        conn = DynamicConnectivity(n, level_threshold=threshold, seed=7)
        oracle = nx.Graph()
        oracle.add_nodes_from(range(n))
        rng = np.random.default_rng(17)
        for op, u, v in _churn(n, 10_000, seed=17):
            if op == "connect":
                conn.connect(u, v)
                oracle.add_edge(u, v)
            else:
                conn.remove(u, v)
                oracle.remove_edge(u, v)
            assert conn.number_of_components() == nx.number_connected_components(oracle)
            a, b = (int(x) for x in rng.integers(0, n, size=2))
            assert conn.connected(a, b) == nx.has_path(oracle, a, b)
        assert conn.edge_count == oracle.number_of_edges()

    def test_doubling_the_trace_at_most_triples_the_time(self):
        n = 1000
        ops = _churn(n, 20_000, seed=23)

        def replay(steps: int) -> float:
            best = float("inf")
            for _ in range(3):
                conn = DynamicConnectivity(n, level_threshold=1)
                started = time.perf_counter()
                for op, u, v in ops[:steps]:
                    if op == "connect":
                        conn.connect(u, v)
                    else:
                        conn.remove(u, v)
                best = min(best, time.perf_counter() - started)
            return best

        assert replay(20_000) / replay(10_000) <= 3.0
