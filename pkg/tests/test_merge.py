from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from congested_sp import (
    Graph,
    PathCollection,
    Supplier,
    SupplierExhausted,
    SwapRecord,
    UnsupportedGraph,
    all_pairs_distances,
    congestion_map,
    merge_dag,
    merge_undirected,
    replay,
    validate_path,
)
from congested_sp.campaigns import random_dag, random_graph
from congested_sp.merge import farthest_pair

from oracles import shortest_paths_brute


@pytest.fixture
def bypass() -> Graph:
    """Undirected spine 0-1-2-3-4 with a bypass 2-6-4 around node 3 and a spare node 5."""
    return Graph(False, 7, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (2, 6, 1), (6, 4, 1), (4, 5, 1)))


class TestMergeDag:
    def test_chain(self, chain3):
        coll = PathCollection(chain3, ([0, 1, 2],))
        out, p, trace = merge_dag(coll, {0, 1, 2}, Supplier.collection(chain3))
        assert out[p].nodes == (0, 1, 2) and trace.records == []

    def test_diamond_tail_needs_one_swap(self):
        g = Graph(True, 5, ((0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1)))
        coll = PathCollection(g, ([0, 1, 3, 4], [0, 2, 3, 4]))
        out, p, trace = merge_dag(coll, {0, 2, 4}, Supplier.collection(g))
        assert p == 0 and out[0].nodes == (0, 2, 3, 4)
        assert trace.records == [SwapRecord(0, 1, 0, 4)]
        assert congestion_map(out) == congestion_map(coll)
        assert replay(coll, trace.records) == out

    def test_singleton(self, chain3):
        coll = PathCollection(chain3, ([0, 1, 2],))
        out, p, _ = merge_dag(coll, {1}, Supplier.collection(chain3))
        assert 1 in out[p]

    def test_errors(self, chain3, d4):
        coll = PathCollection(chain3, ([0, 1], [1, 2]))
        with pytest.raises(ValueError):
            merge_dag(coll, set(), Supplier.collection(chain3))
        with pytest.raises(SupplierExhausted):
            merge_dag(coll, {0, 2}, Supplier.collection(chain3))
        with pytest.raises(UnsupportedGraph):
            merge_dag(PathCollection(d4, ([0, 1],)), {0, 1}, Supplier.collection(d4))

    def test_theorem_mode_materializes(self, chain3):
        out, p, trace = merge_dag(PathCollection(chain3), {0, 2}, Supplier.theorem(chain3))
        assert out[p].nodes == (0, 1, 2)
        assert [str(r) for r in trace.records] == ["add i=0 path=0,1,2"]


class TestMergeUndirected:
    def test_c4(self, c4):
        coll = PathCollection(c4, ([0, 1, 2], [0, 3, 2]))
        out, p, trace = merge_undirected(coll, {0, 1, 2}, Supplier.collection(c4))
        assert out[p].nodes == (0, 1, 2) and trace.swaps == []

    def test_bypass_swap(self, bypass):
        coll = PathCollection(bypass, ([0, 1, 2, 6, 4], [0, 1, 2, 3, 4]))
        out, p, trace = merge_undirected(coll, {0, 1, 3, 4}, Supplier.collection(bypass))
        assert p == 0 and out[0].nodes == (0, 1, 2, 3, 4)
        assert trace.swaps == [SwapRecord(0, 1, 1, 4)]
        assert trace.covered == [frozenset({0, 1, 4}), frozenset({0, 1, 3, 4})]
        assert replay(coll, trace.records) == out

    def test_reversed_stored_path(self, bypass):
        coll = PathCollection(bypass, ([4, 6, 2, 1, 0], [0, 1, 2, 3, 4]))
        out, p, _ = merge_undirected(coll, {0, 1, 3, 4}, Supplier.collection(bypass))
        assert out[p].contains_all({0, 1, 3, 4})
        assert out.terminals == coll.terminals

    def test_farthest_pair_tie_break(self, c4):
        assert farthest_pair(all_pairs_distances(c4), [0, 1, 2, 3]) == (0, 2)
        assert farthest_pair(all_pairs_distances(c4), [3]) == (3, 3)

    def test_errors(self, d4, c4):
        with pytest.raises(UnsupportedGraph):
            merge_undirected(PathCollection(d4, ([0, 1],)), {0, 1}, Supplier.collection(d4))
        with pytest.raises(ValueError):
            merge_undirected(PathCollection(c4, ([0, 1],)), (), Supplier.collection(c4))
        with pytest.raises(SupplierExhausted):
            merge_undirected(PathCollection(c4, ([0, 1], [1, 2])), {0, 2}, Supplier.collection(c4))


def _check_merge(g, merge, seed, data):
    o = all_pairs_distances(g)
    s = data.draw(st.integers(0, g.node_count - 1))
    t = data.draw(st.integers(0, g.node_count - 1))
    options = shortest_paths_brute(g, s, t)
    if not options:
        return
    host = data.draw(st.sampled_from(options))
    W = data.draw(st.sets(st.sampled_from(host), min_size=1))
    coll = PathCollection(g, tuple(data.draw(st.lists(st.sampled_from(options), max_size=3))))
    out, p, trace = merge(coll, W, Supplier.theorem(g, o))
    assert out[p].contains_all(W)
    assert validate_path(g, o, out[p])
    assert replay(coll, trace.records) == out
    assert all(a <= b for a, b in zip(trace.covered, trace.covered[1:]))
    assert trace.covered[-1] == frozenset(W)


@given(st.integers(0, 10**6), st.data())
def test_dag_merge_covers_points_of_a_shortest_path(seed, data):
    _check_merge(random_dag(seed, data.draw(st.integers(2, 8)), 0.4, 1, 2), merge_dag, seed, data)


@given(st.integers(0, 10**6), st.data())
def test_undirected_merge_covers_points_of_a_shortest_path(seed, data):
    g = random_graph(seed, data.draw(st.integers(2, 8)), directed=False, edge_prob=0.4, wmin=1, wmax=2)
    _check_merge(g, merge_undirected, seed, data)
