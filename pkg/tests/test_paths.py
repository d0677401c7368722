from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from congested_sp import (
    AddRecord,
    CongestionViolation,
    FormatError,
    Graph,
    Path,
    PathCollection,
    SwapError,
    SwapRecord,
    all_pairs_distances,
    apply_swap,
    congestion_map,
    max_congestion_nodes,
    parse_trace,
    render_trace,
    replay,
    subpath,
    subpath_swap,
    validate_path,
)
from congested_sp.campaigns import swap_options
from congested_sp.counterexamples import build_appendixB_instance

from oracles import shortest_paths_brute, strongly_connected_graphs


class TestPath:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Path(())

    def test_order_queries(self):
        p = Path([4, 2, 7, 1])
        assert p.first == 4 and p.last == 1
        assert p.before(4, 7) and not p.before(7, 4) and not p.before(4, 9)
        assert p.order_of({1, 4, 7}) == (4, 7, 1)
        assert p.reversed().nodes == (1, 7, 2, 4)
        assert str(p) == "4 2 7 1"


class TestValidatePath:
    def test_d4(self, d4):
        o = all_pairs_distances(d4)
        assert validate_path(d4, o, Path([0, 1, 2]))
        assert not validate_path(d4, o, Path([0, 1, 2, 3, 0]))
        assert not validate_path(d4, o, Path([0, 2]))

    def test_not_shortest(self):
        g = Graph(True, 3, ((0, 1, 1), (1, 2, 1), (0, 2, 1)))
        o = all_pairs_distances(g)
        assert not validate_path(g, o, Path([0, 1, 2]))
        assert validate_path(g, o, Path([0, 2]))

    def test_out_of_range(self, d4):
        assert not validate_path(d4, all_pairs_distances(d4), Path([0, 9]))


class TestSubpath:
    def test_examples(self):
        p = Path([0, 1, 2, 3])
        assert subpath(p, 1, 3).nodes == (1, 2, 3)
        assert subpath(p, 2, 2).nodes == (2,)
        with pytest.raises(SwapError):
            subpath(p, 3, 1)
        with pytest.raises(SwapError):
            subpath(p, 0, 8)


class TestSwap:
    def test_identical_copies(self, d4):
        coll = PathCollection(d4, ([0, 1, 2], [0, 1, 2]))
        out, rec = subpath_swap(coll, 0, 1, 0, 2)
        assert out.node_lists() == coll.node_lists()
        assert rec == SwapRecord(0, 1, 0, 2)

    def test_diamond(self, diamond):
        a, x, y, b = 0, 1, 2, 3
        coll = PathCollection(diamond, ([a, x, b], [a, y, b]))
        out, _ = subpath_swap(coll, 0, 1, a, b)
        assert out.node_lists() == [[a, y, b], [a, x, b]]

    def test_d4_equal_segments(self, d4):
        coll = PathCollection(d4, ([0, 1, 2], [1, 2, 3]))
        out, _ = subpath_swap(coll, 0, 1, 1, 2)
        assert out == coll

    def test_undirected_reversed_segment(self, diamond):
        a, x, y, b = 0, 1, 2, 3
        coll = PathCollection(diamond, ([a, x, b], [b, y, a]))
        out, _ = subpath_swap(coll, 0, 1, a, b)
        assert out.node_lists() == [[a, y, b], [b, x, a]]
        assert out.terminals == coll.terminals

    def test_directed_order_violation(self, d4):
        coll = PathCollection(d4, ([0, 1, 2], [1, 2, 3]))
        with pytest.raises(SwapError):
            subpath_swap(coll, 0, 1, 2, 1)

    @pytest.mark.parametrize("args", [(0, 0, 1, 2), (0, 5, 1, 2), (0, 1, 0, 2), (0, 1, 2, 2)])
    def test_bad_arguments(self, d4, args):
        coll = PathCollection(d4, ([0, 1, 2], [1, 2, 3]))
        with pytest.raises(SwapError):
            subpath_swap(coll, *args)

    def test_terminals_are_fixed(self, d4):
        coll = PathCollection(d4, ([0, 1, 2],))
        with pytest.raises(ValueError):
            PathCollection(d4, ([1, 2],), coll.terminals)


class TestCongestion:
    def test_counts(self, d4):
        coll = PathCollection(d4, ([0, 1, 2], [1, 2, 3]))
        assert congestion_map(coll) == {0: 1, 1: 2, 2: 2, 3: 1}
        assert congestion_map(PathCollection(d4)) == {}

    def test_max_congestion(self, d4):
        coll = PathCollection(d4, ([0, 1, 2], [1, 2, 3]))
        assert max_congestion_nodes(coll, 2) == {1, 2}
        with pytest.raises(CongestionViolation):
            max_congestion_nodes(coll, 1)

    def test_cycle_instance_solution(self):
        inst = build_appendixB_instance(8)
        paths = [[(i + j) % 8 for j in range(7)] for i in range(8)]
        coll = PathCollection(inst.graph, tuple(paths))
        assert set(congestion_map(coll).values()) == {7}
        assert max_congestion_nodes(coll, 7) == frozenset(range(8))

    def test_total_count_equals_total_length(self, d4):
        coll = PathCollection(d4, ([0, 1, 2], [1, 2, 3], [3, 0]))
        assert sum(congestion_map(coll).values()) == sum(len(p) for p in coll)


class TestTrace:
    def test_swap_record_text(self):
        rec = SwapRecord(1, 2, 3, 4)
        assert str(rec) == "swap p=1 q=2 a=3 b=4"
        assert SwapRecord.parse(str(rec)) == rec

    def test_add_record_text(self):
        rec = AddRecord(3, Path([5, 6, 7]))
        assert str(rec) == "add i=3 path=5,6,7"
        assert AddRecord.parse(str(rec)) == rec

    def test_parse_trace_with_comments(self):
        recs = parse_trace("# header\nswap p=0 q=1 a=0 b=3\n\nadd i=2 path=0,2,3  # note\n")
        assert recs == [SwapRecord(0, 1, 0, 3), AddRecord(2, Path([0, 2, 3]))]
        assert parse_trace(render_trace(recs)) == recs

    @pytest.mark.parametrize("line", ["swap p=0 q=1 a=0", "swap p=x q=1 a=0 b=1", "add i=0", "flip p=0 q=1 a=0 b=1"])
    def test_bad_lines(self, line):
        with pytest.raises(FormatError):
            parse_trace(line)

    def test_replay_add_index_check(self, d4):
        with pytest.raises(FormatError):
            replay(PathCollection(d4), [AddRecord(1, Path([0, 1]))])


def _random_collection(g: Graph, rnd: random.Random, count: int) -> PathCollection:
    paths = []
    for _ in range(count):
        s, t = rnd.randrange(g.node_count), rnd.randrange(g.node_count)
        paths.append(rnd.choice(shortest_paths_brute(g, s, t)))
    return PathCollection(g, tuple(paths))


@given(strongly_connected_graphs(max_nodes=7, max_weight=2), st.randoms(use_true_random=False), st.integers(2, 5))
def test_swap_sequences_preserve_invariants(g, rnd, count):
    coll = _random_collection(g, rnd, count)
    o = all_pairs_distances(g)
    counts, terms = congestion_map(coll), coll.terminals
    for _ in range(6):
        options = swap_options(coll)
        if not options:
            break
        before = coll
        coll, rec = subpath_swap(coll, *rnd.choice(options))
        assert congestion_map(coll) == counts
        assert coll.terminals == terms
        assert all(validate_path(g, o, p) for p in coll)
        assert apply_swap(coll, rec) == before  # involution


@given(strongly_connected_graphs(max_nodes=6, max_weight=2), st.randoms(use_true_random=False))
def test_replay_reproduces(g, rnd):
    coll0 = _random_collection(g, rnd, 4)
    coll, records = coll0, []
    for _ in range(5):
        options = swap_options(coll)
        if not options:
            break
        coll, rec = subpath_swap(coll, *rnd.choice(options))
        records.append(rec)
    assert replay(coll0, parse_trace(render_trace(records))) == coll
