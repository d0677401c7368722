from __future__ import annotations

from itertools import combinations
from pathlib import Path as FsPath

import pytest

from congested_sp import BudgetExceeded, GraphError, Path, all_pairs_distances, brute_force_spc
from congested_sp.counterexamples import (
    all_shortest_paths,
    build_appendixB_instance,
    build_bidirectional_cycle,
    find_roundtrip_pair,
    is_roundtrip_pair,
    verify_appendixB,
    verify_bidirectional_cycle,
    verify_local_precondition,
    verify_no_single_cover,
)

from oracles import all_shortest_paths_brute, floyd_warshall, spc_solutions_brute

FIXTURES = FsPath(__file__).parent / "fixtures"


class TestBuilders:
    def test_cycle_shape(self):
        g = build_bidirectional_cycle(4, 4)
        assert g.directed and len(g.edges) == 8
        assert all_pairs_distances(g).dist(0, 3) == 3

    def test_cycle_with_unit_reverse_weight(self):
        d = floyd_warshall(build_bidirectional_cycle(3, 1))
        assert all(d[i][j] == 1 for i in range(3) for j in range(3) if i != j)

    @pytest.mark.parametrize("n,a", [(2, 3), (5, 0), (5, True)])
    def test_cycle_errors(self, n, a):
        with pytest.raises(GraphError):
            build_bidirectional_cycle(n, a)

    def test_directed_cycle_instance(self):
        inst = build_appendixB_instance(12)
        assert (inst.k, inst.c, inst.d) == (12, 10, 2)
        assert inst.pairs[11] == (11, 8)

    @pytest.mark.parametrize("n", [4, 6, 10])
    def test_directed_cycle_instance_errors(self, n):
        with pytest.raises(GraphError):
            build_appendixB_instance(n)


class TestPrecondition:
    def test_size_11_holds_on_every_subset(self):
        g = build_bidirectional_cycle(16, 11)
        assert verify_local_precondition(g, all_pairs_distances(g), 11) == (True, None)

    def test_full_set_fails(self):
        g = build_bidirectional_cycle(16, 11)
        assert verify_local_precondition(g, all_pairs_distances(g), 16) == (False, tuple(range(16)))

    def test_singletons_hold(self, chain3):
        assert verify_local_precondition(chain3, all_pairs_distances(chain3), 1) == (True, None)

    def test_pool_and_cap(self, chain3):
        o = all_pairs_distances(chain3)
        assert verify_local_precondition(chain3, o, 5, pool={0, 2}) == (True, None)
        with pytest.raises(BudgetExceeded):
            verify_local_precondition(chain3, o, 2, cap=2)
        with pytest.raises(ValueError):
            verify_local_precondition(chain3, o, 0)

    def test_matches_path_enumeration_on_small_cycle(self):
        g = build_bidirectional_cycle(7, 4)
        family = all_shortest_paths_brute(g)
        o = all_pairs_distances(g)
        for size in range(1, 8):
            expected = all(
                any(set(sub) <= set(p) for p in family) for sub in combinations(range(7), size)
            )
            assert verify_local_precondition(g, o, size)[0] == expected


class TestSingleCover:
    def test_cycle_has_no_single_cover(self):
        g = build_bidirectional_cycle(16, 11)
        assert verify_no_single_cover(g, all_pairs_distances(g), range(16)) == (True, None)

    def test_witness_when_covered(self, chain3):
        ok, witness = verify_no_single_cover(chain3, all_pairs_distances(chain3), {0, 2})
        assert not ok and witness == Path([0, 1, 2])

    def test_empty_target(self, chain3):
        with pytest.raises(ValueError):
            verify_no_single_cover(chain3, all_pairs_distances(chain3), ())

    def test_enumeration_matches_brute_force(self):
        g = build_bidirectional_cycle(6, 4)
        got = sorted(p.nodes for p in all_shortest_paths(g, all_pairs_distances(g)))
        assert got == sorted(all_shortest_paths_brute(g))


class TestRoundtripPair:
    def test_pair(self):
        W = frozenset(range(4))
        assert is_roundtrip_pair(Path([0, 1, 2]), Path([2, 3, 0]), W)
        assert not is_roundtrip_pair(Path([0, 1, 2]), Path([1, 2, 3]), W)
        assert find_roundtrip_pair([Path([1, 2, 3]), Path([0, 1, 2]), Path([2, 3, 0])], W) == (
            Path([0, 1, 2]),
            Path([2, 3, 0]),
        )
        assert find_roundtrip_pair([Path([0, 1])], W) is None


class TestReports:
    def test_bidirectional_cycle_report(self):
        report = verify_bidirectional_cycle(16, 11)
        assert report.confirmed
        assert report.to_text() == (FIXTURES / "bidirectional_cycle_16_11.txt").read_text()
        P, Q = report.roundtrip_witness
        family = set(all_shortest_paths_brute(build_bidirectional_cycle(16, 11)))
        assert P.nodes in family and Q.nodes in family

    def test_report_is_stable(self):
        assert verify_bidirectional_cycle(8, 5).to_text() == verify_bidirectional_cycle(8, 5).to_text()

    def test_smaller_set_size_still_confirms(self):
        report = verify_bidirectional_cycle(16, 11, set_size=3)
        assert report.precondition_size == 3 and report.confirmed

    def test_directed_cycle_report(self):
        inst = build_appendixB_instance(8)
        report = verify_appendixB(inst)
        assert report.confirmed
        assert report.to_text() == (FIXTURES / "directed_cycle_instance_8.txt").read_text()
        assert set(report.congestion.values()) == {7}
        assert report.max_congestion == tuple(range(8))

    def test_directed_cycle_solution_is_unique(self):
        inst = build_appendixB_instance(8)
        solutions = spc_solutions_brute(inst.graph, inst.pairs, inst.c)
        assert len(solutions) == 1
        assert tuple(p.nodes for p in brute_force_spc(inst).paths) == solutions[0]
        assert not any(set(range(8)) <= set(p) for p in solutions[0])

    def test_directed_cycle_with_full_budget(self):
        report = verify_appendixB(build_appendixB_instance(8).with_c(8))
        assert report.max_congestion == ()
        assert report.single_cover_exists
