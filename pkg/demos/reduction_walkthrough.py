"""Solving congested shortest paths through node-disjoint path calls.

With budget c each node is split into c copies, which turns congestion c
into disjointness. For k > m (m = 4d undirected) only m-subsets of pairs
go through the disjoint-paths solver; the rest ride on canonical paths.
"""

from __future__ import annotations

from congested_sp import SpcInstance, brute_force_spc, congestion_blowup, spc_via_dsp_reduction
from congested_sp.campaigns import random_graph
from congested_sp.reduction import subset_size


def main() -> None:
    g = random_graph(3, 6, directed=False, edge_prob=0.5, wmin=1, wmax=3)
    inst = SpcInstance(g, ((0, 5), (1, 4), (2, 3), (0, 3), (5, 1)), 4)
    print(f"k={inst.k} c={inst.c} d={inst.d} subset size m={subset_size(inst)}")

    mapping = congestion_blowup(SpcInstance(g, inst.pairs[:2], 2))
    if mapping.infeasible:
        print("blow-up of the first two pairs at c=2:", mapping.infeasible_reason)
    else:
        print(f"blow-up of the first two pairs at c=2: {mapping.blown.graph.node_count} nodes,"
              f" pairs {mapping.blown.pairs}")

    via = spc_via_dsp_reduction(inst)
    direct = brute_force_spc(inst)
    print("\nreduction answer:", "infeasible" if via is None else "solved")
    if via is not None:
        for i, p in enumerate(via.paths):
            print(f"  path {i}: {' '.join(map(str, p))}")
    print("agrees with exhaustive search:", (via is None) == (direct is None))


if __name__ == "__main__":
    main()
