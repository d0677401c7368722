"""Subpath swaps pulling every target node onto one path.

Two shortest 0 -> 4 paths on an undirected graph split at node 2: one
goes through 3, the other through 6. The targets {0, 1, 3, 4} are covered
only by their union. One swap on the segment 1..4 fixes that without
changing any node's congestion.
"""

from __future__ import annotations

from congested_sp import Graph, PathCollection, Supplier, congestion_map, merge_undirected, replay


def main() -> None:
    edges = ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (2, 6, 1), (6, 4, 1), (4, 5, 1))
    g = Graph(False, 7, edges)
    start = PathCollection(g, ([0, 1, 2, 6, 4], [0, 1, 2, 3, 4]))
    W = {0, 1, 3, 4}

    print("before:")
    for i, p in enumerate(start):
        print(f"  path {i}: {' '.join(map(str, p))}")
    out, p, trace = merge_undirected(start, W, Supplier.collection(g))

    print("\ntrace:")
    print(trace.render(), end="")
    print("\nafter:")
    for i, q in enumerate(out):
        print(f"  path {i}: {' '.join(map(str, q))}")
    print(f"\npath {p} covers W: {W <= set(out[p])}")
    print("congestion unchanged:", congestion_map(start) == congestion_map(out))
    print("trace replays:", replay(start, trace.records) == out)


if __name__ == "__main__":
    main()
