"""A 16-node cycle with forward weight 1 and backward weight 11.

Any 11 nodes lie on a common shortest path, but all 16 do not. The
roundtrip procedure therefore ends with two paths whose union covers the
cycle and which meet end to end.
"""

from __future__ import annotations

from congested_sp import PathCollection, Supplier, TwoPaths, all_pairs_distances, check_cover, roundtrip_cover
from congested_sp.counterexamples import build_bidirectional_cycle, verify_local_precondition, verify_no_single_cover


def main() -> None:
    g = build_bidirectional_cycle(16, 11)
    o = all_pairs_distances(g)
    W = frozenset(range(16))

    print("every 11-subset on one shortest path:", verify_local_precondition(g, o, 11)[0])
    print("no shortest path through all 16 nodes:", verify_no_single_cover(g, o, W)[0])

    coll, outcome, trace = roundtrip_cover(PathCollection(g), W, Supplier.theorem(g, o))
    print("\ncase log:")
    for line in trace.case_log:
        print(" ", line)
    print("\noutcome:", outcome)
    if isinstance(outcome, TwoPaths):
        for idx in (outcome.index, outcome.other):
            print(f"  path {idx}: {' '.join(map(str, coll[idx]))}")
    print("cover problems:", check_cover(coll, W, outcome) or "none")


if __name__ == "__main__":
    main()
