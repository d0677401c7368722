"""Eight pairs on a directed 8-cycle with budget 7.

The instance has slack d = 1 and exactly one solution. Every node is at
maximum congestion, yet no solution path visits them all, so the key
property fails once the graph is directed and cyclic.
"""

from __future__ import annotations

from congested_sp import brute_force_spc, congestion_map
from congested_sp.counterexamples import build_appendixB_instance, verify_appendixB


def main() -> None:
    inst = build_appendixB_instance(8)
    print(f"k={inst.k} c={inst.c} d={inst.d}")
    for i, (s, t) in enumerate(inst.pairs):
        print(f"  pair {i}: {s} -> {t}")

    sol = brute_force_spc(inst)
    print("\nsolution found by exhaustive search:")
    for i, p in enumerate(sol.paths):
        print(f"  path {i}: {' '.join(map(str, p))}")
    print("congestion:", dict(sorted(congestion_map(sol.collection).items())))

    print("\nfull report:")
    print(verify_appendixB(inst).to_text(), end="")


if __name__ == "__main__":
    main()
