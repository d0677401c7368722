"""Constructors and exhaustive verifiers for the two cycle counterexamples.

* ``build_bidirectional_cycle(n, a)``: clockwise edges of weight 1, reverse
  edges of weight ``a``. Any ``a`` nodes fit on a clockwise arc, yet no
  shortest path visits all ``n`` nodes once ``n - 1 > a``.
* ``build_appendixB_instance(n)``: a directed unit cycle with pairs
  ``(i, i + 3n/4)`` and ``c = 3n/4 + 1``. Its only solution puts every node on
  exactly ``c`` paths, and no single path covers them all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Optional

from .errors import BudgetExceeded, GraphError
from .graph import DistanceOracle, Graph, all_pairs_distances, shortest_path_orderings
from .paths import Path, congestion_map, max_congestion_nodes
from .spc import DEFAULT_BUDGET, SpcInstance, brute_force_spc, enumerate_shortest_paths, solution_from_paths, validate_solution


def build_bidirectional_cycle(n: int, a: int) -> Graph:
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise GraphError("the cycle needs n >= 3 nodes")
    if isinstance(a, bool) or not isinstance(a, int) or a < 1:
        raise GraphError("the reverse weight must be an integer >= 1")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n, 1))
        edges.append(((i + 1) % n, i, a))
    return Graph(True, n, tuple(edges))


def build_appendixB_instance(n: int) -> SpcInstance:
    if isinstance(n, bool) or not isinstance(n, int) or n < 8 or n % 4:
        raise GraphError("n must be a multiple of 4 and at least 8")
    graph = Graph(True, n, tuple((i, (i + 1) % n, 1) for i in range(n)))
    span = 3 * n // 4
    return SpcInstance(graph, tuple((i, (i + span) % n) for i in range(n)), span + 1)


def verify_local_precondition(
    graph: Graph,
    oracle: DistanceOracle,
    set_size: int,
    pool: Optional[Iterable[int]] = None,
    cap: int = DEFAULT_BUDGET,
) -> tuple[bool, Optional[tuple]]:
    """Does every ``set_size``-subset of ``pool`` lie on a common shortest path?

    Subsets larger than the pool shrink to the pool itself. Each subset is
    decided exactly by trying every member as the first node (distance from
    the first node fixes the rest of the order). Returns ``(ok, first failing
    subset)``; raises :class:`BudgetExceeded` when there are more than ``cap``
    subsets.
    """
    if set_size < 1:
        raise ValueError("set_size must be at least 1")
    nodes = sorted(set(graph.nodes if pool is None else pool))
    size = min(set_size, len(nodes))
    if comb(len(nodes), size) > cap:
        raise BudgetExceeded(f"{comb(len(nodes), size)} subsets exceed the cap of {cap}")
    for subset in combinations(nodes, size):
        if not shortest_path_orderings(oracle, subset):
            return False, subset
    return True, None


def all_shortest_paths(graph: Graph, oracle: DistanceOracle, cap: int = DEFAULT_BUDGET) -> list[Path]:
    """Every shortest path between every ordered reachable pair (trivial paths included)."""
    out: list[Path] = []
    for s in graph.nodes:
        for t in graph.nodes:
            if not oracle.reachable(s, t):
                continue
            paths, truncated = enumerate_shortest_paths(graph, oracle, s, t, cap)
            out.extend(paths)
            if truncated or len(out) > cap:
                raise BudgetExceeded(f"more than {cap} shortest paths")
    return out


def verify_no_single_cover(
    graph: Graph, oracle: DistanceOracle, W: Iterable[int], cap: int = DEFAULT_BUDGET
) -> tuple[bool, Optional[Path]]:
    """True iff no shortest path contains all of ``W``; otherwise the first witness found."""
    need = frozenset(W)
    if not need:
        raise ValueError("W is empty")
    for path in all_shortest_paths(graph, oracle, cap):
        if path.contains_all(need):
            return False, path
    return True, None


def _w_ends(path: Path, W: frozenset) -> Optional[tuple[int, int]]:
    hits = [x for x in path if x in W]
    return (hits[0], hits[-1]) if hits else None


def is_roundtrip_pair(P: Path, Q: Path, W: frozenset) -> bool:
    """Do ``P`` and ``Q`` cover ``W`` with swapped first/last target nodes?"""
    if not W <= set(P) | set(Q):
        return False
    ep, eq = _w_ends(P, W), _w_ends(Q, W)
    return ep is not None and eq is not None and eq == (ep[1], ep[0])


def find_roundtrip_pair(
    paths: list[Path], W: Iterable[int]
) -> Optional[tuple[Path, Path]]:
    """First ``(P, Q)`` among ``paths`` (in index order) forming a roundtrip cover of ``W``."""
    need = frozenset(W)
    for i, P in enumerate(paths):
        for j, Q in enumerate(paths):
            if i != j and is_roundtrip_pair(P, Q, need):
                return P, Q
    return None


def _fmt_nodes(nodes) -> str:
    return "-" if nodes is None else " ".join(map(str, nodes))


@dataclass
class CounterexampleReport:
    """Outcome of an exhaustive counterexample check; ``to_text`` has a fixed field order."""

    name: str
    node_count: int
    precondition_size: Optional[int] = None
    precondition_holds: Optional[bool] = None
    precondition_failure: Optional[tuple] = None
    single_cover_exists: bool = False
    single_cover_witness: Optional[Path] = None
    roundtrip_cover_exists: bool = False
    roundtrip_witness: Optional[tuple] = None
    k: Optional[int] = None
    c: Optional[int] = None
    unique_solution: Optional[bool] = None
    solution_valid: Optional[bool] = None
    solution: list = field(default_factory=list)
    congestion: dict = field(default_factory=dict)
    max_congestion: tuple = ()
    two_path_cover: Optional[tuple] = None

    def to_text(self) -> str:
        out = [f"name: {self.name}", f"nodes: {self.node_count}"]
        if self.precondition_size is not None:
            out.append(f"precondition_size: {self.precondition_size}")
            out.append(f"precondition_holds: {str(self.precondition_holds).lower()}")
            out.append(f"precondition_failure: {_fmt_nodes(self.precondition_failure)}")
        if self.k is not None:
            out.append(f"k: {self.k}")
            out.append(f"c: {self.c}")
            out.append(f"unique_solution: {str(self.unique_solution).lower()}")
            out.append(f"solution_valid: {str(self.solution_valid).lower()}")
            for i, p in enumerate(self.solution):
                out.append(f"path {i}: {p}")
            out.append("congestion: " + " ".join(f"{x}:{n}" for x, n in sorted(self.congestion.items())))
            out.append(f"max_congestion_nodes: {_fmt_nodes(self.max_congestion) if self.max_congestion else '-'}")
        out.append(f"single_cover_exists: {str(self.single_cover_exists).lower()}")
        out.append(f"single_cover_witness: {_fmt_nodes(self.single_cover_witness)}")
        if self.k is not None:
            out.append(f"two_path_cover: {_fmt_nodes(self.two_path_cover)}")
        else:
            out.append(f"roundtrip_cover_exists: {str(self.roundtrip_cover_exists).lower()}")
            if self.roundtrip_witness is None:
                out.append("roundtrip_witness: -")
            else:
                P, Q = self.roundtrip_witness
                out.append(f"roundtrip_witness: {P} | {Q}")
        return "\n".join(out) + "\n"

    @property
    def confirmed(self) -> bool:
        """Does the report show the counterexample behaviour?"""
        if self.k is not None:
            return bool(
                self.unique_solution
                and self.solution_valid
                and not self.single_cover_exists
                and self.two_path_cover is not None
            )
        return bool(self.precondition_holds and not self.single_cover_exists and self.roundtrip_cover_exists)


def verify_bidirectional_cycle(n: int = 16, a: int = 11, set_size: Optional[int] = None) -> CounterexampleReport:
    """Exhaustive check of the bidirectional cycle with ``W`` = all nodes."""
    graph = build_bidirectional_cycle(n, a)
    oracle = all_pairs_distances(graph)
    size = a if set_size is None else set_size
    ok, failure = verify_local_precondition(graph, oracle, size)
    W = frozenset(graph.nodes)
    none, witness = verify_no_single_cover(graph, oracle, W)
    pair = find_roundtrip_pair(all_shortest_paths(graph, oracle), W)
    return CounterexampleReport(
        name=f"bidirectional-cycle n={n} a={a}",
        node_count=n,
        precondition_size=size,
        precondition_holds=ok,
        precondition_failure=failure,
        single_cover_exists=not none,
        single_cover_witness=witness,
        roundtrip_cover_exists=pair is not None,
        roundtrip_witness=pair,
    )


def verify_appendixB(inst: SpcInstance) -> CounterexampleReport:
    """Exhaustive check of the directed-cycle SPC instance.

    Solution uniqueness follows from every pair having exactly one shortest
    path; the assembled solution is cross-checked against the brute-force
    solver.
    """
    graph, oracle = inst.graph, inst.oracle
    per_pair = [enumerate_shortest_paths(graph, oracle, s, t)[0] for s, t in inst.pairs]
    unique = all(len(ps) == 1 for ps in per_pair)
    sol = solution_from_paths(inst, (ps[0] for ps in per_pair))
    solved = brute_force_spc(inst)
    valid = not validate_solution(inst, sol) and solved is not None and solved.paths == sol.paths
    counts = congestion_map(sol.collection)
    W = frozenset(max_congestion_nodes(sol.collection, inst.c)) if valid else frozenset()
    single = next((p for p in sol.paths if p.contains_all(W)), None)
    two = None
    for i, j in combinations(range(inst.k), 2):
        if W <= set(sol.paths[i]) | set(sol.paths[j]):
            two = (i, j)
            break
    return CounterexampleReport(
        name=f"appendix-b n={graph.node_count}",
        node_count=graph.node_count,
        single_cover_exists=single is not None,
        single_cover_witness=single,
        k=inst.k,
        c=inst.c,
        unique_solution=unique,
        solution_valid=valid,
        solution=list(sol.paths),
        congestion={x: counts.get(x, 0) for x in graph.nodes},
        max_congestion=tuple(sorted(W)),
        two_path_cover=two,
    )
