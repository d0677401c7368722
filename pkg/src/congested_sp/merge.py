"""Single-path merges for DAGs and undirected graphs by iterated subpath swaps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import StructuralInconsistency, UnsupportedGraph
from .paths import PathCollection, SwapRecord, render_trace, subpath_swap
from .supplier import Supplier


@dataclass
class MergeTrace:
    """Swap and add records in application order, plus coverage snapshots.

    ``covered[i]`` is the set of target nodes certified on the working path
    after the i-th recorded step (``covered[0]`` is the base path).
    """

    records: list = field(default_factory=list)
    covered: list = field(default_factory=list)
    case_log: list = field(default_factory=list)

    @property
    def swaps(self) -> list[SwapRecord]:
        return [r for r in self.records if isinstance(r, SwapRecord)]

    def extend(self, other: MergeTrace) -> None:
        self.records.extend(other.records)
        self.covered.extend(other.covered)
        self.case_log.extend(other.case_log)

    def render(self) -> str:
        return render_trace(self.records)


def _require_nonempty(W: Iterable[int]) -> list[int]:
    nodes = sorted(set(W))
    if not nodes:
        raise ValueError("target node set W is empty")
    return nodes


def merge_dag(coll: PathCollection, W: Iterable[int], supplier: Supplier) -> tuple[PathCollection, int, MergeTrace]:
    """Grow one path through every node of ``W`` in topological order.

    Needs a supplier path through every 3-subset of ``W``; raises
    :class:`SupplierExhausted` naming the subset otherwise.
    """
    graph = coll.graph
    topo = graph.topological_order() if graph.directed else None
    if topo is None:
        raise UnsupportedGraph("merge_dag needs a directed acyclic graph")
    rank = {x: i for i, x in enumerate(topo)}
    order = sorted(_require_nonempty(W), key=rank.__getitem__)
    a, b = order[0], order[-1]
    trace = MergeTrace()
    coll, p, recs = supplier.fetch(coll, {a, b}, (a, b) if a != b else ())
    trace.records.extend(recs)
    certified = {a, b}
    trace.covered.append(frozenset(certified))
    prev = a
    for v in order[1:-1]:
        if v not in coll[p]:
            coll, q, recs = supplier.fetch(coll, {prev, v, b}, (prev, v, b), exclude=(p,))
            trace.records.extend(recs)
            coll, rec = subpath_swap(coll, p, q, prev, b)
            trace.records.append(rec)
            if v not in coll[p]:
                raise StructuralInconsistency(f"swap on ({prev},{b}) did not bring {v} onto the working path")
        certified.add(v)
        trace.covered.append(frozenset(certified))
        prev = v
    return coll, p, trace


def farthest_pair(oracle, nodes: list[int]) -> tuple[int, int]:
    """The pair maximizing distance; ties go to the lexicographically smallest pair."""
    best = (nodes[0], nodes[0])
    best_d = 0
    for i, x in enumerate(nodes):
        for y in nodes[i + 1 :]:
            d = oracle.dist(x, y)
            if d is not None and d > best_d:
                best, best_d = (x, y), d
    return best


def merge_undirected(
    coll: PathCollection, W: Iterable[int], supplier: Supplier
) -> tuple[PathCollection, int, MergeTrace]:
    """Grow one path through ``a, v_1, ..., b`` ordered by distance from ``a``.

    ``a`` and ``b`` are the farthest pair of ``W``. Needs a supplier path
    through every 4-subset of ``W``.
    """
    graph = coll.graph
    if graph.directed:
        raise UnsupportedGraph("merge_undirected needs an undirected graph")
    oracle = supplier.oracle
    nodes = _require_nonempty(W)
    a, b = farthest_pair(oracle, nodes)
    mids = sorted((x for x in nodes if x not in (a, b)), key=lambda x: (oracle.dist(a, x), x))
    trace = MergeTrace()
    base = {a, b} | set(mids[:1])
    coll, p, recs = supplier.fetch(coll, base)
    trace.records.extend(recs)
    dists = [oracle.dist(a, x) for x in mids]
    for x, y, dx, dy in zip(mids, mids[1:], dists, dists[1:]):
        if dx == dy:
            raise StructuralInconsistency(f"nodes {x} and {y} are equidistant from {a}")
    certified = set(base)
    trace.covered.append(frozenset(certified))
    for prev, v in zip(mids, mids[1:]):
        if v not in coll[p]:
            coll, q, recs = supplier.fetch(coll, {a, b, prev, v}, exclude=(p,))
            trace.records.extend(recs)
            P = coll[p]
            lo, hi = (prev, b) if P.before(prev, b) else (b, prev)
            coll, rec = subpath_swap(coll, p, q, lo, hi)
            trace.records.append(rec)
            if v not in coll[p]:
                raise StructuralInconsistency(f"swap on ({prev},{b}) did not bring {v} onto the working path")
        certified.add(v)
        trace.covered.append(frozenset(certified))
    return coll, p, trace
