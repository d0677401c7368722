"""Answers "which shortest paths contain these nodes (in this order)" for the rewrite procedures.

Two modes:

* ``collection``: exact over the paths currently stored in a collection; the
  lowest-index qualifying path wins.
* ``theorem``: the implicit family of every shortest path of the graph.
  Existence and universal questions are decided by the ordering predicate;
  witnesses come first from stored paths, otherwise a fresh path is
  materialized and appended (recorded as an ``add`` trace line).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import BudgetExceeded, SupplierExhausted
from .graph import DistanceOracle, Graph, all_pairs_distances, path_through_ordering, shortest_path_orderings
from .paths import AddRecord, Path, PathCollection

COLLECTION = "collection"
THEOREM = "theorem"


def _is_subsequence(order: Sequence[int], seq: Sequence[int]) -> bool:
    it = iter(seq)
    return all(x in it for x in order)


@dataclass
class Supplier:
    graph: Graph
    oracle: DistanceOracle
    mode: str = COLLECTION
    budget: Optional[int] = None
    queries: int = field(default=0, init=False)

    def __post_init__(self) -> None:
        if self.mode not in (COLLECTION, THEOREM):
            raise ValueError(f"unknown supplier mode {self.mode!r}")

    @classmethod
    def collection(cls, graph: Graph, oracle: Optional[DistanceOracle] = None, budget: Optional[int] = None) -> Supplier:
        return cls(graph, oracle or all_pairs_distances(graph), COLLECTION, budget)

    @classmethod
    def theorem(cls, graph: Graph, oracle: Optional[DistanceOracle] = None, budget: Optional[int] = None) -> Supplier:
        return cls(graph, oracle or all_pairs_distances(graph), THEOREM, budget)

    @property
    def implicit(self) -> bool:
        return self.mode == THEOREM

    def _tick(self) -> None:
        self.queries += 1
        if self.budget is not None and self.queries > self.budget:
            raise BudgetExceeded(f"supplier exceeded {self.budget} queries")

    def orderings(self, coll: PathCollection, nodes: Iterable[int]) -> list[tuple]:
        """The distinct orders in which supplier paths visit ``nodes``."""
        self._tick()
        pool = frozenset(nodes)
        if self.implicit:
            return shortest_path_orderings(self.oracle, pool)
        seen: list[tuple] = []
        for path in coll:
            if path.contains_all(pool):
                order = path.order_of(pool)
                if order not in seen:
                    seen.append(order)
        return seen

    def exists(self, coll: PathCollection, nodes: Iterable[int], order: Sequence[int] = ()) -> bool:
        """Does some supplier path contain ``nodes`` and visit ``order`` in that order?"""
        pool = frozenset(nodes) | frozenset(order)
        return any(_is_subsequence(order, o) for o in self.orderings(coll, pool))

    def all_paths(self, coll: PathCollection, nodes: Iterable[int], pred: Callable[[tuple], bool]) -> bool:
        """Does every supplier path containing ``nodes`` satisfy ``pred`` on its visiting order?

        Raises :class:`SupplierExhausted` when no path contains ``nodes``.
        """
        pool = frozenset(nodes)
        found = self.orderings(coll, pool)
        if not found:
            raise SupplierExhausted(pool)
        return all(pred(o) for o in found)

    def fetch(
        self,
        coll: PathCollection,
        nodes: Iterable[int],
        order: Sequence[int] = (),
        exclude: Iterable[int] = (),
    ) -> tuple[PathCollection, int, list]:
        """Index of a path containing ``nodes`` that visits ``order`` in order.

        Stored paths are scanned first (lowest index not in ``exclude``). In
        theorem mode a missing witness is materialized and appended; the
        returned record list then holds its :class:`AddRecord`.
        """
        self._tick()
        pool = frozenset(nodes) | frozenset(order)
        skip = set(exclude)
        for i, path in enumerate(coll):
            if i in skip or not path.contains_all(pool):
                continue
            if _is_subsequence(order, path.order_of(pool)):
                return coll, i, []
        if self.implicit:
            for o in shortest_path_orderings(self.oracle, pool):
                if _is_subsequence(order, o):
                    path = path_through_ordering(self.graph, self.oracle, o)
                    coll, idx = coll.with_path(path)
                    return coll, idx, [AddRecord(idx, path)]
        detail = f"in order {list(order)}" if order else ""
        raise SupplierExhausted(pool, detail)

    def materialize(self, coll: PathCollection, path: Path) -> tuple[PathCollection, int, list]:
        """Append an explicit shortest path (theorem mode only)."""
        if not self.implicit:
            raise ValueError("only the theorem-mode supplier can add paths")
        coll, idx = coll.with_path(path)
        return coll, idx, [AddRecord(idx, path)]
