"""Weighted graphs, exact all-pairs distances and shortest-path ordering predicates.

Weights are exact (``int`` or :class:`fractions.Fraction`); ordering predicates
rely on exact equality of distance sums, so floats are rejected outright.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import FormatError, GraphError, OrderingError, UnreachableError
from .paths import Path

Weight = Union[int, Fraction]


def _check_weight(w) -> Weight:
    if isinstance(w, bool) or not isinstance(w, (int, Fraction)):
        raise GraphError(f"edge weight must be an exact int or Fraction, got {w!r}")
    if w <= 0:
        raise GraphError(f"edge weight must be strictly positive, got {w}")
    return w


@dataclass(frozen=True)
class Graph:
    """Directed or undirected graph on nodes ``0..node_count-1``.

    Undirected edges are listed once. Self-loops and parallel edges are
    construction errors.
    """

    directed: bool
    node_count: int
    edges: tuple = ()
    _weights: dict = field(init=False, repr=False, compare=False)
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.node_count, bool) or not isinstance(self.node_count, int):
            raise GraphError("node_count must be an int")
        if self.node_count < 1:
            raise GraphError("node_count must be positive")
        edges = tuple((int(u), int(v), _check_weight(w)) for u, v, w in self.edges)
        weights: dict[tuple[int, int], Weight] = {}
        for u, v, w in edges:
            for x in (u, v):
                if not 0 <= x < self.node_count:
                    raise GraphError(f"node id {x} out of range [0, {self.node_count})")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            keys = [(u, v)] if self.directed else [(u, v), (v, u)]
            for key in keys:
                if key in weights:
                    raise GraphError(f"parallel edge {key[0]}-{key[1]}")
                weights[key] = w
        adj: list[list[tuple[int, Weight]]] = [[] for _ in range(self.node_count)]
        for (u, v), w in weights.items():
            adj[u].append((v, w))
        for row in adj:
            row.sort(key=lambda item: item[0])
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_adj", tuple(tuple(row) for row in adj))

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def neighbors(self, u: int) -> tuple:
        """Out-neighbours of ``u`` as ``(node, weight)`` pairs, sorted by node id."""
        return self._adj[u]

    def weight(self, u: int, v: int) -> Optional[Weight]:
        return self._weights.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._weights

    def topological_order(self) -> Optional[list[int]]:
        """Smallest-id-first topological order, or None if a directed cycle exists.

        Undirected graphs with at least one edge have no topological order.
        """
        if not self.directed:
            return None if self.edges else list(self.nodes)
        indeg = [0] * self.node_count
        for _, v, _ in self.edges:
            indeg[v] += 1
        ready = [u for u in self.nodes if indeg[u] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v, _ in self._adj[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        return order if len(order) == self.node_count else None

    def is_dag(self) -> bool:
        return self.directed and self.topological_order() is not None


def parse_graph(text: str) -> Graph:
    """Parse ``directed N M`` / ``undirected N M`` followed by M lines ``u v w``.

    Blank lines and ``#`` comments are ignored.
    """
    lines = _content_lines(text)
    try:
        graph, rest = parse_graph_lines(lines)
    except IndexError:
        raise FormatError("graph text ended early") from None
    if rest:
        raise FormatError(f"unexpected trailing line: {rest[0]!r}")
    return graph


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_graph_lines(lines: list[str]) -> tuple[Graph, list[str]]:
    """Parse a graph block from the head of ``lines``; return it and the remainder."""
    head = lines[0].split()
    if len(head) != 3 or head[0] not in ("directed", "undirected"):
        raise FormatError(f"bad graph header: {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError(f"bad graph header: {lines[0]!r}") from None
    if m < 0 or len(lines) < m + 1:
        raise FormatError(f"graph header announces {m} edges, found {len(lines) - 1}")
    edges = []
    for line in lines[1 : m + 1]:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"bad edge line: {line!r}")
        try:
            u, v, w = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"bad edge line: {line!r}") from None
        edges.append((u, v, w))
    try:
        graph = Graph(head[0] == "directed", n, tuple(edges))
    except GraphError as exc:
        raise FormatError(str(exc)) from exc
    return graph, lines[m + 1 :]


def render_graph(graph: Graph) -> str:
    kind = "directed" if graph.directed else "undirected"
    out = [f"{kind} {graph.node_count} {len(graph.edges)}"]
    for u, v, w in graph.edges:
        if isinstance(w, Fraction) and w.denominator != 1:
            raise FormatError("the text format only carries integer weights")
        out.append(f"{u} {v} {int(w)}")
    return "\n".join(out) + "\n"


class DistanceOracle:
    """All-pairs shortest distances; ``None`` marks an unreachable pair."""

    def __init__(self, table: Sequence[Sequence[Optional[Weight]]]) -> None:
        self._table = tuple(tuple(row) for row in table)

    @property
    def node_count(self) -> int:
        return len(self._table)

    def dist(self, u: int, v: int) -> Optional[Weight]:
        return self._table[u][v]

    def reachable(self, u: int, v: int) -> bool:
        return self._table[u][v] is not None

    def rows(self) -> tuple:
        return self._table


def _dijkstra(graph: Graph, source: int) -> list[Optional[Weight]]:
    dist: list[Optional[Weight]] = [None] * graph.node_count
    dist[source] = 0
    heap = [(0, source)]
    done = [False] * graph.node_count
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in graph.neighbors(u):
            cand = d + w
            if dist[v] is None or cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, v))
    return dist


def all_pairs_distances(graph: Graph) -> DistanceOracle:
    """Exact shortest distances by one Dijkstra run per source."""
    return DistanceOracle([_dijkstra(graph, s) for s in graph.nodes])


def on_shortest_path(oracle: DistanceOracle, u: int, w: int, v: int) -> bool:
    """True iff ``w`` lies on some shortest ``u``-to-``v`` path."""
    d_uw, d_wv, d_uv = oracle.dist(u, w), oracle.dist(w, v), oracle.dist(u, v)
    if d_uw is None or d_wv is None:
        return False
    return d_uw + d_wv == d_uv


def _ordering_holds(oracle: DistanceOracle, seq: Sequence[int]) -> bool:
    total = 0
    for x, y in zip(seq, seq[1:]):
        d = oracle.dist(x, y)
        if d is None:
            return False
        total += d
    return total == oracle.dist(seq[0], seq[-1])


def is_shortest_path_ordering(oracle: DistanceOracle, seq: Sequence[int]) -> bool:
    """True iff some shortest path visits ``seq`` in this order.

    With positive weights a walk whose weight equals the endpoint distance
    cannot repeat a node, so the telescoping sum decides the question.
    """
    if not seq:
        raise OrderingError("empty node sequence")
    if len(set(seq)) != len(seq):
        raise OrderingError(f"duplicate nodes in {list(seq)}")
    return _ordering_holds(oracle, seq)


def shortest_path_orderings(oracle: DistanceOracle, nodes: Iterable[int]) -> list[tuple[int, ...]]:
    """Every order in which some shortest path can visit all of ``nodes``.

    Along a shortest path the distance from its first node strictly grows, so
    the first node fixes the whole order; at most ``len(nodes)`` results,
    listed by increasing first-node id.
    """
    pool = sorted(set(nodes))
    if len(pool) <= 1:
        return [tuple(pool)]
    found = []
    for first in pool:
        row = oracle.rows()[first]
        if any(row[x] is None for x in pool):
            continue
        seq = sorted(pool, key=lambda x: row[x])
        if any(row[x] == row[y] for x, y in zip(seq, seq[1:])):
            continue
        if _ordering_holds(oracle, seq):
            found.append(tuple(seq))
    return found


def has_shortest_path_through(oracle: DistanceOracle, nodes: Iterable[int]) -> bool:
    return bool(shortest_path_orderings(oracle, nodes))


def _canonical_nodes(graph: Graph, oracle: DistanceOracle, u: int, v: int) -> list[int]:
    total = oracle.dist(u, v)
    if total is None:
        raise UnreachableError(f"node {v} is unreachable from {u}")
    out = [u]
    cur = u
    while cur != v:
        rest = oracle.dist(cur, v)
        for x, w in graph.neighbors(cur):
            dx = oracle.dist(x, v)
            if dx is not None and w + dx == rest:
                cur = x
                break
        out.append(cur)
    return out


def canonical_shortest_path(graph: Graph, oracle: DistanceOracle, u: int, v: int) -> Path:
    """Deterministic shortest ``u``-``v`` path: smallest next node id at every step."""
    return Path(_canonical_nodes(graph, oracle, u, v))


def path_through_ordering(graph: Graph, oracle: DistanceOracle, seq: Sequence[int]) -> Path:
    """A shortest path visiting ``seq`` in order, joined from canonical segments."""
    if not is_shortest_path_ordering(oracle, seq):
        raise OrderingError(f"{list(seq)} is not a shortest-path ordering")
    nodes = [seq[0]]
    for x, y in zip(seq, seq[1:]):
        nodes.extend(_canonical_nodes(graph, oracle, x, y)[1:])
    return Path(nodes)

