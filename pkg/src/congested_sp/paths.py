"""Paths, path collections, subpath swaps and node-congestion accounting."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

from .errors import CongestionViolation, FormatError, SwapError

if TYPE_CHECKING:
    from .graph import DistanceOracle, Graph


@dataclass(frozen=True)
class Path:
    """A node sequence; occurrence lookup is O(1) through a position index."""

    nodes: tuple
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = tuple(int(x) for x in self.nodes)
        if not nodes:
            raise ValueError("a path has at least one node")
        pos: dict[int, int] = {}
        for i, x in enumerate(nodes):
            pos.setdefault(x, i)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "_pos", pos)

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.nodes)

    def __contains__(self, node: object) -> bool:
        return node in self._pos

    def __getitem__(self, i):
        return self.nodes[i]

    @property
    def first(self) -> int:
        return self.nodes[0]

    @property
    def last(self) -> int:
        return self.nodes[-1]

    def position(self, node: int) -> int:
        try:
            return self._pos[node]
        except KeyError:
            raise SwapError(f"node {node} is not on path {list(self.nodes)}") from None

    def before(self, u: int, v: int) -> bool:
        """True iff both nodes are on the path and ``u`` comes strictly before ``v``."""
        return u in self._pos and v in self._pos and self._pos[u] < self._pos[v]

    def contains_all(self, nodes: Iterable[int]) -> bool:
        return all(x in self._pos for x in nodes)

    def order_of(self, nodes: Iterable[int]) -> tuple:
        """The given nodes (all on the path) sorted by position."""
        return tuple(sorted(set(nodes), key=self._pos.__getitem__))

    def reversed(self) -> Path:
        return Path(self.nodes[::-1])

    def weight(self, graph: Graph):
        total = 0
        for u, v in zip(self.nodes, self.nodes[1:]):
            w = graph.weight(u, v)
            if w is None:
                raise ValueError(f"no edge {u}->{v}")
            total += w
        return total

    def __str__(self) -> str:
        return " ".join(map(str, self.nodes))


def validate_path(graph: Graph, oracle: DistanceOracle, path: Path) -> bool:
    """True iff ``path`` is a simple shortest path of ``graph``."""
    nodes = path.nodes
    if any(not 0 <= x < graph.node_count for x in nodes):
        return False
    if len(set(nodes)) != len(nodes):
        return False
    total = 0
    for u, v in zip(nodes, nodes[1:]):
        w = graph.weight(u, v)
        if w is None:
            return False
        total += w
    return total == oracle.dist(nodes[0], nodes[-1])


def subpath(path: Path, u: int, v: int) -> Path:
    """The contiguous slice of ``path`` from ``u`` to ``v`` inclusive."""
    i, j = path.position(u), path.position(v)
    if j < i:
        raise SwapError(f"node {v} comes before {u} on the path")
    return Path(path.nodes[i : j + 1])


@dataclass(frozen=True)
class SwapRecord:
    """Exchange of the ``a``..``b`` segments of paths ``p`` and ``q``."""

    p: int
    q: int
    a: int
    b: int

    def __str__(self) -> str:
        return f"swap p={self.p} q={self.q} a={self.a} b={self.b}"

    @classmethod
    def parse(cls, line: str) -> SwapRecord:
        parts = line.split()
        if not parts or parts[0] != "swap" or len(parts) != 5:
            raise FormatError(f"bad swap line: {line!r}")
        fields = {}
        for token, key in zip(parts[1:], "pqab"):
            name, _, value = token.partition("=")
            if name != key or not value.lstrip("-").isdigit():
                raise FormatError(f"bad swap line: {line!r}")
            fields[key] = int(value)
        return cls(**fields)


@dataclass(frozen=True)
class PathCollection:
    """Indexed paths of one graph; terminals are fixed at construction.

    Values are immutable snapshots; rewrites return new collections.
    """

    graph: Graph
    paths: tuple = ()
    terminals: Optional[tuple] = None

    def __post_init__(self) -> None:
        paths = tuple(p if isinstance(p, Path) else Path(p) for p in self.paths)
        object.__setattr__(self, "paths", paths)
        terms = tuple((p.first, p.last) for p in paths)
        if self.terminals is None:
            object.__setattr__(self, "terminals", terms)
        elif tuple(map(tuple, self.terminals)) != terms:
            raise ValueError("path endpoints do not match the recorded terminals")
        else:
            object.__setattr__(self, "terminals", terms)

    def __len__(self) -> int:
        return len(self.paths)

    def __getitem__(self, i: int) -> Path:
        return self.paths[i]

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)

    def with_path(self, path: Path) -> tuple[PathCollection, int]:
        """Append ``path``; returns the new collection and the new index."""
        return PathCollection(self.graph, self.paths + (path,)), len(self.paths)

    def replace(self, index: int, path: Path) -> PathCollection:
        paths = list(self.paths)
        paths[index] = path
        return PathCollection(self.graph, tuple(paths), self.terminals)

    def is_valid(self, oracle: DistanceOracle) -> bool:
        return all(validate_path(self.graph, oracle, p) for p in self.paths)

    def node_lists(self) -> list[list[int]]:
        return [list(p.nodes) for p in self.paths]


def subpath_swap(coll: PathCollection, p: int, q: int, a: int, b: int) -> tuple[PathCollection, SwapRecord]:
    """Exchange the ``a``..``b`` segments of paths ``p`` and ``q``.

    ``a`` must come strictly before ``b`` on path ``p``. On path ``q`` the same
    holds for directed graphs; in an undirected graph ``q`` may traverse the
    segment in the opposite direction, and the exchanged segments are then
    reversed to fit their new host.
    """
    if p == q:
        raise SwapError("cannot swap a path with itself")
    n = len(coll)
    if not (0 <= p < n and 0 <= q < n):
        raise SwapError(f"path index out of range (collection has {n} paths)")
    P, Q = coll[p], coll[q]
    for path, name in ((P, "p"), (Q, "q")):
        if a not in path or b not in path:
            raise SwapError(f"nodes {a} and {b} must both lie on path {name}")
    if a == b or not P.before(a, b):
        raise SwapError(f"node {a} must come strictly before {b} on path p")
    pa, pb = P.position(a), P.position(b)
    qa, qb = Q.position(a), Q.position(b)
    flipped = qb < qa
    if flipped and coll.graph.directed:
        raise SwapError(f"node {a} must come strictly before {b} on path q")
    p_seg = P.nodes[pa : pb + 1]
    if flipped:
        q_seg = Q.nodes[qb : qa + 1]
        new_p = P.nodes[:pa] + q_seg[::-1] + P.nodes[pb + 1 :]
        new_q = Q.nodes[:qb] + p_seg[::-1] + Q.nodes[qa + 1 :]
    else:
        q_seg = Q.nodes[qa : qb + 1]
        new_p = P.nodes[:pa] + q_seg + P.nodes[pb + 1 :]
        new_q = Q.nodes[:qa] + p_seg + Q.nodes[qb + 1 :]
    paths = list(coll.paths)
    paths[p], paths[q] = Path(new_p), Path(new_q)
    return PathCollection(coll.graph, tuple(paths), coll.terminals), SwapRecord(p, q, a, b)


def apply_swap(coll: PathCollection, record: SwapRecord) -> PathCollection:
    return subpath_swap(coll, record.p, record.q, record.a, record.b)[0]


def congestion_map(coll: PathCollection | Sequence[Path]) -> Counter:
    """Number of paths containing each node (nodes on no path are absent)."""
    counts: Counter = Counter()
    for path in coll:
        counts.update(set(path.nodes))
    return counts


def max_congestion_nodes(coll: PathCollection | Sequence[Path], c: int) -> frozenset:
    """Nodes lying on exactly ``c`` paths; raises if any node exceeds ``c``."""
    if c < 1:
        raise ValueError("congestion budget must be at least 1")
    counts = congestion_map(coll)
    for node in sorted(counts):
        if counts[node] > c:
            raise CongestionViolation(node, counts[node], c)
    return frozenset(x for x, k in counts.items() if k == c)


@dataclass(frozen=True)
class AddRecord:
    """Materialization of a fresh path appended at ``index``.

    Emitted when a supplier draws a new copy from the implicit family of all
    shortest paths; replaying it appends the same path.
    """

    index: int
    path: Path

    def __str__(self) -> str:
        return f"add i={self.index} path={','.join(map(str, self.path.nodes))}"

    @classmethod
    def parse(cls, line: str) -> AddRecord:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "add":
            raise FormatError(f"bad add line: {line!r}")
        idx, nodes = parts[1].partition("="), parts[2].partition("=")
        if idx[0] != "i" or nodes[0] != "path":
            raise FormatError(f"bad add line: {line!r}")
        try:
            return cls(int(idx[2]), Path(int(x) for x in nodes[2].split(",")))
        except ValueError:
            raise FormatError(f"bad add line: {line!r}") from None


def replay(coll: PathCollection, records: Iterable) -> PathCollection:
    """Apply swap and add records in order."""
    for rec in records:
        if isinstance(rec, AddRecord):
            if rec.index != len(coll):
                raise FormatError(f"add record for index {rec.index}, collection has {len(coll)} paths")
            coll, _ = coll.with_path(rec.path)
        else:
            coll = apply_swap(coll, rec)
    return coll


def render_trace(records: Iterable) -> str:
    return "".join(f"{r}\n" for r in records)


def parse_trace(text: str) -> list:
    """Parse ``swap p=.. q=.. a=.. b=..`` and ``add i=.. path=..`` lines."""
    out: list = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("add"):
            out.append(AddRecord.parse(line))
        else:
            out.append(SwapRecord.parse(line))
    return out
