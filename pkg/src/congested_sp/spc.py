"""(k,c)-SPC instances, solution validation and exhaustive oracles."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path as FsPath
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, FormatError, GraphError, UnreachableError
from .graph import DistanceOracle, Graph, _content_lines, all_pairs_distances, parse_graph_lines, render_graph
from .paths import Path, PathCollection, congestion_map, validate_path

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class SpcInstance:
    """Route ``pairs`` along shortest paths with every node on at most ``c`` of them."""

    graph: Graph
    pairs: tuple
    c: int

    def __post_init__(self) -> None:
        pairs = tuple((int(s), int(t)) for s, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise GraphError("an instance needs at least one terminal pair")
        if not 1 <= self.c <= len(pairs):
            raise GraphError(f"congestion budget c={self.c} must lie in [1, k={len(pairs)}]")
        for s, t in pairs:
            for x in (s, t):
                if not 0 <= x < self.graph.node_count:
                    raise GraphError(f"terminal {x} out of range")
            if not self.oracle.reachable(s, t):
                raise UnreachableError(f"terminal {t} is unreachable from {s}")

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def d(self) -> int:
        return self.k - self.c

    @cached_property
    def oracle(self) -> DistanceOracle:
        return all_pairs_distances(self.graph)

    def with_c(self, c: int) -> SpcInstance:
        return SpcInstance(self.graph, self.pairs, c)


@dataclass(frozen=True)
class SpcSolution:
    collection: PathCollection

    @property
    def paths(self) -> tuple:
        return self.collection.paths


@dataclass(frozen=True)
class Violation:
    kind: str  # "count", "terminal", "not-shortest" or "congestion"
    where: int  # path index, or node id for congestion
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.detail}"


def solution_from_paths(inst: SpcInstance, paths: Iterable) -> SpcSolution:
    return SpcSolution(PathCollection(inst.graph, tuple(p if isinstance(p, Path) else Path(p) for p in paths)))


def validate_solution(inst: SpcInstance, sol: SpcSolution) -> list[Violation]:
    """Every violated solution invariant; an empty list means the solution is valid."""
    out: list[Violation] = []
    paths = sol.paths
    if len(paths) != inst.k:
        return [Violation("count", len(paths), f"expected {inst.k} paths")]
    for i, (path, (s, t)) in enumerate(zip(paths, inst.pairs)):
        if (path.first, path.last) != (s, t):
            out.append(Violation("terminal", i, f"runs {path.first}->{path.last}, pair is {s}->{t}"))
        if not validate_path(inst.graph, inst.oracle, path):
            out.append(Violation("not-shortest", i, f"path {list(path.nodes)} is not a simple shortest path"))
    counts = congestion_map(paths)
    for node in sorted(counts):
        if counts[node] > inst.c:
            out.append(Violation("congestion", node, f"on {counts[node]} paths, budget {inst.c}"))
    return out


def shortest_path_dag(graph: Graph, oracle: DistanceOracle, s: int, t: int) -> list[list[int]]:
    """Successor lists of the ``s``-``t`` shortest-path DAG, sorted by node id."""
    total = oracle.dist(s, t)
    if total is None:
        raise UnreachableError(f"node {t} is unreachable from {s}")
    succ: list[list[int]] = [[] for _ in graph.nodes]
    for u in graph.nodes:
        du = oracle.dist(s, u)
        if du is None:
            continue
        for v, w in graph.neighbors(u):
            dv = oracle.dist(v, t)
            if dv is not None and du + w + dv == total:
                succ[u].append(v)
    return succ


def enumerate_shortest_paths(
    graph: Graph, oracle: DistanceOracle, s: int, t: int, cap: int = DEFAULT_BUDGET
) -> tuple[list[Path], bool]:
    """All shortest ``s``-``t`` paths in lexicographic order, at most ``cap`` of them.

    Returns ``(paths, truncated)``; ``truncated`` is set when more paths exist.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    succ = shortest_path_dag(graph, oracle, s, t)
    out: list[Path] = []
    stack = [s]

    def walk(u: int) -> bool:
        if u == t:
            if len(out) == cap:
                return False
            out.append(Path(stack))
            return True
        for v in succ[u]:
            stack.append(v)
            ok = walk(v)
            stack.pop()
            if not ok:
                return False
        return True

    complete = walk(s)
    return out, not complete


def brute_force_spc(inst: SpcInstance, budget: int = DEFAULT_BUDGET) -> Optional[SpcSolution]:
    """Lexicographically first feasible assignment, or None when none exists.

    Searches the product of per-pair shortest-path lists with congestion
    pruning. Raises :class:`BudgetExceeded` when either the path lists or the
    number of search expansions exceed ``budget``.
    """
    choices = []
    for s, t in inst.pairs:
        paths, truncated = enumerate_shortest_paths(inst.graph, inst.oracle, s, t, budget)
        if truncated:
            raise BudgetExceeded(f"more than {budget} shortest paths for pair ({s},{t})")
        choices.append(paths)
    counts = [0] * inst.graph.node_count
    chosen: list[Path] = []
    expansions = 0
    c = inst.c

    def search(i: int) -> bool:
        nonlocal expansions
        if i == len(choices):
            return True
        for path in choices[i]:
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded(f"search exceeded {budget} expansions")
            if any(counts[x] >= c for x in path.nodes):
                continue
            for x in path.nodes:
                counts[x] += 1
            chosen.append(path)
            if search(i + 1):
                return True
            chosen.pop()
            for x in path.nodes:
                counts[x] -= 1
        return False

    if search(0):
        return solution_from_paths(inst, chosen)
    return None


def key_property_check(coll: PathCollection | Sequence[Path], W: Iterable[int], N: int) -> tuple[bool, Optional[tuple]]:
    """Is every ``N``-subset of ``W`` contained in some single path?

    When ``|W| < N`` the whole of ``W`` is the only subset checked. Returns
    ``(ok, first_failing_subset)`` with subsets in lexicographic order.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    pool = sorted(set(W))
    if not pool:
        return True, None
    wanted = set(pool)
    members = [frozenset(x for x in p.nodes if x in wanted) for p in coll]
    size = min(N, len(pool))
    for subset in combinations(pool, size):
        need = frozenset(subset)
        if not any(need <= m for m in members):
            return False, subset
    return True, None


def parse_instance(text: str, base_dir: Optional[str] = None) -> SpcInstance:
    """Parse an instance: an inline graph block or a graph file path, then ``pairs K C`` and K lines ``s t``."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty instance text")
    head = lines[0].split()
    if head[0] in ("directed", "undirected"):
        try:
            graph, rest = parse_graph_lines(lines)
        except IndexError:
            raise FormatError("graph block ended early") from None
    else:
        ref = FsPath(lines[0])
        if base_dir is not None and not ref.is_absolute():
            ref = FsPath(base_dir) / ref
        try:
            graph_text = ref.read_text()
        except OSError as exc:
            raise FormatError(f"cannot read graph file {str(ref)!r}: {exc}") from exc
        glines = _content_lines(graph_text)
        graph, extra = parse_graph_lines(glines)
        if extra:
            raise FormatError(f"unexpected trailing line in graph file: {extra[0]!r}")
        rest = lines[1:]
    if not rest:
        raise FormatError("missing 'pairs K C' line")
    ph = rest[0].split()
    if len(ph) != 3 or ph[0] != "pairs":
        raise FormatError(f"bad pairs header: {rest[0]!r}")
    try:
        k, c = int(ph[1]), int(ph[2])
    except ValueError:
        raise FormatError(f"bad pairs header: {rest[0]!r}") from None
    body = rest[1:]
    if len(body) != k:
        raise FormatError(f"pairs header announces {k} pairs, found {len(body)}")
    pairs = []
    for line in body:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"bad pair line: {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"bad pair line: {line!r}") from None
    try:
        return SpcInstance(graph, tuple(pairs), c)
    except (GraphError, UnreachableError) as exc:
        raise FormatError(str(exc)) from exc


def render_instance(inst: SpcInstance) -> str:
    out = [render_graph(inst.graph).rstrip("\n"), f"pairs {inst.k} {inst.c}"]
    out.extend(f"{s} {t}" for s, t in inst.pairs)
    return "\n".join(out) + "\n"


def parse_paths(text: str) -> list[Path]:
    """One path per line, node ids separated by whitespace."""
    out = []
    for line in _content_lines(text):
        try:
            out.append(Path(int(x) for x in line.split()))
        except ValueError:
            raise FormatError(f"bad path line: {line!r}") from None
    return out


def render_paths(paths: Iterable[Path]) -> str:
    return "".join(f"{p}\n" for p in paths)


def congestion_profile(paths: Iterable[Path]) -> dict[int, int]:
    return dict(sorted(congestion_map(list(paths)).items()))
