"""Independent reference implementations used only by the tests.

Nothing here calls the package's distance oracle, predicates or solvers;
everything is recomputed from the raw edge list.
"""

from __future__ import annotations

from itertools import product

from hypothesis import strategies as st

from congested_sp import Graph

INF = None


def arcs(graph: Graph) -> list[tuple[int, int, int]]:
    out = list(graph.edges)
    if not graph.directed:
        out += [(v, u, w) for u, v, w in graph.edges]
    return out


def bellman_ford(graph: Graph) -> list[list]:
    n = graph.node_count
    table = []
    for s in range(n):
        d = [INF] * n
        d[s] = 0
        for _ in range(n):
            changed = False
            for u, v, w in arcs(graph):
                if d[u] is not None and (d[v] is None or d[u] + w < d[v]):
                    d[v] = d[u] + w
                    changed = True
            if not changed:
                break
        table.append(d)
    return table


def floyd_warshall(graph: Graph) -> list[list]:
    n = graph.node_count
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in arcs(graph):
        if d[u][v] is None or w < d[u][v]:
            d[u][v] = w
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] is not None and d[k][j] is not None:
                    via = d[i][k] + d[k][j]
                    if d[i][j] is None or via < d[i][j]:
                        d[i][j] = via
    return d


def simple_paths(graph: Graph, s: int, t: int) -> list[tuple[int, ...]]:
    """Every simple s-t path, by plain DFS."""
    adj: dict[int, list] = {}
    for u, v, w in arcs(graph):
        adj.setdefault(u, []).append(v)
    out = []

    def walk(path: list[int]) -> None:
        u = path[-1]
        if u == t:
            out.append(tuple(path))
            return
        for v in adj.get(u, ()):
            if v not in path:
                path.append(v)
                walk(path)
                path.pop()

    walk([s])
    return out


def weight_of(graph: Graph, path) -> int:
    table = {(u, v): w for u, v, w in arcs(graph)}
    return sum(table[(u, v)] for u, v in zip(path, path[1:]))


def shortest_paths_brute(graph: Graph, s: int, t: int) -> list[tuple[int, ...]]:
    """All shortest s-t paths, sorted lexicographically; empty if unreachable."""
    paths = simple_paths(graph, s, t)
    if not paths:
        return []
    best = min(weight_of(graph, p) for p in paths)
    return sorted(p for p in paths if weight_of(graph, p) == best)


def all_shortest_paths_brute(graph: Graph) -> list[tuple[int, ...]]:
    out = []
    for s in range(graph.node_count):
        for t in range(graph.node_count):
            out += shortest_paths_brute(graph, s, t)
    return out


def is_subsequence(seq, path) -> bool:
    it = iter(path)
    return all(x in it for x in seq)


def ordering_exists_brute(graph: Graph, seq, family=None) -> bool:
    family = all_shortest_paths_brute(graph) if family is None else family
    return any(is_subsequence(seq, p) for p in family)


def path_count_dp(graph: Graph, s: int, t: int) -> int:
    """Number of shortest s-t paths by DP over distances from s."""
    d = floyd_warshall(graph)
    if d[s][t] is None:
        return 0
    order = sorted((x for x in range(graph.node_count) if d[s][x] is not None), key=lambda x: d[s][x])
    count = {s: 1}
    for x in order:
        if x == s:
            continue
        count[x] = sum(
            count.get(u, 0) for u, v, w in arcs(graph) if v == x and d[s][u] is not None and d[s][u] + w == d[s][x]
        )
    return count[t]


def spc_solutions_brute(graph: Graph, pairs, c: int) -> list[tuple]:
    """Every feasible assignment, by a full product over per-pair shortest paths."""
    options = [shortest_paths_brute(graph, s, t) for s, t in pairs]
    out = []
    for choice in product(*options):
        load: dict[int, int] = {}
        for p in choice:
            for x in p:
                load[x] = load.get(x, 0) + 1
        if all(n <= c for n in load.values()):
            out.append(choice)
    return out


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 7, directed=None, max_weight: int = 5):
    n = draw(st.integers(min_nodes, max_nodes))
    is_directed = draw(st.booleans()) if directed is None else directed
    candidates = [(u, v) for u in range(n) for v in range(n) if u != v and (is_directed or u < v)]
    chosen = draw(st.lists(st.sampled_from(candidates), unique=True, max_size=len(candidates))) if candidates else []
    weights = draw(st.lists(st.integers(1, max_weight), min_size=len(chosen), max_size=len(chosen)))
    return Graph(is_directed, n, tuple((u, v, w) for (u, v), w in zip(sorted(chosen), weights)))


@st.composite
def strongly_connected_graphs(draw, min_nodes: int = 2, max_nodes: int = 7, directed=None, max_weight: int = 5):
    """Graphs containing the cycle 0 -> 1 -> ... -> n-1 -> 0 plus random extra edges."""
    n = draw(st.integers(min_nodes, max_nodes))
    is_directed = draw(st.booleans()) if directed is None else directed
    ring = {(i, (i + 1) % n) for i in range(n)} if n > 1 else set()
    if not is_directed:
        ring = {(min(u, v), max(u, v)) for u, v in ring}
    candidates = [(u, v) for u in range(n) for v in range(n) if u != v and (is_directed or u < v) and (u, v) not in ring]
    extra = draw(st.lists(st.sampled_from(candidates), unique=True)) if candidates else []
    chosen = sorted(ring | set(extra))
    weights = draw(st.lists(st.integers(1, max_weight), min_size=len(chosen), max_size=len(chosen)))
    return Graph(is_directed, n, tuple((u, v, w) for (u, v), w in zip(chosen, weights)))
