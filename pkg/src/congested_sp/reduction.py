"""Congestion blow-up, disjoint-shortest-path back-ends and the subset reduction.

Blow-up: node ``v`` becomes copies ``v*c + r`` for ``r < c``; every edge
``(u, v, w)`` becomes all ``(u*c + i, v*c + j, w)``. A pair's terminals use
the copy indexed by how many earlier pairs already used that node as a
terminal, so disjoint paths in the blown graph are exactly paths with node
congestion at most ``c`` in the original.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import BudgetExceeded, UnsupportedGraph
from .graph import Graph, canonical_shortest_path
from .paths import Path
from .spc import DEFAULT_BUDGET, SpcInstance, SpcSolution, brute_force_spc, shortest_path_dag, solution_from_paths

DspSolver = Callable[[SpcInstance, int], Optional[SpcSolution]]


@dataclass(frozen=True)
class BlowupMapping:
    original: SpcInstance
    blown: Optional[SpcInstance]
    copies: tuple  # copies[v] = ids of v's copies in the blown graph
    terminal_copies: tuple  # per pair: (source copy, target copy)
    infeasible_reason: Optional[str] = None

    @property
    def infeasible(self) -> bool:
        return self.blown is None

    def project(self, path: Path) -> Path:
        c = self.original.c
        return Path(x // c for x in path.nodes)

    def project_solution(self, sol: SpcSolution) -> SpcSolution:
        return solution_from_paths(self.original, (self.project(p) for p in sol.paths))


def congestion_blowup(inst: SpcInstance) -> BlowupMapping:
    """Map an SPC instance to a disjoint-paths instance on ``c`` copies of every node."""
    c, n = inst.c, inst.graph.node_count
    copies = tuple(tuple(v * c + r for r in range(c)) for v in range(n))
    used = [0] * n
    terms = []
    for s, t in inst.pairs:
        rs = used[s]
        used[s] += 1
        if t == s:
            rt = rs
        else:
            rt = used[t]
            used[t] += 1
        terms.append((rs, rt))
    crowded = [v for v in range(n) if used[v] > c]
    if crowded:
        v = crowded[0]
        reason = f"node {v} is a terminal of {used[v]} pairs, budget {c}"
        return BlowupMapping(inst, None, copies, (), reason)
    if c == 1:
        edges = inst.graph.edges
    else:
        edges = tuple(
            (u * c + i, v * c + j, w) for u, v, w in inst.graph.edges for i in range(c) for j in range(c)
        )
    blown_graph = Graph(inst.graph.directed, n * c, edges) if c > 1 else inst.graph
    term_copies = tuple((s * c + rs, t * c + rt) for (s, t), (rs, rt) in zip(inst.pairs, terms))
    blown = SpcInstance(blown_graph, term_copies, 1)
    return BlowupMapping(inst, blown, copies, term_copies)


def _terminals_collide(pairs) -> bool:
    seen: set[int] = set()
    for s, t in pairs:
        own = {s, t}
        if own & seen:
            return True
        seen |= own
    return False


def brute_force_dsp(inst: SpcInstance, budget: int = DEFAULT_BUDGET) -> Optional[SpcSolution]:
    """Node-disjoint shortest paths by depth-first path growth.

    Paths are grown pair by pair along each pair's shortest-path DAG, never
    entering an occupied node; after each completed path every later pair
    must still have a free route. Raises :class:`BudgetExceeded` after
    ``budget`` node expansions.
    """
    if inst.c != 1:
        raise ValueError("brute_force_dsp solves c = 1 instances")
    graph, oracle = inst.graph, inst.oracle
    succ = [shortest_path_dag(graph, oracle, s, t) for s, t in inst.pairs]
    terminals = {x for pair in inst.pairs for x in pair}
    occupied: set[int] = set()
    paths: list[list[int]] = []
    expansions = 0

    def tick() -> None:
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            raise BudgetExceeded(f"disjoint-path search exceeded {budget} expansions")

    def routable(j: int) -> bool:
        s, t = inst.pairs[j]
        if s in occupied or t in occupied:
            return False
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            if u == t:
                return True
            for x in succ[j][u]:
                if x not in seen and x not in occupied:
                    seen.add(x)
                    stack.append(x)
        return False

    def extend(i: int, stack: list[int]) -> bool:
        tick()
        u = stack[-1]
        t = inst.pairs[i][1]
        if u == t:
            paths.append(list(stack))
            if all(routable(j) for j in range(i + 1, len(inst.pairs))) and place(i + 1):
                return True
            paths.pop()
            return False
        for x in succ[i][u]:
            if x in occupied or (x in terminals and x != t):
                continue
            occupied.add(x)
            stack.append(x)
            if extend(i, stack):
                return True
            stack.pop()
            occupied.discard(x)
        return False

    def place(i: int) -> bool:
        if i == len(inst.pairs):
            return True
        s, _ = inst.pairs[i]
        if s in occupied:
            return False
        occupied.add(s)
        if extend(i, [s]):
            return True
        occupied.discard(s)
        return False

    if _terminals_collide(inst.pairs):
        return None
    if place(0):
        return solution_from_paths(inst, paths)
    return None


def dag_dsp(inst: SpcInstance, budget: int = DEFAULT_BUDGET) -> Optional[SpcSolution]:
    """Node-disjoint shortest paths on a DAG by a memoized token game.

    Every pair owns a token starting at its source; the unfinished token with
    the smallest topological index moves next, along its own shortest-path DAG,
    onto a node no other token occupies. In a DAG no token can come back to a
    node another token has left, so the state is just the tuple of positions.
    """
    if inst.c != 1:
        raise ValueError("dag_dsp solves c = 1 instances")
    graph, oracle = inst.graph, inst.oracle
    topo = graph.topological_order() if graph.directed else None
    if topo is None:
        raise UnsupportedGraph("dag_dsp needs a directed acyclic graph")
    rank = {x: i for i, x in enumerate(topo)}
    pairs = inst.pairs
    k = len(pairs)
    sources = [s for s, _ in pairs]
    targets = [t for _, t in pairs]
    if _terminals_collide(pairs):
        return None
    succ = [shortest_path_dag(graph, oracle, s, t) for s, t in pairs]
    failed: set[tuple] = set()
    moves: list[tuple[int, int]] = []
    expansions = 0

    def solve(pos: tuple) -> bool:
        nonlocal expansions
        live = [i for i in range(k) if pos[i] != targets[i]]
        if not live:
            return True
        if pos in failed:
            return False
        expansions += 1
        if expansions > budget:
            raise BudgetExceeded(f"token search exceeded {budget} states")
        i = min(live, key=lambda j: rank[pos[j]])
        taken = set(pos)
        for x in succ[i][pos[i]]:
            if x in taken:
                continue
            moves.append((i, x))
            if solve(pos[:i] + (x,) + pos[i + 1 :]):
                return True
            moves.pop()
        failed.add(pos)
        return False

    if not solve(tuple(sources)):
        return None
    routes = [[s] for s in sources]
    for i, x in moves:
        routes[i].append(x)
    return solution_from_paths(inst, routes)


BACKENDS: dict[str, DspSolver] = {"brute": brute_force_dsp, "dag-dp": dag_dsp}


def solve_via_blowup(inst: SpcInstance, dsp_solver: DspSolver = brute_force_dsp, budget: int = DEFAULT_BUDGET) -> Optional[SpcSolution]:
    mapping = congestion_blowup(inst)
    if mapping.infeasible:
        return None
    sol = dsp_solver(mapping.blown, budget)
    return None if sol is None else mapping.project_solution(sol)


def colex_subsets(k: int, m: int) -> Iterator[tuple]:
    """``m``-subsets of ``range(k)`` in colexicographic order."""
    if m == 0:
        yield ()
        return
    for top in range(m - 1, k):
        for rest in colex_subsets(top, m - 1):
            yield rest + (top,)


def subset_size(inst: SpcInstance) -> int:
    """4d for undirected graphs, 3d for DAGs; other directed graphs are refused."""
    graph = inst.graph
    if not graph.directed:
        return 4 * inst.d
    if graph.is_dag():
        return 3 * inst.d
    raise UnsupportedGraph("the reduction covers undirected graphs and DAGs only")


def spc_via_dsp_reduction(
    inst: SpcInstance, dsp_solver: DspSolver = brute_force_dsp, budget: int = DEFAULT_BUDGET
) -> Optional[SpcSolution]:
    """Solve (k,c)-SPC through disjoint-paths calls on small pair subsets.

    With ``k <= m`` (``m`` = 4d undirected, 3d on DAGs) the whole instance is
    blown up and solved. Otherwise every ``m``-subset is tried in colex order
    as an ``(m, m-d)`` instance; the first success is completed with canonical
    shortest paths for the remaining pairs, which keeps congestion at most
    ``(m - d) + (k - m) = c``.
    """
    m = subset_size(inst)
    if inst.k <= m:
        return solve_via_blowup(inst, dsp_solver, budget)
    canon = [canonical_shortest_path(inst.graph, inst.oracle, s, t) for s, t in inst.pairs]
    for subset in colex_subsets(inst.k, m):
        if subset:
            sub = SpcInstance(inst.graph, tuple(inst.pairs[i] for i in subset), m - inst.d)
            sol = solve_via_blowup(sub, dsp_solver, budget)
            if sol is None:
                continue
            chosen = dict(zip(subset, sol.paths))
        else:
            chosen = {}
        return solution_from_paths(inst, (chosen.get(i, canon[i]) for i in range(inst.k)))
    return None


def solve_spc(inst: SpcInstance, method: str = "brute", backend: str = "brute", budget: int = DEFAULT_BUDGET) -> Optional[SpcSolution]:
    """Dispatch: ``brute`` searches directly, ``reduction`` goes through disjoint paths."""
    if method == "brute":
        return brute_force_spc(inst, budget)
    if method == "reduction":
        return spc_via_dsp_reduction(inst, BACKENDS[backend], budget)
    raise ValueError(f"unknown method {method!r}")
