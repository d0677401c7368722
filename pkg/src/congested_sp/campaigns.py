"""Seeded random instances and property campaigns over them.

Each trial draws from its own ``random.Random`` keyed by ``(seed, target,
trial index)``, so any failing trial can be reproduced on its own. A trial
returns a :class:`TrialVerdict`; a failing verdict carries the instance text.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Optional

from .errors import CongestedPathError, StructuralInconsistency
from .graph import Graph, all_pairs_distances, canonical_shortest_path, is_shortest_path_ordering, render_graph, shortest_path_orderings
from .merge import merge_dag, merge_undirected
from .paths import Path, PathCollection, congestion_map, max_congestion_nodes, replay, subpath_swap
from .reduction import brute_force_dsp, solve_via_blowup, spc_via_dsp_reduction
from .roundtrip import PathKind, check_cover, classify_segments, roundtrip_cover
from .spc import SpcInstance, brute_force_spc, enumerate_shortest_paths, render_instance, solution_from_paths, validate_solution
from .supplier import Supplier


def random_graph(
    seed, n: int, directed: bool, edge_prob: float = 0.3, wmin: int = 1, wmax: int = 9
) -> Graph:
    """Random graph on ``n`` nodes laid over a random spanning cycle.

    The cycle makes undirected graphs connected and directed graphs strongly
    connected; every other node pair then gets an edge with probability
    ``edge_prob`` (each direction separately when directed).
    """
    if n < 1 or not 0 <= edge_prob <= 1 or not 1 <= wmin <= wmax:
        raise ValueError("invalid random graph parameters")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    arcs: dict = {}

    def add(u: int, v: int) -> None:
        key = (u, v) if directed else (min(u, v), max(u, v))
        if u != v and key not in arcs:
            arcs[key] = rng.randint(wmin, wmax)

    if n > 1:
        for i in range(n):
            add(order[i], order[(i + 1) % n])
    for u in range(n):
        for v in range(n):
            if u == v or (not directed and v < u):
                continue
            if rng.random() < edge_prob:
                add(u, v)
    return Graph(directed, n, tuple((u, v, w) for (u, v), w in sorted(arcs.items())))


def random_dag(seed, n: int, edge_prob: float = 0.3, wmin: int = 1, wmax: int = 9) -> Graph:
    """Random DAG over a random Hamiltonian path (so the first node reaches everything)."""
    if n < 1 or not 0 <= edge_prob <= 1 or not 1 <= wmin <= wmax:
        raise ValueError("invalid random DAG parameters")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    arcs = {}
    for i in range(n - 1):
        arcs[(order[i], order[i + 1])] = rng.randint(wmin, wmax)
    for i in range(n):
        for j in range(i + 2, n):
            if rng.random() < edge_prob:
                arcs[(order[i], order[j])] = rng.randint(wmin, wmax)
    return Graph(True, n, tuple((u, v, w) for (u, v), w in sorted(arcs.items())))


def random_corridor(seed, n: int, directed: bool, wmin: int = 1, wmax: int = 9) -> Graph:
    """A weighted spine with bypass nodes, each parallel to one interior spine node at equal length.

    Every bypass creates a tie between two shortest routes, so many shortest
    paths share most of their nodes; directed corridors are DAGs.
    """
    if n < 1 or not 1 <= wmin <= wmax:
        raise ValueError("invalid corridor parameters")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    spine_len = max(n - (n - 1) // 2 + rng.randint(0, (n - 1) // 4), min(n, 3))
    spine, extra = order[:spine_len], order[spine_len:]
    arcs = {(spine[i], spine[i + 1]): rng.randint(wmin, wmax) for i in range(spine_len - 1)}
    for y in extra:
        if spine_len < 3:
            arcs[(spine[0], y)] = rng.randint(wmin, wmax)
            continue
        i = rng.randrange(1, spine_len - 1)
        arcs[(spine[i - 1], y)] = arcs[(spine[i - 1], spine[i])]
        arcs[(y, spine[i + 1])] = arcs[(spine[i], spine[i + 1])]
    if not directed:
        arcs = {(min(u, v), max(u, v)): w for (u, v), w in arcs.items()}
    return Graph(directed, n, tuple((u, v, w) for (u, v), w in sorted(arcs.items())))


def _reachable_pairs(oracle, n: int) -> list[tuple[int, int]]:
    return [(s, t) for s in range(n) for t in range(n) if s != t and oracle.reachable(s, t)]


def interval_pairs(rng: random.Random, graph: Graph, oracle, k: int) -> list[tuple[int, int]]:
    """``k`` pairs, mostly sub-intervals (half of them wide) of one long shortest path, so that paths overlap heavily."""
    pairs = _reachable_pairs(oracle, graph.node_count)
    if not pairs:
        return []
    s, t = max(pairs, key=lambda st: (len(canonical_shortest_path(graph, oracle, *st)), rng.random()))
    spine = canonical_shortest_path(graph, oracle, s, t).nodes
    out = []
    for _ in range(k):
        roll = rng.random()
        if len(spine) >= 2 and roll < 0.4:
            i = rng.randrange(len(spine) - 1)
            j = rng.randrange(i + 1, len(spine))
            out.append((spine[i], spine[j]))
        elif len(spine) >= 2 and roll < 0.8:
            # wide intervals: start in the first third, end in the last third
            third = max(1, len(spine) // 3)
            i = rng.randrange(third)
            j = rng.randrange(max(i + 1, len(spine) - third), len(spine))
            out.append((spine[i], spine[j]))
        else:
            out.append(rng.choice(pairs))
    return out


@dataclass(frozen=True)
class TrialVerdict:
    index: int
    seed: str
    passed: bool
    tag: str = ""  # outcome class, aggregated into Campaign.stats
    detail: str = ""
    instance: str = ""


@dataclass
class Campaign:
    """A named property check repeated over seeded random trials."""

    target: str
    trials: int
    seed: int = 0
    n_max: int = 10
    k_max: int = 6
    d_max: int = 1
    wmin: int = 1
    wmax: int = 9
    verdicts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failures(self) -> list[TrialVerdict]:
        return [v for v in self.verdicts if not v.passed]

    @property
    def stats(self) -> Counter:
        return Counter(v.tag for v in self.verdicts)

    def summary(self) -> str:
        n_fail = len(self.failures)
        tags = " ".join(f"{t}={n}" for t, n in sorted(self.stats.items()) if t)
        line = f"{self.target}: {len(self.verdicts) - n_fail}/{len(self.verdicts)} passed (seed {self.seed})"
        return line + (f" [{tags}]" if tags else "")

    def report(self) -> str:
        out = [self.summary()]
        first = self.failures[:1]
        for v in first:
            out.append(f"first failure: trial {v.index} seed {v.seed}: {v.detail}")
            if v.instance:
                out.append(v.instance.rstrip("\n"))
        return "\n".join(out) + "\n"


def trial_seed(seed: int, target: str, index: int) -> str:
    return f"{seed}:{target}:{index}"


def _sizes(cfg: Campaign, rng: random.Random, lo: int = 2) -> int:
    return rng.randint(min(lo, cfg.n_max), cfg.n_max)


def _fail(i: int, seed: str, detail: str, instance: str = "", tag: str = "fail") -> TrialVerdict:
    return TrialVerdict(i, seed, False, tag, detail, instance)


def _merge_trial(cfg: Campaign, i: int, dag: bool) -> TrialVerdict:
    """Draw a random solution whose slack d = k - c satisfies k > N d, then merge its max-congestion nodes.

    The budget c is the drawn solution's maximum congestion, so the instance
    is feasible by construction; the brute-force solver must agree.
    """
    seed = trial_seed(cfg.seed, "dag-merge" if dag else "undirected-merge", i)
    factor = 3 if dag else 4
    # half the trials insist on slack 1 and a target set large enough for the merge loop to run
    demanding = cfg.d_max >= 1 and random.Random(seed).random() < 0.5
    for attempt in range(2000):
        rng = random.Random(f"{seed}:{attempt}")
        n = _sizes(cfg, rng, 3)
        wmax = rng.choice((cfg.wmin, min(cfg.wmin + 1, cfg.wmax), cfg.wmax))
        if rng.random() < 0.5:
            graph = random_corridor(rng.random(), n, dag, cfg.wmin, wmax)
        elif dag:
            graph = random_dag(rng.random(), n, rng.choice((0.3, 0.5)), cfg.wmin, wmax)
        else:
            graph = random_graph(rng.random(), n, False, rng.choice((0.3, 0.5)), cfg.wmin, wmax)
        oracle = all_pairs_distances(graph)
        d = 1 if demanding else rng.randint(0, cfg.d_max)
        k_lo = factor * d + 1
        k = rng.randint(k_lo, max(k_lo, cfg.k_max))
        pairs = interval_pairs(rng, graph, oracle, k)
        if len(pairs) < k:
            continue
        options = [enumerate_shortest_paths(graph, oracle, s, t, 64)[0] for s, t in pairs]
        start = PathCollection(graph, tuple(rng.choice(ps) for ps in options))
        if max(congestion_map(start).values()) != k - d:
            continue
        if not demanding or len(max_congestion_nodes(start, k - d)) >= factor:
            break
    else:
        return _fail(i, seed, "no solution with the drawn slack", tag="no-instance")
    inst = SpcInstance(graph, tuple(pairs), k - d)
    if brute_force_spc(inst) is None:
        return _fail(i, seed, "brute force finds no solution although one was drawn", render_instance(inst))
    start = scramble(rng, start, rng.randint(0, 6))
    W = max_congestion_nodes(start, inst.c)
    # paths with the fewest target nodes first, so the supplier's lowest-index pick is the worst one
    ranked = sorted(range(len(start)), key=lambda j: (sum(x in W for x in start[j]), rng.random()))
    inst = SpcInstance(graph, tuple(inst.pairs[j] for j in ranked), inst.c)
    start = PathCollection(graph, tuple(start[j] for j in ranked))
    text = render_instance(inst) + "".join(f"path {p}\n" for p in start)
    supplier = Supplier.collection(graph, oracle)
    try:
        if dag:
            coll, p, trace = merge_dag(start, W, supplier)
        else:
            coll, p, trace = merge_undirected(start, W, supplier)
    except CongestedPathError as exc:
        return _fail(i, seed, f"{type(exc).__name__}: {exc}", text)
    merged = solution_from_paths(inst, coll.paths)
    problems = [str(v) for v in validate_solution(inst, merged)]
    if congestion_map(coll) != congestion_map(start):
        problems.append("congestion map changed")
    if not coll[p].contains_all(W):
        problems.append(f"path {p} misses {sorted(W - set(coll[p]))}")
    if replay(start, trace.records) != coll:
        problems.append("trace replay does not reproduce the result")
    if problems:
        return _fail(i, seed, "; ".join(problems), text)
    return TrialVerdict(i, seed, True, "swapped" if trace.swaps else "no-swap")


def trial_dag_merge(cfg: Campaign, i: int) -> TrialVerdict:
    return _merge_trial(cfg, i, True)


def trial_undirected_merge(cfg: Campaign, i: int) -> TrialVerdict:
    return _merge_trial(cfg, i, False)


def _random_instance(rng: random.Random, cfg: Campaign, directed: bool, k_max: int, c_max: Optional[int] = None):
    n = _sizes(cfg, rng, 2)
    graph = random_graph(rng.random(), n, directed, rng.choice((0.2, 0.35, 0.5)), cfg.wmin, cfg.wmax)
    oracle = all_pairs_distances(graph)
    k = rng.randint(1, k_max)
    pairs = interval_pairs(rng, graph, oracle, k)
    if not pairs:
        return None
    c_hi = k if c_max is None else min(k, c_max)
    c = rng.randint(max(1, k - cfg.d_max), c_hi) if c_max is None else rng.randint(1, c_hi)
    return SpcInstance(graph, tuple(pairs), c)


def trial_reduction(cfg: Campaign, i: int) -> TrialVerdict:
    """Reduction with the brute-force disjoint-paths back-end agrees with direct brute force."""
    seed = trial_seed(cfg.seed, "reduction-equivalence", i)
    rng = random.Random(seed)
    inst = _random_instance(rng, cfg, False, cfg.k_max)
    if inst is None:
        return TrialVerdict(i, seed, True, "vacuous")
    text = render_instance(inst)
    direct = brute_force_spc(inst)
    reduced = spc_via_dsp_reduction(inst, brute_force_dsp)
    if (direct is None) != (reduced is None):
        return _fail(i, seed, f"feasibility differs: brute={direct is not None} reduction={reduced is not None}", text)
    if reduced is not None:
        bad = validate_solution(inst, reduced)
        if bad:
            return _fail(i, seed, "reduction solution invalid: " + "; ".join(map(str, bad)), text)
    return TrialVerdict(i, seed, True, "feasible" if direct is not None else "infeasible")


def trial_blowup(cfg: Campaign, i: int) -> TrialVerdict:
    """SPC feasibility equals disjoint-paths feasibility on the blown-up graph."""
    seed = trial_seed(cfg.seed, "blowup", i)
    rng = random.Random(seed)
    inst = _random_instance(rng, cfg, rng.random() < 0.5, cfg.k_max, 3)
    if inst is None:
        return TrialVerdict(i, seed, True, "vacuous")
    text = render_instance(inst)
    direct = brute_force_spc(inst)
    blown = solve_via_blowup(inst, brute_force_dsp)
    if (direct is None) != (blown is None):
        return _fail(i, seed, f"feasibility differs: brute={direct is not None} blowup={blown is not None}", text)
    if blown is not None and validate_solution(inst, blown):
        return _fail(i, seed, "projected solution invalid", text)
    return TrialVerdict(i, seed, True, "feasible" if direct is not None else "infeasible")


def _sample_paths(rng: random.Random, graph: Graph, oracle, count: int) -> list[Path]:
    pairs = _reachable_pairs(oracle, graph.node_count)
    out = []
    for _ in range(min(count, len(pairs))):
        s, t = rng.choice(pairs)
        paths, _ = enumerate_shortest_paths(graph, oracle, s, t, 64)
        out.append(rng.choice(paths))
    return out


def trial_segments(cfg: Campaign, i: int) -> TrialVerdict:
    """Every sampled shortest path splits into three segments without contradiction."""
    seed = trial_seed(cfg.seed, "segment-lemma", i)
    rng = random.Random(seed)
    n = _sizes(cfg, rng, 3)
    graph = random_graph(rng.random(), n, True, rng.choice((0.15, 0.3, 0.5)), cfg.wmin, rng.choice((1, 3, cfg.wmax)))
    oracle = all_pairs_distances(graph)
    kinds = Counter()
    for path in _sample_paths(rng, graph, oracle, 6):
        subsets = [path.nodes, tuple(x for x in path if x in (path.first, path.last) or rng.random() < 0.5)]
        for Wp in subsets:
            try:
                kinds[classify_segments(path, Wp, oracle).kind] += 1
            except StructuralInconsistency as exc:
                return _fail(i, seed, f"path {path} W'={list(Wp)}: {exc}", render_graph(graph))
    tag = "reversing" if kinds[PathKind.REVERSING] else "non-reversing" if kinds[PathKind.NON_REVERSING] else "trivial"
    return TrialVerdict(i, seed, True, tag)


def trial_exclusivity(cfg: Campaign, i: int) -> TrialVerdict:
    """If u,v,w is a shortest-path ordering then v,u,w and u,w,v are not."""
    seed = trial_seed(cfg.seed, "exclusivity", i)
    rng = random.Random(seed)
    n = _sizes(cfg, rng, 3)
    graph = random_graph(rng.random(), n, rng.random() < 0.7, rng.choice((0.2, 0.4, 0.7)), cfg.wmin, rng.choice((1, 2, cfg.wmax)))
    oracle = all_pairs_distances(graph)
    held = 0
    for u, v, w in permutations(range(n), 3):
        if is_shortest_path_ordering(oracle, (u, v, w)):
            held += 1
            if is_shortest_path_ordering(oracle, (v, u, w)) or is_shortest_path_ordering(oracle, (u, w, v)):
                return _fail(i, seed, f"triple {(u, v, w)} admits a forbidden second ordering", render_graph(graph))
    return TrialVerdict(i, seed, True, "checked" if held else "vacuous")


def swap_options(coll: PathCollection) -> list[tuple]:
    """Every ``(p, q, x, y)`` accepted by :func:`subpath_swap` on ``coll``."""
    directed = coll.graph.directed
    out = []
    for p, P in enumerate(coll):
        for q, Q in enumerate(coll):
            if p == q:
                continue
            common = [x for x in P if x in Q]
            for ix, x in enumerate(common):
                for y in common[ix + 1 :]:
                    if not directed or Q.before(x, y):
                        out.append((p, q, x, y))
    return out


def scramble(rng: random.Random, coll: PathCollection, steps: int) -> PathCollection:
    """Apply up to ``steps`` random subpath swaps."""
    for _ in range(steps):
        options = swap_options(coll)
        if not options:
            break
        coll, _ = subpath_swap(coll, *rng.choice(options))
    return coll


def trial_swaps(cfg: Campaign, i: int) -> TrialVerdict:
    """Random applicable subpath swaps keep congestion, terminals and shortest-ness."""
    seed = trial_seed(cfg.seed, "swap-algebra", i)
    rng = random.Random(seed)
    n = _sizes(cfg, rng, 3)
    directed = rng.random() < 0.5
    graph = random_graph(rng.random(), n, directed, rng.choice((0.3, 0.6)), cfg.wmin, rng.choice((1, 2, cfg.wmax)))
    oracle = all_pairs_distances(graph)
    pairs = interval_pairs(rng, graph, oracle, rng.randint(2, 6))
    coll = PathCollection(graph, tuple(rng.choice(enumerate_shortest_paths(graph, oracle, s, t, 64)[0]) for s, t in pairs))
    if len(coll) < 2:
        return TrialVerdict(i, seed, True, "vacuous")
    counts, terms = congestion_map(coll), coll.terminals
    done = 0
    for _ in range(rng.randint(1, 8)):
        options = swap_options(coll)
        if not options:
            break
        coll, _ = subpath_swap(coll, *rng.choice(options))
        done += 1
        if congestion_map(coll) != counts or coll.terminals != terms or not coll.is_valid(oracle):
            return _fail(i, seed, f"swap {done} broke an invariant", render_graph(graph))
    return TrialVerdict(i, seed, True, "swapped" if done else "vacuous")


def trial_cycle_lemma(cfg: Campaign, i: int) -> TrialVerdict:
    """On a non-reversing P[a,b], any path with w before u visits w, w', b, a, u', u in that order."""
    seed = trial_seed(cfg.seed, "cycle-lemma", i)
    rng = random.Random(seed)
    n = _sizes(cfg, rng, 4)
    graph = random_graph(rng.random(), n, True, rng.choice((0.15, 0.3, 0.5)), cfg.wmin, rng.choice((1, 3, cfg.wmax)))
    oracle = all_pairs_distances(graph)
    checked = 0
    for path in _sample_paths(rng, graph, oracle, 6):
        if len(path) < 2:
            continue
        Wp = path.nodes
        if classify_segments(path, Wp, oracle).kind is not PathKind.NON_REVERSING:
            continue
        a, b = path.first, path.last
        for iu in range(len(Wp)):
            for iw in range(iu + 1, len(Wp)):
                for iu2 in range(iu):
                    for iw2 in range(iw + 1, len(Wp)):
                        u, w, u2, w2 = Wp[iu], Wp[iw], Wp[iu2], Wp[iw2]
                        expect = tuple(dict.fromkeys((w, w2, b, a, u2, u)))
                        for order in shortest_path_orderings(oracle, {u, w, u2, w2, a, b}):
                            if order.index(w) < order.index(u):
                                checked += 1
                                if order != expect:
                                    return _fail(
                                        i, seed, f"path {path}: order {order} expected {expect}", render_graph(graph)
                                    )
    return TrialVerdict(i, seed, True, "checked" if checked else "vacuous")


def trial_roundtrip(cfg: Campaign, i: int) -> TrialVerdict:
    """Roundtrip cover on a random digraph whose target set passes the local precondition."""
    seed = trial_seed(cfg.seed, "directed-roundtrip", i)
    rng = random.Random(seed)
    n = _sizes(cfg, rng, 3)
    graph = random_graph(rng.random(), n, True, rng.choice((0.1, 0.2, 0.35)), cfg.wmin, rng.choice((1, 3, cfg.wmax)))
    oracle = all_pairs_distances(graph)
    pool = _sample_paths(rng, graph, oracle, 3)
    host = max(pool, key=len)
    W = frozenset(x for x in host if rng.random() < 0.8) or frozenset({host.first})
    if rng.random() < 0.3:
        W |= {rng.randrange(n)}
    size = min(11, len(W))
    if not all(shortest_path_orderings(oracle, S) for S in combinations(sorted(W), size)):
        return TrialVerdict(i, seed, True, "precondition-fails")
    start = PathCollection(graph, tuple(p for p in pool if p is not host))
    text = render_graph(graph) + f"W {' '.join(map(str, sorted(W)))}\n" + "".join(f"path {p}\n" for p in start)
    supplier = Supplier.theorem(graph, oracle)
    try:
        coll, outcome, trace = roundtrip_cover(start, W, supplier)
    except CongestedPathError as exc:
        return _fail(i, seed, f"{type(exc).__name__}: {exc}", text)
    problems = check_cover(coll, W, outcome)
    if not coll.is_valid(oracle):
        problems.append("a path is not shortest")
    if replay(start, trace.records) != coll:
        problems.append("trace replay does not reproduce the result")
    if len(trace.covered) > len(W) + 1:
        problems.append(f"{len(trace.covered)} iterations")
    if problems:
        return _fail(i, seed, "; ".join(problems), text)
    cases = sorted({entry.split()[1] for entry in trace.case_log})
    return TrialVerdict(i, seed, True, ",".join(cases))


TRIALS: dict[str, Callable[[Campaign, int], TrialVerdict]] = {
    "dag-merge": trial_dag_merge,
    "undirected-merge": trial_undirected_merge,
    "directed-roundtrip": trial_roundtrip,
    "reduction-equivalence": trial_reduction,
    "segment-lemma": trial_segments,
    "cycle-lemma": trial_cycle_lemma,
    "blowup": trial_blowup,
    "exclusivity": trial_exclusivity,
    "swap-algebra": trial_swaps,
}


# size bounds per target, matching the acceptance campaigns
DEFAULTS: dict[str, dict] = {
    "dag-merge": dict(n_max=10, k_max=7, d_max=1),
    "undirected-merge": dict(n_max=10, k_max=7, d_max=1),
    "directed-roundtrip": dict(n_max=9),
    "reduction-equivalence": dict(n_max=10, k_max=6, d_max=1),
    "segment-lemma": dict(n_max=10),
    "cycle-lemma": dict(n_max=10),
    "blowup": dict(n_max=8, k_max=3),
    "exclusivity": dict(n_max=10),
    "swap-algebra": dict(n_max=10),
}


def make_campaign(target: str, trials: int, seed: int = 0, **overrides) -> Campaign:
    if target not in TRIALS:
        raise ValueError(f"unknown campaign target {target!r}")
    opts = {**DEFAULTS.get(target, {}), **{k: v for k, v in overrides.items() if v is not None}}
    return Campaign(target, trials, seed, **opts)


def _run_one(args: tuple) -> TrialVerdict:
    cfg, i = args
    return TRIALS[cfg.target](cfg, i)


def verify_theorem_trial(cfg: Campaign, workers: int = 1, stop_on_failure: bool = False) -> Campaign:
    """Run ``cfg.trials`` trials of ``cfg.target``; verdicts are stored in trial order.

    With ``workers > 1`` trials run in a process pool; results are still
    aggregated by trial index.
    """
    if cfg.target not in TRIALS:
        raise ValueError(f"unknown campaign target {cfg.target!r}")
    cfg.verdicts = []
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            cfg.verdicts = list(pool.map(_run_one, jobs, chunksize=8))
        return cfg
    for job in jobs:
        verdict = _run_one(job)
        cfg.verdicts.append(verdict)
        if stop_on_failure and not verdict.passed:
            break
    return cfg
