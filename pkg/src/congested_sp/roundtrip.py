"""Directed graphs: segment classification, trapping nodes, critical-node rerouting and the roundtrip cover.

The roundtrip procedure repeatedly picks the stored path ``P`` holding the
most target nodes, lets ``a``/``b`` be its first/last target nodes and either
inserts one more target node into some path (cases 2 to 5) or builds a
second path that closes the cycle back from ``b`` to ``a`` (case 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    PreconditionFailure,
    StructuralInconsistency,
    SupplierExhausted,
    SwapError,
    UnreachableError,
)
from .graph import DistanceOracle, is_shortest_path_ordering, on_shortest_path
from .merge import MergeTrace
from .paths import Path, PathCollection, subpath, subpath_swap
from .supplier import Supplier


class PathKind(enum.Enum):
    TRIVIAL = "trivial"
    REVERSING = "reversing"
    NON_REVERSING = "non-reversing"


@dataclass(frozen=True)
class SegmentPartition:
    """Three contiguous segments of a shortest ``a``-``b`` path relative to a node set.

    ``labels`` maps every classified node to 1, 2 or 3. ``w1``/``w2`` are the
    last node of segment 1 and the first of segment 3 among the nodes that
    determine the boundaries (``None`` when no such node exists). For a trivial
    path, ``witness`` is the first node admitting no alternative ordering and
    ``labels`` is empty.
    """

    kind: PathKind
    labels: dict = field(default_factory=dict)
    w1: Optional[int] = None
    w2: Optional[int] = None
    witness: Optional[int] = None

    def segment(self, i: int, path: Path) -> tuple:
        """Labelled nodes of segment ``i`` in path order."""
        return tuple(x for x in path if self.labels.get(x) == i)


def _admits(oracle: DistanceOracle, a: int, w: int, b: int) -> tuple[bool, bool, bool]:
    o1 = is_shortest_path_ordering(oracle, (b, a, w))
    o2 = is_shortest_path_ordering(oracle, (w, b, a))
    o3 = is_shortest_path_ordering(oracle, (b, w, a))
    return o1, o2, o3


def classify_segments(path: Path, Wp: Iterable[int], oracle: DistanceOracle) -> SegmentPartition:
    """Split ``path`` (from ``a`` to ``b``) into the three segments relative to ``Wp``.

    Raises :class:`StructuralInconsistency` if the admitted orderings violate
    contiguity or exactness; both are theorems for shortest paths.
    """
    a, b = path.first, path.last
    nodes = set(Wp)
    for x in nodes:
        if x not in path:
            raise ValueError(f"node {x} is not on the path")
    inner = [x for x in path if x in nodes and x not in (a, b)]
    if a == b:
        return SegmentPartition(PathKind.NON_REVERSING, {a: 1})
    info = {}
    for w in inner:
        o1, o2, o3 = _admits(oracle, a, w, b)
        if not (o1 or o2 or o3):
            return SegmentPartition(PathKind.TRIVIAL, witness=w)
        if o3 and (o1 or o2):
            raise StructuralInconsistency(f"node {w} admits b->w->a together with another reversed ordering")
        info[w] = (o1, o2, o3)
    first_only = [w for w in inner if info[w][0] and not info[w][1]]
    last_only = [w for w in inner if info[w][1] and not info[w][0]]
    w1 = first_only[-1] if first_only else None
    w2 = last_only[0] if last_only else None
    pos = {x: i for i, x in enumerate(inner)}
    cut1 = pos[w1] if w1 is not None else -1
    cut3 = pos[w2] if w2 is not None else len(inner)
    if cut1 >= cut3:
        raise StructuralInconsistency(f"segment 1 boundary {w1} does not precede segment 3 boundary {w2}")
    labels = {a: 1, b: 3}
    middle = []
    for i, w in enumerate(inner):
        o1, o2, o3 = info[w]
        if i <= cut1:
            if not (o1 and not o2):
                raise StructuralInconsistency(f"node {w} sits in segment 1 but admits {info[w]}")
            labels[w] = 1
        elif i >= cut3:
            if not (o2 and not o1):
                raise StructuralInconsistency(f"node {w} sits in segment 3 but admits {info[w]}")
            labels[w] = 3
        else:
            labels[w] = 2
            middle.append(info[w])
    if not middle:
        kind = PathKind.NON_REVERSING
    elif all(m == (True, True, False) for m in middle):
        kind = PathKind.NON_REVERSING
    elif all(m == (False, False, True) for m in middle):
        kind = PathKind.REVERSING
    else:
        raise StructuralInconsistency(f"segment 2 mixes reversing and non-reversing nodes: {middle}")
    return SegmentPartition(kind, labels, w1, w2)


@dataclass(frozen=True)
class TrapPair:
    trap1: int
    trap2: int
    low_clamped: bool = False
    high_clamped: bool = False

    @property
    def nodes(self) -> frozenset:
        return frozenset((self.trap1, self.trap2))

    def __iter__(self):
        return iter((self.trap1, self.trap2))


def trapping_nodes(v: int, Wp: Iterable[int], a: int, oracle: DistanceOracle) -> TrapPair:
    """Nodes of ``Wp`` bracketing ``v`` by distance from ``a``.

    An empty side is clamped: the low side to ``a``, the high side to the
    node of ``Wp`` farthest from ``a``; the returned flags record the clamp.
    """
    pool = sorted(set(Wp))
    if not pool:
        raise ValueError("Wp is empty")
    dv = oracle.dist(a, v)
    if dv is None or any(oracle.dist(a, x) is None for x in pool):
        raise UnreachableError(f"trapping nodes need finite distances from {a}")
    low = [x for x in pool if oracle.dist(a, x) <= dv]
    high = [x for x in pool if oracle.dist(a, x) >= dv]
    low_clamped = not low
    high_clamped = not high
    if low:
        trap1 = min(low, key=lambda x: (-oracle.dist(a, x), x))
    else:
        trap1 = a
    if high:
        trap2 = min(high, key=lambda x: (oracle.dist(a, x), x))
    else:
        trap2 = min(pool, key=lambda x: (-oracle.dist(a, x), x))
    return TrapPair(trap1, trap2, low_clamped, high_clamped)


@dataclass(frozen=True)
class CriticalSpec:
    """Pairs ``(a_i, b_i)``, extra nodes ``U`` and the target set ``W_star``.

    ``T`` is the pair nodes together with ``U``; the procedure covers
    ``W_star`` and ``T`` on one path.
    """

    pairs: tuple
    U: frozenset = frozenset()
    W_star: frozenset = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple((int(x), int(y)) for x, y in self.pairs))
        object.__setattr__(self, "U", frozenset(self.U))
        object.__setattr__(self, "W_star", frozenset(self.W_star))
        if not self.pairs:
            raise ValueError("a critical spec needs at least one pair")
        if len(self.T) > 9:
            raise PreconditionFailure(f"critical set has {len(self.T)} nodes, at most 9 allowed")

    @property
    def pair_nodes(self) -> frozenset:
        return frozenset(x for pair in self.pairs for x in pair)

    @property
    def T(self) -> frozenset:
        return self.pair_nodes | self.U


def _critical_labels(spec: CriticalSpec, oracle: DistanceOracle) -> tuple[list[int], dict[int, int]]:
    """Label sequence a_1, W_1, b_1, a_2, ... and the group index of every W_i member."""
    T = spec.T
    groups: list[list[int]] = [[] for _ in spec.pairs]
    owner: dict[int, int] = {}
    for w in sorted(spec.W_star - T):
        hits = [i for i, (ai, bi) in enumerate(spec.pairs) if on_shortest_path(oracle, ai, w, bi)]
        if len(hits) != 1:
            raise PreconditionFailure(f"node {w} lies on shortest paths of {len(hits)} pairs, expected exactly one")
        groups[hits[0]].append(w)
        owner[w] = hits[0]
    # extra nodes on a single pair's range act as labels of that group; the rest only ride along in T
    for u in sorted(spec.U - spec.pair_nodes):
        hits = [i for i, (ai, bi) in enumerate(spec.pairs) if on_shortest_path(oracle, ai, u, bi)]
        if len(hits) == 1:
            groups[hits[0]].append(u)
            owner[u] = hits[0]
    labels: list[int] = []
    for i, (ai, bi) in enumerate(spec.pairs):
        row = oracle.rows()[ai]
        members = sorted(groups[i], key=lambda x: (row[x], x))
        for x, y in zip(members, members[1:]):
            if row[x] == row[y]:
                raise StructuralInconsistency(f"nodes {x} and {y} are equidistant from {ai}")
        for x in [ai, *members, bi]:
            if x not in labels:
                labels.append(x)
    return labels, owner


def _check_pair_order(path: Path, spec: CriticalSpec) -> None:
    for ai, bi in spec.pairs:
        if ai != bi and not path.before(ai, bi):
            raise PreconditionFailure(f"path {list(path.nodes)} does not visit {ai} before {bi}")


def _swap(coll: PathCollection, p: int, q: int, x: int, y: int, trace: MergeTrace) -> PathCollection:
    if x == y:
        return coll
    try:
        coll, rec = subpath_swap(coll, p, q, x, y)
    except SwapError as exc:
        raise StructuralInconsistency(f"planned swap on ({x},{y}) is not applicable: {exc}") from exc
    trace.records.append(rec)
    return coll


def critical_node_reroute(
    coll: PathCollection, spec: CriticalSpec, supplier: Supplier
) -> tuple[PathCollection, int, MergeTrace]:
    """Swap until one path holds ``W_star`` together with the critical nodes ``T``.

    Every fetched path containing ``T`` must visit each ``a_i`` before its
    ``b_i``; a violation raises :class:`PreconditionFailure`.
    """
    oracle = supplier.oracle
    T = spec.T
    labels, owner = _critical_labels(spec, oracle)
    trace = MergeTrace()
    coll, p, recs = supplier.fetch(coll, T)
    trace.records.extend(recs)
    _check_pair_order(coll[p], spec)
    starts = {i: ai for i, (ai, _) in enumerate(spec.pairs)}
    v1 = labels[0]
    trace.covered.append(frozenset(T))
    for ell in range(1, len(labels)):
        nxt = labels[ell]
        if nxt in T or nxt in coll[p]:
            continue
        j = owner[nxt]
        # anchor: the last earlier label of the same group, else a_j
        prev = next((x for x in reversed(labels[:ell]) if owner.get(x) == j), starts[j])
        need = {v1, prev, nxt} | T
        coll, q, recs = supplier.fetch(coll, need, exclude=(p,))
        trace.records.extend(recs)
        _check_pair_order(coll[q], spec)
        for i in range(j):
            ai, bi = spec.pairs[i]
            coll = _swap(coll, p, q, ai, bi, trace)
        coll = _swap(coll, p, q, starts[j], prev, trace)
        done = set(labels[: ell + 1]) | T
        if not coll[q].contains_all(done):
            missing = sorted(x for x in done if x not in coll[q])
            raise StructuralInconsistency(f"rerouted path misses {missing}")
        p = q
        trace.covered.append(frozenset(done))
    target = spec.W_star | T
    if not coll[p].contains_all(target):
        missing = sorted(x for x in target if x not in coll[p])
        raise StructuralInconsistency(f"final path misses {missing}")
    return coll, p, trace


def _ending(supplier: Supplier, coll: PathCollection, x: int, y: int, v: int) -> bool:
    return supplier.exists(coll, {x, y, v}, (x, y, v))


def _beginning(supplier: Supplier, coll: PathCollection, x: int, y: int, v: int) -> bool:
    return supplier.exists(coll, {x, y, v}, (v, x, y))


def find_cyclic_break(
    x: Sequence[int], v: int, supplier: Supplier, oracle: DistanceOracle, coll: Optional[PathCollection] = None
) -> tuple[int, int]:
    """Indices ``(s, t)`` into the cyclic list ``x`` around the off-path node ``v``.

    Gap ``i`` joins ``x[i]`` and ``x[i+1]`` (indices mod ``len(x)``).
    ``x[s+1]`` is the node closest from ``v``; ``t`` is the first gap after
    ``s`` without an ending path (``x[t] -> x[t+1] -> v``), which must then
    carry a beginning path (``v -> x[t] -> x[t+1]``).
    """
    if coll is None:
        coll = PathCollection(supplier.graph)
    m = len(x)
    if m < 2:
        raise ValueError("the cyclic list needs at least two nodes")
    row = oracle.rows()[v]
    if any(row[y] is None for y in x):
        raise UnreachableError(f"some node of the cycle is unreachable from {v}")
    near = min(range(m), key=lambda i: (row[x[i]], x[i]))
    s = (near - 1) % m
    if not _ending(supplier, coll, x[s], x[(s + 1) % m], v):
        raise PreconditionFailure(f"no ending path at gap {s} ({x[s]},{x[(s + 1) % m]}) next to the node closest from {v}")
    for step in range(1, m):
        t = (s + step) % m
        if not _ending(supplier, coll, x[t], x[(t + 1) % m], v):
            if not _beginning(supplier, coll, x[t], x[(t + 1) % m], v):
                raise PreconditionFailure(f"gap {t} ({x[t]},{x[(t + 1) % m]}) has neither a beginning nor an ending path")
            return s, t
    raise PreconditionFailure("no break exists: every gap has an ending path")


@dataclass(frozen=True)
class SinglePath:
    index: int


@dataclass(frozen=True)
class TwoPaths:
    index: int
    other: int


CoverOutcome = Union[SinglePath, TwoPaths]


def _w_ends(path: Path, W: frozenset) -> Optional[tuple[int, int]]:
    hits = [x for x in path if x in W]
    if not hits:
        return None
    return hits[0], hits[-1]


def check_cover(coll: PathCollection, W: Iterable[int], outcome: CoverOutcome) -> list[str]:
    """Problems with ``outcome`` as a cover of ``W``; empty when valid."""
    W = frozenset(W)
    problems = []
    if isinstance(outcome, SinglePath):
        path = coll[outcome.index]
        if not path.contains_all(W):
            problems.append(f"path {outcome.index} misses {sorted(W - set(path))}")
        return problems
    P, Q = coll[outcome.index], coll[outcome.other]
    missing = W - set(P) - set(Q)
    if missing:
        problems.append(f"the two paths miss {sorted(missing)}")
    ep, eq = _w_ends(P, W), _w_ends(Q, W)
    if ep is None or eq is None or (eq[0], eq[1]) != (ep[1], ep[0]):
        problems.append(f"boundary mismatch: first/last target nodes {ep} vs {eq}")
    return problems


def _best_path(coll: PathCollection, W: frozenset) -> int:
    best, best_n = 0, -1
    for i, path in enumerate(coll):
        n = sum(1 for x in path if x in W)
        if n > best_n:
            best, best_n = i, n
    return best


def _fmt(nodes: Iterable[int]) -> str:
    return "{" + ",".join(map(str, sorted(set(nodes)))) + "}"


def roundtrip_cover(
    coll: PathCollection, W: Iterable[int], supplier: Supplier, oracle: Optional[DistanceOracle] = None
) -> tuple[PathCollection, CoverOutcome, MergeTrace]:
    """Swap until one path covers ``W`` or two paths cover it as a roundtrip.

    Needs a supplier path through every 11-subset of ``W``. Each iteration
    either grows the largest coverage of a single path or ends the run; more
    than ``|W| + 1`` iterations raise :class:`StructuralInconsistency`.
    """
    oracle = oracle or supplier.oracle
    W = frozenset(W)
    if not W:
        raise ValueError("target node set W is empty")
    trace = MergeTrace()
    if supplier.implicit and not any(set(path) & W for path in coll):
        coll, _, recs = supplier.fetch(coll, {min(W)})
        trace.records.extend(recs)
    if len(coll) == 0:
        raise SupplierExhausted({min(W)}, "empty collection")
    for it in range(len(W) + 1):
        p = _best_path(coll, W)
        P = coll[p]
        Wp = [x for x in P if x in W]
        trace.covered.append(frozenset(Wp))
        if len(Wp) == len(W):
            trace.case_log.append(f"iter={it} case=done path={p}")
            return coll, SinglePath(p), trace
        if not Wp:
            raise SupplierExhausted({min(W)}, "no stored path meets W")
        a, b = Wp[0], Wp[-1]
        Wset = frozenset(Wp)
        rest = sorted(W - Wset)
        traps = {v: trapping_nodes(v, Wset, a, oracle) for v in rest}

        step = _case_insertion(coll, p, a, b, Wset, rest, traps, supplier, trace)
        if step is not None:
            coll, v, case = step
            trace.case_log.append(f"iter={it} case={case} v={v} K={_fmt({a, b, v, *traps[v]})}")
            continue

        seg = classify_segments(subpath(P, a, b), Wset, oracle)
        if seg.kind is PathKind.TRIVIAL:
            raise StructuralInconsistency(
                f"P[{a},{b}] is trivial at {seg.witness} yet no simple insertion applies"
            )

        if seg.kind is PathKind.REVERSING:
            v = rest[0]
            K, spec = _case_reversing(P, a, b, v, traps[v], seg, Wset, oracle)
            case = "3"
        else:
            found = _case_easy(coll, P, a, b, rest, Wp, supplier)
            if found is not None:
                v, K, spec = found
                case = "4"
            else:
                closing = all(
                    supplier.all_paths(coll, {a, b, v, *traps[v]}, lambda o, v=v: _between(o, b, v, a))
                    for v in rest
                )
                if closing:
                    v = rest[0]
                    coll, outcome = _case_close(coll, p, a, b, v, traps[v], W, Wset, supplier, trace)
                    trace.case_log.append(f"iter={it} case=1 v={v} K={_fmt({a, b, v, *traps[v]})}")
                    return coll, outcome, trace
                v, K, spec, sub = _case_hard(coll, a, b, rest, traps, Wp, supplier, oracle)
                case = f"5b.{sub}"
        coll, _, sub_trace = critical_node_reroute(coll, spec, supplier)
        trace.records.extend(sub_trace.records)
        trace.case_log.append(f"iter={it} case={case} v={v} K={_fmt(K)}")
    raise StructuralInconsistency(f"no cover after {len(W) + 1} iterations")


def _between(order: tuple, first: int, mid: int, last: int) -> bool:
    pos = {x: i for i, x in enumerate(order)}
    return pos[first] < pos[mid] < pos[last]


def _case_insertion(coll, p, a, b, Wset, rest, traps, supplier, trace):
    """Simple insertion of one off-path node; returns ``(coll, v, case)`` or None."""
    for v in rest:
        t1, t2 = traps[v].trap1, traps[v].trap2
        heads = [(a, b, v), (v, a, b)] if a != b else [(a, v), (v, a)]
        for order in heads:
            if supplier.exists(coll, order, order):
                coll, q, recs = supplier.fetch(coll, order, order, exclude=(p,))
                trace.records.extend(recs)
                coll = _swap(coll, p, q, a, b, trace)
                if not coll[q].contains_all(Wset | {v}):
                    raise StructuralInconsistency(f"insertion of {v} lost target nodes")
                return coll, v, "2"
        if t1 != t2 and supplier.exists(coll, (t1, v, t2), (t1, v, t2)):
            coll, q, recs = supplier.fetch(coll, (t1, v, t2), (t1, v, t2), exclude=(p,))
            trace.records.extend(recs)
            coll = _swap(coll, p, q, t1, t2, trace)
            if v not in coll[p]:
                raise StructuralInconsistency(f"insertion between {t1} and {t2} lost {v}")
            return coll, v, "2"
    return None


def _case_close(coll, p, a, b, v, trap, W, Wset, supplier, trace):
    """Case 1: build the return path from ``b`` back to ``a`` through ``W - W'``."""
    spec = CriticalSpec(((b, a),), frozenset({v, *trap}), W - Wset)
    coll, q, sub = critical_node_reroute(coll, spec, supplier)
    trace.records.extend(sub.records)
    outcome = TwoPaths(p, q)
    if not check_cover(coll, W, outcome):
        return coll, outcome
    if supplier.implicit:
        # The rerouted path may carry critical nodes outside its b..a stretch;
        # that stretch is itself a shortest path of the implicit family.
        coll, r, recs = supplier.materialize(coll, subpath(coll[q], b, a))
        trace.records.extend(recs)
        outcome = TwoPaths(p, r)
        problems = check_cover(coll, W, outcome)
        if problems:
            raise StructuralInconsistency("; ".join(problems))
        return coll, outcome
    for i in range(len(coll)):
        for j in range(len(coll)):
            if i != j and not check_cover(coll, W, TwoPaths(i, j)):
                return coll, TwoPaths(i, j)
    raise PreconditionFailure(
        f"no stored pair of paths forms a roundtrip cover with matching boundaries (rerouted path {q})"
    )


def _case_reversing(P, a, b, v, trap, seg, Wset, oracle):
    seg1 = seg.segment(1, P)
    seg3 = seg.segment(3, P)
    mid = seg.segment(2, P)
    w, z = seg1[-1], seg3[0]
    row = oracle.rows()[b]
    p_node = min(mid, key=lambda x: (row[x], x))
    q_node = min(mid, key=lambda x: (-row[x], x))
    K = {a, b, w, z, p_node, q_node, v, *trap}
    spec = CriticalSpec(((z, b), (p_node, q_node), (a, w)), frozenset({v, *trap}), Wset | {v})
    return K, spec


def _case_easy(coll, P, a, b, rest, Wp, supplier):
    for v in rest:
        for u, w in zip(Wp, Wp[1:]):
            flipped = supplier.all_paths(coll, {u, w, v}, lambda o, u=u, w=w: o.index(w) < o.index(u))
            if flipped:
                K = {v, a, b, u, w}
                spec = CriticalSpec(((w, b), (a, u)), frozenset({v}), frozenset(Wp) | {v})
                return v, K, spec
    return None


def _case_hard(coll, a, b, rest, traps, Wp, supplier, oracle):
    chosen = None
    for v in rest:
        nodes = {a, b, v, *traps[v]}
        if supplier.exists(coll, nodes, (v, b, a)) or supplier.exists(coll, nodes, (b, a, v)):
            chosen = v
            break
    if chosen is None:
        raise StructuralInconsistency("no node admits v->b->a or b->a->v although the closing case was excluded")
    v = chosen
    x = list(Wp)
    m = len(x)
    s, t = find_cyclic_break(x, v, supplier, oracle, coll)
    xs, xs1, xt, xt1 = x[s], x[(s + 1) % m], x[t], x[(t + 1) % m]
    K = {a, b, xs, xs1, xt, xt1, v, *traps[v]}
    coll_probe, q, _ = supplier.fetch(coll, K)
    Q = coll_probe[q]
    if Q.before(xs, xt1):
        if not _between(Q.order_of(K), xs, v, xt1):
            raise StructuralInconsistency(f"node {v} is not between {xs} and {xt1} on the fetched path")
        raise StructuralInconsistency(f"fetched path visits {xs} before {xt1}, which cannot happen")
    if Q.before(xt, xs1):
        raise StructuralInconsistency(f"fetched path visits {xt} before {xs1}")
    bi = m - 1
    if bi in (s, t):
        pairs = [(xt1, xs), (xs1, xt)]
        sub = 1
    elif _cyclically_between(bi, s, t, m):
        pairs = [(a, xt), (xt1, xs)]
        if b != xs1:
            pairs.append((xs1, b))
        sub = 2
    else:
        pairs = [(a, xs), (xs1, xt)]
        if b != xt1:
            pairs.append((xt1, b))
        sub = 3
    pair_nodes = {y for pair in pairs for y in pair}
    spec = CriticalSpec(tuple(pairs), frozenset(K - pair_nodes), frozenset(Wp) | {v})
    return v, K, spec, sub


def _cyclically_between(i: int, lo: int, hi: int, m: int) -> bool:
    """Is ``i`` strictly inside the cyclic index range from ``lo`` to ``hi``? Empty when ``hi = lo + 1``."""
    return 0 < (i - lo) % m < (hi - lo) % m
