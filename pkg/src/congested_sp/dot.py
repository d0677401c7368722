"""Graphviz DOT text for graphs, solution paths and target node sets."""

from __future__ import annotations

from typing import Iterable, Sequence

from .graph import Graph
from .paths import Path, SwapRecord

PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "deeppink", "cyan4", "gold3", "gray40")


def path_color(i: int) -> str:
    return PALETTE[i % len(PALETTE)]


def export_dot(
    graph: Graph,
    paths: Sequence[Path] = (),
    W: Iterable[int] = (),
    trace: Sequence = (),
    name: str = "G",
) -> str:
    """DOT source: nodes labelled by id, target nodes double-circled, path ``i`` drawn in ``path_color(i)``.

    Every path edge is an extra coloured edge on top of the plain graph edge.
    Swap records, if given, become comment lines in application order.
    """
    directed = graph.directed
    arrow = "->" if directed else "--"
    targets = set(W)
    out = [f"{'digraph' if directed else 'graph'} {name} {{"]
    for rec in trace:
        if isinstance(rec, SwapRecord):
            out.append(f"  // {rec}")
    for x in graph.nodes:
        shape = "doublecircle" if x in targets else "circle"
        out.append(f'  {x} [label="{x}", shape={shape}];')
    for u, v, w in graph.edges:
        out.append(f'  {u} {arrow} {v} [label="{w}", color=gray70];')
    for i, path in enumerate(paths):
        color = path_color(i)
        for u, v in zip(path.nodes, path.nodes[1:]):
            out.append(f'  {u} {arrow} {v} [color={color}, penwidth=2, label="P{i}", fontcolor={color}];')
    out.append("}")
    return "\n".join(out) + "\n"
