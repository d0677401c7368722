"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CongestedPathError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(CongestedPathError, ValueError):
    """Invalid graph construction (bad weight, self-loop, parallel edge, bad id)."""


class FormatError(CongestedPathError, ValueError):
    """Malformed graph, instance or trace text."""


class UnreachableError(CongestedPathError, ValueError):
    """A shortest path was requested between nodes with no path between them."""


class OrderingError(CongestedPathError, ValueError):
    """A node sequence is not a shortest-path ordering (or has duplicates)."""


class SwapError(CongestedPathError, ValueError):
    """A subpath swap was requested with invalid indices or node order."""


class CongestionViolation(CongestedPathError):
    """Some node lies on more paths than the congestion budget allows."""

    def __init__(self, node: int, count: int, budget: int) -> None:
        super().__init__(f"node {node} lies on {count} paths, budget is {budget}")
        self.node = node
        self.count = count
        self.budget = budget


class BudgetExceeded(CongestedPathError):
    """A search ran out of its expansion or enumeration budget.

    Distinct from infeasibility: nothing can be concluded about the instance.
    """


class UnsupportedGraph(CongestedPathError):
    """The requested algorithm is not defined for this graph class."""


class SupplierExhausted(CongestedPathError):
    """No supplier path contains a required node set.

    Signals that the local covering precondition does not hold for the
    current collection; ``nodes`` is the offending subset.
    """

    def __init__(self, nodes, detail: str = "") -> None:
        self.nodes = tuple(sorted(nodes))
        msg = f"no supplier path contains {list(self.nodes)}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PreconditionFailure(CongestedPathError):
    """A rerouting precondition is violated by the supplied paths."""


class StructuralInconsistency(CongestedPathError, AssertionError):
    """An invariant that is a theorem was observed to fail.

    Raised only when the implementation (or a supplier that breaks its
    contract) is buggy; never an expected outcome.
    """
