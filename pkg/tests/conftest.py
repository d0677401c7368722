from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from congested_sp import Graph, all_pairs_distances

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def d4() -> Graph:
    """Directed unit 4-cycle 0 -> 1 -> 2 -> 3 -> 0."""
    return Graph(True, 4, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)))


@pytest.fixture
def c4() -> Graph:
    """Undirected unit 4-cycle."""
    return Graph(False, 4, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)))


@pytest.fixture
def r3() -> Graph:
    """0 <-> 1 <-> 2 with unit weights: the reversing gadget."""
    return Graph(True, 3, ((0, 1, 1), (1, 2, 1), (2, 1, 1), (1, 0, 1)))


@pytest.fixture
def chain3() -> Graph:
    return Graph(True, 3, ((0, 1, 1), (1, 2, 1)))


@pytest.fixture
def diamond() -> Graph:
    """Undirected a=0, x=1, y=2, b=3 with edges a-x, x-b, a-y, y-b."""
    return Graph(False, 4, ((0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)))


@pytest.fixture
def diamond_dag() -> Graph:
    return Graph(True, 4, ((0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)))


@pytest.fixture
def oracle_of():
    return all_pairs_distances


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
