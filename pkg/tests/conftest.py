from math import comb

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rigidcuts.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    mask = draw(st.integers(0, (1 << comb(n, 2)) - 1)) if n >= 2 else 0
    return Graph.from_edge_mask(n, mask)


@st.composite
def pair_sets(draw, n, max_size=3):
    if n < 2:
        return []
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    return draw(st.lists(pairs, max_size=max_size, unique_by=lambda e: frozenset(e)))


@pytest.fixture
def c4():
    return Graph.cycle(4)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
