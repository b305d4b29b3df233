import itertools

import pytest
from hypothesis import strategies as st

from vcp3tw.graph import Graph

_acceptance_results = []


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def subgraph_view(nd, t):
    """Vertices and introduced edges of the subtree rooted at node ``t``."""
    verts, edges = set(), set()
    stack = [t]
    while stack:
        x = stack.pop()
        node = nd.nodes[x]
        verts.update(node.bag)
        if node.edge is not None:
            edges.add(node.edge)
        stack.extend(node.children)
    return verts, edges


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def c5():
    return cycle(5)
