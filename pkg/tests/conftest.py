import random
import sys

import pytest

from bihole_lab.graph import BipartiteGraph


def random_graph(rng: random.Random, n: int, p: float) -> BipartiteGraph:
    return BipartiteGraph.from_edges(n, n, [(u, v) for u in range(n) for v in range(n) if rng.random() < p])


def random_bounded(rng: random.Random, n: int, dmax: int) -> BipartiteGraph:
    """Random graph with every degree at most ``dmax`` (edges added while both ends have room)."""
    deg_l, deg_r = [0] * n, [0] * n
    edges = set()
    for _ in range(rng.randint(0, n * dmax)):
        u, v = rng.randrange(n), rng.randrange(n)
        if (u, v) not in edges and deg_l[u] < dmax and deg_r[v] < dmax:
            edges.add((u, v))
            deg_l[u] += 1
            deg_r[v] += 1
    return BipartiteGraph.from_edges(n, n, edges)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    results = getattr(acc, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
